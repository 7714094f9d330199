#include "rulerkit/rope.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rulerkit {

FrequencySpectrum make_spectrum(int head_dim, double base) {
    if (head_dim < 2 || head_dim % 2 != 0) {
        throw std::invalid_argument("head_dim must be a positive even integer, got " +
                                    std::to_string(head_dim));
    }
    if (!(base > 0.0)) {
        throw std::invalid_argument("base must be positive");
    }
    FrequencySpectrum spec;
    spec.head_dim = head_dim;
    spec.base = base;
    spec.thetas.resize(static_cast<std::size_t>(head_dim / 2));
    // pow(base, -0.0) == 1.0 exactly, so thetas[0] is always 1.
    for (std::size_t j = 0; j < spec.thetas.size(); ++j) {
        spec.thetas[j] = std::pow(base, -2.0 * static_cast<double>(j) / head_dim);
    }
    return spec;
}

std::vector<double> rotate_pairs(std::span<const double> values, std::span<const double> angles) {
    if (values.size() != 2 * angles.size()) {
        throw std::invalid_argument("rotate_pairs: value count must be twice the angle count");
    }
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
        const double c = std::cos(angles[j]);
        const double s = std::sin(angles[j]);
        const double v0 = values[2 * j];
        const double v1 = values[2 * j + 1];
        out[2 * j] = c * v0 - s * v1;
        out[2 * j + 1] = s * v0 + c * v1;
    }
    return out;
}

std::vector<double> rotate_pairs_transposed(std::span<const double> values,
                                            std::span<const double> angles) {
    if (values.size() != 2 * angles.size()) {
        throw std::invalid_argument("rotate_pairs: value count must be twice the angle count");
    }
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
        const double c = std::cos(angles[j]);
        const double s = std::sin(angles[j]);
        const double v0 = values[2 * j];
        const double v1 = values[2 * j + 1];
        out[2 * j] = c * v0 + s * v1;
        out[2 * j + 1] = -s * v0 + c * v1;
    }
    return out;
}

namespace {

void check_dim(std::size_t got, const FrequencySpectrum& spec) {
    if (got != static_cast<std::size_t>(spec.head_dim)) {
        throw std::invalid_argument("vector length " + std::to_string(got) +
                                    " does not match head_dim " + std::to_string(spec.head_dim));
    }
}

} // namespace

std::vector<double> apply_rotation(std::span<const double> v, std::int64_t m,
                                   const FrequencySpectrum& spec) {
    check_dim(v.size(), spec);
    std::vector<double> angles(spec.thetas.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
        angles[j] = static_cast<double>(m) * spec.thetas[j];
    }
    return rotate_pairs(v, angles);
}

std::vector<double> rotation_gradient(std::span<const double> upstream, std::int64_t m,
                                      const FrequencySpectrum& spec) {
    check_dim(upstream.size(), spec);
    std::vector<double> angles(spec.thetas.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
        angles[j] = static_cast<double>(m) * spec.thetas[j];
    }
    return rotate_pairs_transposed(upstream, angles);
}

} // namespace rulerkit
