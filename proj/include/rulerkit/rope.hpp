#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rulerkit {

inline constexpr double kDefaultRopeBase = 10000.0;

// Frequency spectrum of a rotary embedding: thetas[j] = base^(-2j/head_dim)
// for j = 0 .. head_dim/2 - 1. thetas[0] is always exactly 1.
struct FrequencySpectrum {
    int head_dim = 0;
    double base = kDefaultRopeBase;
    std::vector<double> thetas;

    int half_dim() const { return head_dim / 2; }
};

FrequencySpectrum make_spectrum(int head_dim, double base = kDefaultRopeBase);

// Rotates each consecutive pair (values[2j], values[2j+1]) by angles[j].
std::vector<double> rotate_pairs(std::span<const double> values, std::span<const double> angles);

// Transposed (inverse) rotation with the same angles.
std::vector<double> rotate_pairs_transposed(std::span<const double> values,
                                            std::span<const double> angles);

// Rotates pair j of v by m * thetas[j]. Pairing is consecutive dimensions
// (2j, 2j+1); positions are signed.
std::vector<double> apply_rotation(std::span<const double> v, std::int64_t m,
                                   const FrequencySpectrum& spec);

// Gradient of apply_rotation w.r.t. its input given an upstream cotangent,
// i.e. the transposed rotation (equals apply_rotation at position -m).
std::vector<double> rotation_gradient(std::span<const double> upstream, std::int64_t m,
                                      const FrequencySpectrum& spec);

} // namespace rulerkit
