#include "rulerkit/mrope.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rulerkit {

PositionId PositionId::uniform(int axis_count, std::int64_t m) {
    if (axis_count != 2 && axis_count != 3) {
        throw std::invalid_argument("axis_count must be 2 or 3");
    }
    PositionId pos;
    pos.count_ = axis_count;
    for (int a = 0; a < axis_count; ++a) {
        pos.coords_[static_cast<std::size_t>(a)] = m;
    }
    return pos;
}

bool PositionId::all_axes_equal() const {
    for (int a = 1; a < count_; ++a) {
        if (coords_[static_cast<std::size_t>(a)] != coords_[0]) {
            return false;
        }
    }
    return true;
}

PositionId PositionId::componentwise_sub(const PositionId& other) const {
    if (other.count_ != count_) {
        throw std::invalid_argument("axis count mismatch in position subtraction");
    }
    PositionId out = *this;
    for (int a = 0; a < count_; ++a) {
        out.coords_[static_cast<std::size_t>(a)] -= other.coords_[static_cast<std::size_t>(a)];
    }
    return out;
}

PositionId PositionId::negated() const {
    PositionId out = *this;
    for (int a = 0; a < count_; ++a) {
        out.coords_[static_cast<std::size_t>(a)] = -out.coords_[static_cast<std::size_t>(a)];
    }
    return out;
}

std::string PositionId::to_string() const {
    std::string s = "(";
    for (int a = 0; a < count_; ++a) {
        if (a > 0) {
            s += ',';
        }
        s += std::to_string(coords_[static_cast<std::size_t>(a)]);
    }
    s += ')';
    return s;
}

std::string axis_name(const AxisAssignment& assign, int axis) {
    static const char* const kThree[] = {"t", "h", "w"};
    static const char* const kTwo[] = {"h", "w"};
    if (axis < 0 || axis >= assign.axis_count) {
        throw std::invalid_argument("axis index out of range");
    }
    return assign.axis_count == 3 ? kThree[axis] : kTwo[axis];
}

AxisAssignment assign_axes(int half_dim, int axis_count, AxisMode mode,
                           std::optional<std::vector<int>> section_sizes) {
    if (half_dim < 1) {
        throw std::invalid_argument("half_dim must be positive");
    }
    if (axis_count != 2 && axis_count != 3) {
        throw std::invalid_argument("axis_count must be 2 or 3");
    }

    AxisAssignment assign;
    assign.axis_count = axis_count;
    assign.half_dim = half_dim;
    assign.mode = mode;
    assign.mapping.resize(static_cast<std::size_t>(half_dim));

    if (mode == AxisMode::kInterleaved) {
        if (section_sizes.has_value()) {
            throw std::invalid_argument("section_sizes does not apply to interleaved mode");
        }
        // Cyclic residue rule. Three axes: j mod 3 = 0 -> w, 1 -> h, 2 -> t;
        // two axes: j mod 2 = 0 -> h, 1 -> w. Axis order is (t,h,w) / (h,w).
        for (int j = 0; j < half_dim; ++j) {
            const int r = j % axis_count;
            assign.mapping[static_cast<std::size_t>(j)] = axis_count == 3 ? 2 - r : r;
        }
        return assign;
    }

    std::vector<int> sizes;
    if (section_sizes.has_value()) {
        sizes = *section_sizes;
        if (static_cast<int>(sizes.size()) != axis_count) {
            throw std::invalid_argument("section_sizes must have one entry per axis");
        }
        for (int sz : sizes) {
            if (sz < 0) {
                throw std::invalid_argument("section sizes must be non-negative");
            }
        }
        if (std::accumulate(sizes.begin(), sizes.end(), 0) != half_dim) {
            throw std::invalid_argument("section sizes must sum to half_dim");
        }
    } else {
        // Near-equal split, remainder to the earliest axes. The first axis
        // (temporal with three axes) owns the lowest j, i.e. the highest
        // frequencies.
        sizes.assign(static_cast<std::size_t>(axis_count), half_dim / axis_count);
        for (int a = 0; a < half_dim % axis_count; ++a) {
            ++sizes[static_cast<std::size_t>(a)];
        }
    }
    assign.section_sizes = sizes;
    int j = 0;
    for (int a = 0; a < axis_count; ++a) {
        for (int k = 0; k < sizes[static_cast<std::size_t>(a)]; ++k) {
            assign.mapping[static_cast<std::size_t>(j++)] = a;
        }
    }
    return assign;
}

std::vector<double> apply_mrope(std::span<const double> v, const PositionId& pos,
                                const AxisAssignment& assign, const FrequencySpectrum& spec) {
    if (spec.head_dim != 2 * assign.half_dim) {
        throw std::invalid_argument("spectrum head_dim does not match assignment half_dim");
    }
    if (v.size() != static_cast<std::size_t>(spec.head_dim)) {
        throw std::invalid_argument("vector length does not match head_dim");
    }
    if (pos.axis_count() != assign.axis_count) {
        throw std::invalid_argument("position axis count does not match assignment");
    }
    std::vector<double> angles(spec.thetas.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
        angles[j] = static_cast<double>(pos[assign.mapping[j]]) * spec.thetas[j];
    }
    return rotate_pairs(v, angles);
}

std::vector<AxisFrequencyStats> axis_frequency_profile(const AxisAssignment& assign,
                                                       const FrequencySpectrum& spec) {
    if (spec.head_dim != 2 * assign.half_dim) {
        throw std::invalid_argument("spectrum head_dim does not match assignment half_dim");
    }
    std::vector<AxisFrequencyStats> stats(static_cast<std::size_t>(assign.axis_count));
    for (int a = 0; a < assign.axis_count; ++a) {
        stats[static_cast<std::size_t>(a)].axis = a;
    }
    for (int j = 0; j < assign.half_dim; ++j) {
        auto& st = stats[static_cast<std::size_t>(assign.mapping[static_cast<std::size_t>(j)])];
        const double theta = spec.thetas[static_cast<std::size_t>(j)];
        if (st.count == 0) {
            st.theta_min = st.theta_max = theta;
            st.j_min = st.j_max = j;
        } else {
            st.theta_min = std::min(st.theta_min, theta);
            st.theta_max = std::max(st.theta_max, theta);
            st.j_min = std::min(st.j_min, j);
            st.j_max = std::max(st.j_max, j);
        }
        ++st.count;
    }
    return stats;
}

} // namespace rulerkit
