#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rulerkit/rope.hpp"

namespace rulerkit {

// Per-token multi-axis position. Axis order is fixed: (t, h, w) with three
// axes, (h, w) with two. Coordinates are signed.
class PositionId {
  public:
    PositionId() = default;

    static PositionId uniform(int axis_count, std::int64_t m);
    static PositionId hw(std::int64_t h, std::int64_t w) { return PositionId({h, w, 0}, 2); }
    static PositionId thw(std::int64_t t, std::int64_t h, std::int64_t w) {
        return PositionId({t, h, w}, 3);
    }

    int axis_count() const { return count_; }
    std::int64_t operator[](int axis) const { return coords_[static_cast<std::size_t>(axis)]; }
    std::int64_t& operator[](int axis) { return coords_[static_cast<std::size_t>(axis)]; }

    bool all_axes_equal() const;
    PositionId componentwise_sub(const PositionId& other) const;
    PositionId negated() const;

    bool operator==(const PositionId&) const = default;

    // "(h,w)" or "(t,h,w)", no spaces.
    std::string to_string() const;

  private:
    PositionId(std::array<std::int64_t, 3> coords, int count) : coords_(coords), count_(count) {}

    std::array<std::int64_t, 3> coords_{};
    int count_ = 0;
};

enum class AxisMode { kSequential, kInterleaved };

// Maps each frequency index j to the axis that owns it. Sequential mode
// carves the spectrum into consecutive per-axis chunks; interleaved mode
// assigns axis by j mod axis_count (3 axes: 0->w, 1->h, 2->t; 2 axes:
// 0->h, 1->w).
struct AxisAssignment {
    int axis_count = 0;
    int half_dim = 0;
    AxisMode mode = AxisMode::kSequential;
    std::vector<int> mapping;       // mapping[j] = axis index owning frequency j
    std::vector<int> section_sizes; // sequential mode only
};

// Name of an axis index under this assignment's axis order.
std::string axis_name(const AxisAssignment& assign, int axis);

// section_sizes applies to sequential mode only; the default sequential
// split is near-equal with the remainder given to the earliest axes.
AxisAssignment assign_axes(int half_dim, int axis_count, AxisMode mode,
                           std::optional<std::vector<int>> section_sizes = std::nullopt);

// Rotates pair j of v by pos[mapping[j]] * thetas[j]. With all axes equal
// to m this performs the exact same per-pair arithmetic as
// apply_rotation(v, m, spec).
std::vector<double> apply_mrope(std::span<const double> v, const PositionId& pos,
                                const AxisAssignment& assign, const FrequencySpectrum& spec);

struct AxisFrequencyStats {
    int axis = 0;
    int count = 0;
    double theta_min = 0.0;
    double theta_max = 0.0;
    int j_min = 0;
    int j_max = 0;
};

// Per-axis summary of the frequencies an assignment hands to each axis.
std::vector<AxisFrequencyStats> axis_frequency_profile(const AxisAssignment& assign,
                                                       const FrequencySpectrum& spec);

} // namespace rulerkit
