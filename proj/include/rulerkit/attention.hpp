#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rulerkit/mrope.hpp"
#include "rulerkit/sequence.hpp"

namespace rulerkit {

// Single-head scaffold: positional scheme plus score scale (default 1/sqrt(d)).
struct AttentionConfig {
    FrequencySpectrum spec;
    AxisAssignment assign;
    double scale = 0.0;
};

AttentionConfig make_attention_config(FrequencySpectrum spec, AxisAssignment assign,
                                      double scale = 0.0);

// scale * <apply_mrope(q, pos_q), apply_mrope(k, pos_k)>
double score(std::span<const double> q, std::span<const double> k, const PositionId& pos_q,
             const PositionId& pos_k, const AttentionConfig& cfg);

// Gradient of score w.r.t. q: scale * R(pos_q)^T R(pos_k) k.
std::vector<double> score_gradient_q(std::span<const double> k, const PositionId& pos_q,
                                     const PositionId& pos_k, const AttentionConfig& cfg);

// Score of the probe vector against every ruler token, placed at the vision
// position (row, col) of the grid. Order follows rulers.tokens.
std::vector<double> ruler_scores(const ImageGrid& grid, const RulerTokenSet& rulers, int row,
                                 int col, const AttentionConfig& cfg,
                                 std::span<const double> probe_vector);

struct RulerPeak {
    std::int64_t grid_index = 0; // smallest index among tied maxima
    bool tie = false;
};

// Ruler token with maximal score against the vision token at (row, col).
// The probe vector must have all-positive pair norms.
RulerPeak ruler_peak(const ImageGrid& grid, const RulerTokenSet& rulers, int row, int col,
                     const AttentionConfig& cfg, std::span<const double> probe_vector);

} // namespace rulerkit
