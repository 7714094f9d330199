#include "rulerkit/attention.hpp"

#include <cmath>
#include <stdexcept>

namespace rulerkit {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

// Tie tolerance for argmax over ruler scores. Symmetric offsets produce
// genuinely equal scores; do not hide them.
constexpr double kTieTol = 1e-9;

} // namespace

AttentionConfig make_attention_config(FrequencySpectrum spec, AxisAssignment assign,
                                      double scale) {
    if (spec.head_dim != 2 * assign.half_dim) {
        throw std::invalid_argument("spectrum head_dim does not match assignment half_dim");
    }
    AttentionConfig cfg;
    cfg.scale = scale > 0.0 ? scale : 1.0 / std::sqrt(static_cast<double>(spec.head_dim));
    cfg.spec = std::move(spec);
    cfg.assign = std::move(assign);
    return cfg;
}

double score(std::span<const double> q, std::span<const double> k, const PositionId& pos_q,
             const PositionId& pos_k, const AttentionConfig& cfg) {
    const std::vector<double> rq = apply_mrope(q, pos_q, cfg.assign, cfg.spec);
    const std::vector<double> rk = apply_mrope(k, pos_k, cfg.assign, cfg.spec);
    return cfg.scale * dot(rq, rk);
}

std::vector<double> score_gradient_q(std::span<const double> k, const PositionId& pos_q,
                                     const PositionId& pos_k, const AttentionConfig& cfg) {
    // score is linear in q: score = scale * q^T R(pos_q)^T R(pos_k) k.
    const std::vector<double> rk = apply_mrope(k, pos_k, cfg.assign, cfg.spec);
    std::vector<double> angles(cfg.spec.thetas.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
        angles[j] = static_cast<double>(pos_q[cfg.assign.mapping[j]]) * cfg.spec.thetas[j];
    }
    std::vector<double> grad = rotate_pairs_transposed(rk, angles);
    for (double& g : grad) {
        g *= cfg.scale;
    }
    return grad;
}

std::vector<double> ruler_scores(const ImageGrid& grid, const RulerTokenSet& rulers, int row,
                                 int col, const AttentionConfig& cfg,
                                 std::span<const double> probe_vector) {
    if (row < 0 || row >= grid.patch_rows || col < 0 || col >= grid.patch_cols) {
        throw std::invalid_argument("probe (" + std::to_string(row) + "," + std::to_string(col) +
                                    ") is outside the " + std::to_string(grid.patch_rows) + "x" +
                                    std::to_string(grid.patch_cols) + " grid");
    }
    if (probe_vector.size() != static_cast<std::size_t>(cfg.spec.head_dim)) {
        throw std::invalid_argument("probe vector length does not match head_dim");
    }
    for (std::size_t j = 0; j + 1 < probe_vector.size(); j += 2) {
        if (probe_vector[j] == 0.0 && probe_vector[j + 1] == 0.0) {
            throw std::invalid_argument("probe vector must have all-positive pair norms");
        }
    }
    const PositionId vision_pos =
        cfg.assign.axis_count == 3
            ? PositionId::thw(grid.t0, grid.t0 + row, grid.t0 + col)
            : PositionId::hw(grid.t0 + row, grid.t0 + col);
    std::vector<double> scores;
    scores.reserve(rulers.tokens.size());
    for (const RulerToken& token : rulers.tokens) {
        scores.push_back(score(probe_vector, probe_vector, vision_pos, token.position, cfg));
    }
    return scores;
}

RulerPeak ruler_peak(const ImageGrid& grid, const RulerTokenSet& rulers, int row, int col,
                     const AttentionConfig& cfg, std::span<const double> probe_vector) {
    if (rulers.tokens.empty()) {
        throw std::invalid_argument("ruler token set is empty");
    }
    const std::vector<double> scores = ruler_scores(grid, rulers, row, col, cfg, probe_vector);
    double max_score = scores[0];
    for (double s : scores) {
        max_score = std::max(max_score, s);
    }
    const double tol = kTieTol * std::max(1.0, std::abs(max_score));
    RulerPeak peak;
    std::size_t winner = scores.size();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (max_score - scores[i] <= tol) {
            if (winner == scores.size()) {
                winner = i; // smallest index wins on ties
            } else {
                peak.tie = true;
            }
        }
    }
    peak.grid_index = rulers.tokens[winner].grid_index;
    return peak;
}

} // namespace rulerkit
