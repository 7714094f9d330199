#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <random>

#include "rulerkit/attention.hpp"

using namespace rulerkit;

namespace {

AttentionConfig config_2d(int head_dim, AxisMode mode = AxisMode::kInterleaved,
                          double scale = 0.0) {
    return make_attention_config(make_spectrum(head_dim), assign_axes(head_dim / 2, 2, mode),
                                 scale);
}

// Closed form for an all-ones probe against itself: every pair contributes
// 2 cos of its angle difference. Independent of the rotation kernels.
double diagonal_reference_score(std::int64_t delta, const AttentionConfig& cfg) {
    double acc = 0.0;
    for (double theta : cfg.spec.thetas) {
        acc += 2.0 * std::cos(static_cast<double>(delta) * theta);
    }
    return cfg.scale * acc;
}

} // namespace

TEST_CASE("matched positions score the squared norm") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const auto cfg = config_2d(16);
    std::vector<double> q(16);
    for (double& x : q) {
        x = dist(rng);
    }
    double sq = 0.0;
    for (double x : q) {
        sq += x * x;
    }
    const auto pos = PositionId::hw(7, 3);
    CHECK(score(q, q, pos, pos, cfg) == doctest::Approx(cfg.scale * sq).epsilon(1e-12));
}

TEST_CASE("single-pair score is the cosine of the offset angle") {
    const auto cfg = make_attention_config(make_spectrum(2), assign_axes(1, 2, AxisMode::kInterleaved),
                                           1.0);
    const std::vector<double> v = {1.0, 0.0};
    // Offset 3 along the sole mapped axis (h); w owns no frequency here.
    const double s = score(v, v, PositionId::hw(3, 5), PositionId::hw(0, 5), cfg);
    CHECK(s == doctest::Approx(-0.9899924966004454).epsilon(1e-15)); // cos 3
}

TEST_CASE("shifting both positions leaves the score unchanged") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const auto cfg = config_2d(32, AxisMode::kSequential);
    std::vector<double> q(32);
    std::vector<double> k(32);
    for (double& x : q) {
        x = dist(rng);
    }
    for (double& x : k) {
        x = dist(rng);
    }
    const double before = score(q, k, PositionId::hw(4, 9), PositionId::hw(2, 11), cfg);
    const double after = score(q, k, PositionId::hw(104, 109), PositionId::hw(102, 111), cfg);
    CHECK(std::abs(before - after) <= 1e-9);
}

TEST_CASE("score validates dimensions") {
    const auto cfg = config_2d(8);
    const std::vector<double> good(8, 1.0);
    const std::vector<double> bad(6, 1.0);
    CHECK_THROWS_AS(score(bad, good, PositionId::hw(0, 0), PositionId::hw(0, 0), cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(score(good, good, PositionId::thw(0, 0, 0), PositionId::hw(0, 0), cfg),
                    std::invalid_argument);
}

TEST_CASE("ruler peak retrieves the nearest reference for a diagonal probe") {
    const auto cfg = config_2d(32);
    const std::vector<double> probe(32, 1.0);
    const auto grid = build_grid(16 * 28, 16 * 28, 28, 0);
    const auto rulers = build_ruler_tokens(grid, 4, 2);

    // Brute-force oracle over the closed-form score.
    std::int64_t best_index = -1;
    double best_score = -1e300;
    for (const auto& token : rulers.tokens) {
        const double s = diagonal_reference_score(9 - token.grid_index, cfg);
        if (s > best_score) {
            best_score = s;
            best_index = token.grid_index;
        }
    }
    REQUIRE(best_index == 8);

    const auto peak = ruler_peak(grid, rulers, 9, 9, cfg, probe);
    CHECK(peak.grid_index == 8);
    CHECK_FALSE(peak.tie);
}

TEST_CASE("an exact position match wins with the full self score") {
    const auto cfg = config_2d(32);
    const std::vector<double> probe(32, 1.0);
    const auto grid = build_grid(16 * 28, 16 * 28, 28, 0);
    const auto rulers = build_ruler_tokens(grid, 4, 2);
    const auto peak = ruler_peak(grid, rulers, 8, 8, cfg, probe);
    CHECK(peak.grid_index == 8);
    CHECK_FALSE(peak.tie);
    const auto scores = ruler_scores(grid, rulers, 8, 8, cfg, probe);
    CHECK(scores[2] == doctest::Approx(cfg.scale * 32.0).epsilon(1e-12)); // |probe|^2 = 32
}

TEST_CASE("equidistant references tie and the smaller index is reported") {
    const auto cfg = config_2d(32);
    const std::vector<double> probe(32, 1.0);
    const auto grid = build_grid(16 * 28, 16 * 28, 28, 0);
    const auto rulers = build_ruler_tokens(grid, 4, 2);
    const auto scores = ruler_scores(grid, rulers, 10, 10, cfg, probe);
    CHECK(std::abs(scores[2] - scores[3]) <= 1e-12); // indices 8 and 12
    const auto peak = ruler_peak(grid, rulers, 10, 10, cfg, probe);
    CHECK(peak.grid_index == 8);
    CHECK(peak.tie);
}

TEST_CASE("ruler peak rejects probes outside the grid and zero pairs") {
    const auto cfg = config_2d(8);
    const auto grid = build_grid(4 * 28, 4 * 28, 28, 0);
    const auto rulers = build_ruler_tokens(grid, 2, 2);
    const std::vector<double> probe(8, 1.0);
    CHECK_THROWS_AS(ruler_peak(grid, rulers, 4, 0, cfg, probe), std::invalid_argument);
    CHECK_THROWS_AS(ruler_peak(grid, rulers, 0, -1, cfg, probe), std::invalid_argument);
    std::vector<double> zero_pair(8, 1.0);
    zero_pair[2] = zero_pair[3] = 0.0;
    CHECK_THROWS_AS(ruler_peak(grid, rulers, 0, 0, cfg, zero_pair), std::invalid_argument);
}

TEST_CASE("score gradient matches central finite differences") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const auto cfg = config_2d(16);
    std::vector<double> q(16);
    std::vector<double> k(16);
    for (double& x : q) {
        x = dist(rng);
    }
    for (double& x : k) {
        x = dist(rng);
    }
    const auto pq = PositionId::hw(5, -2);
    const auto pk = PositionId::hw(1, 4);
    const auto grad = score_gradient_q(k, pq, pk, cfg);
    const double step = 1e-5;
    for (int i = 0; i < 16; ++i) {
        const double saved = q[static_cast<std::size_t>(i)];
        q[static_cast<std::size_t>(i)] = saved + step;
        const double plus = score(q, k, pq, pk, cfg);
        q[static_cast<std::size_t>(i)] = saved - step;
        const double minus = score(q, k, pq, pk, cfg);
        q[static_cast<std::size_t>(i)] = saved;
        const double fd = (plus - minus) / (2 * step);
        CHECK(std::abs(grad[static_cast<std::size_t>(i)] - fd) <=
              1e-6 * std::max(1.0, std::abs(fd)));
    }
}
