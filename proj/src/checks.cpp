#include "rulerkit/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "rulerkit/attention.hpp"
#include "rulerkit/cli.hpp"
#include "rulerkit/eval.hpp"
#include "rulerkit/mrope.hpp"
#include "rulerkit/rope.hpp"
#include "rulerkit/sequence.hpp"

namespace rulerkit {

namespace {

using Rng = std::mt19937_64;
using CheckFn = std::optional<std::string> (*)(Rng&);

std::int64_t rand_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

double rand_real(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<double> rand_vector(Rng& rng, int dim) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) {
        x = rand_real(rng, -1.0, 1.0);
    }
    return v;
}

double norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return std::sqrt(acc);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

int rand_head_dim(Rng& rng) {
    static const int kDims[] = {4, 8, 16, 32, 64};
    return kDims[rand_int(rng, 0, 4)];
}

AxisMode rand_mode(Rng& rng) {
    return rand_int(rng, 0, 1) == 0 ? AxisMode::kSequential : AxisMode::kInterleaved;
}

PositionId rand_position(Rng& rng, int axis_count, std::int64_t lo, std::int64_t hi) {
    PositionId pos = PositionId::uniform(axis_count, 0);
    for (int a = 0; a < axis_count; ++a) {
        pos[a] = rand_int(rng, lo, hi);
    }
    return pos;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// --- rope ---------------------------------------------------------------

std::optional<std::string> check_rope_norm_preservation(Rng& rng) {
    for (int it = 0; it < 1000; ++it) {
        const int d = rand_head_dim(rng);
        const auto spec = make_spectrum(d);
        const auto v = rand_vector(rng, d);
        const std::int64_t m = rand_int(rng, -10000, 10000);
        const auto out = apply_rotation(v, m, spec);
        if (std::abs(norm(out) - norm(v)) > 1e-12) {
            return fmt("norm drift %.3e at d=%d m=%lld", std::abs(norm(out) - norm(v)), d,
                       static_cast<long long>(m));
        }
        for (int j = 0; j < d / 2; ++j) {
            const double before = v[2 * j] * v[2 * j] + v[2 * j + 1] * v[2 * j + 1];
            const double after = out[2 * j] * out[2 * j] + out[2 * j + 1] * out[2 * j + 1];
            if (std::abs(before - after) > 1e-12) {
                return fmt("pair %d norm drift %.3e", j, std::abs(before - after));
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_rope_relative_position(Rng& rng) {
    for (int it = 0; it < 1000; ++it) {
        const int d = rand_head_dim(rng);
        const auto spec = make_spectrum(d);
        const auto q = rand_vector(rng, d);
        const auto k = rand_vector(rng, d);
        const std::int64_t m = rand_int(rng, -10000, 10000);
        const std::int64_t n = rand_int(rng, -10000, 10000);
        const double lhs = dot(apply_rotation(q, m, spec), apply_rotation(k, n, spec));
        const double rhs = dot(apply_rotation(q, m - n, spec), k);
        if (std::abs(lhs - rhs) > 1e-9) {
            return fmt("identity gap %.3e at d=%d m=%lld n=%lld", std::abs(lhs - rhs), d,
                       static_cast<long long>(m), static_cast<long long>(n));
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_rope_composition(Rng& rng) {
    for (int it = 0; it < 1000; ++it) {
        const int d = rand_head_dim(rng);
        const auto spec = make_spectrum(d);
        const auto v = rand_vector(rng, d);
        const std::int64_t m = rand_int(rng, -5000, 5000);
        const std::int64_t n = rand_int(rng, -5000, 5000);
        const auto composed = apply_rotation(apply_rotation(v, m, spec), n, spec);
        const auto direct = apply_rotation(v, m + n, spec);
        for (int i = 0; i < d; ++i) {
            if (std::abs(composed[static_cast<std::size_t>(i)] -
                         direct[static_cast<std::size_t>(i)]) > 1e-9) {
                return fmt("composition gap at d=%d m=%lld n=%lld", d, static_cast<long long>(m),
                           static_cast<long long>(n));
            }
        }
    }
    return std::nullopt;
}

double relative_gap(std::span<const double> got, std::span<const double> want) {
    double diff = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        const double d = got[i] - want[i];
        diff += d * d;
    }
    return std::sqrt(diff) / std::max(1e-12, norm(want));
}

std::optional<std::string> check_rope_gradient(Rng& rng) {
    const double step = 1e-5;
    for (int it = 0; it < 100; ++it) {
        const int d = rand_head_dim(rng);
        const auto spec = make_spectrum(d);
        auto v = rand_vector(rng, d);
        const auto upstream = rand_vector(rng, d);
        const std::int64_t m = rand_int(rng, -100, 100);
        const auto analytic = rotation_gradient(upstream, m, spec);
        // Central differences of <upstream, apply_rotation(v, m)> w.r.t. v.
        std::vector<double> fd(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            const double saved = v[static_cast<std::size_t>(i)];
            v[static_cast<std::size_t>(i)] = saved + step;
            const double plus = dot(upstream, apply_rotation(v, m, spec));
            v[static_cast<std::size_t>(i)] = saved - step;
            const double minus = dot(upstream, apply_rotation(v, m, spec));
            v[static_cast<std::size_t>(i)] = saved;
            fd[static_cast<std::size_t>(i)] = (plus - minus) / (2 * step);
        }
        if (relative_gap(analytic, fd) > 1e-6) {
            return fmt("gradient gap %.3e at d=%d m=%lld", relative_gap(analytic, fd), d,
                       static_cast<long long>(m));
        }
    }
    return std::nullopt;
}

// --- mrope --------------------------------------------------------------

std::optional<std::string> check_mrope_text_reduction(Rng& rng) {
    for (int it = 0; it < 400; ++it) {
        const int d = rand_head_dim(rng);
        const auto spec = make_spectrum(d);
        const int axis_count = rand_int(rng, 0, 1) == 0 ? 2 : 3;
        const auto assign = assign_axes(d / 2, axis_count, rand_mode(rng));
        const auto v = rand_vector(rng, d);
        const std::int64_t m = rand_int(rng, -10000, 10000);
        const auto multi = apply_mrope(v, PositionId::uniform(axis_count, m), assign, spec);
        const auto plain = apply_rotation(v, m, spec);
        if (std::memcmp(multi.data(), plain.data(), multi.size() * sizeof(double)) != 0) {
            return fmt("bitwise mismatch at d=%d axes=%d m=%lld", d, axis_count,
                       static_cast<long long>(m));
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_mrope_interleaved_balance(Rng&) {
    for (int axis_count : {2, 3}) {
        for (int half = 2 * axis_count; half <= 128; ++half) {
            const auto assign = assign_axes(half, axis_count, AxisMode::kInterleaved);
            std::vector<int> counts(static_cast<std::size_t>(axis_count), 0);
            for (int a : assign.mapping) {
                ++counts[static_cast<std::size_t>(a)];
            }
            const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
            if (*hi - *lo > 1) {
                return fmt("count spread %d at half=%d axes=%d", *hi - *lo, half, axis_count);
            }
            for (int a = 0; a < axis_count; ++a) {
                bool low = false;
                bool high = false;
                for (int j = 0; j < axis_count; ++j) {
                    low |= assign.mapping[static_cast<std::size_t>(j)] == a;
                    high |= assign.mapping[static_cast<std::size_t>(half - 1 - j)] == a;
                }
                if (!low || !high) {
                    return fmt("axis %d misses a spectrum end at half=%d axes=%d", a, half,
                               axis_count);
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_mrope_sequential_imbalance(Rng&) {
    for (int axis_count : {2, 3}) {
        for (int half = 2 * axis_count; half <= 128; ++half) {
            const auto assign = assign_axes(half, axis_count, AxisMode::kSequential);
            const int quartile = std::max(1, half / 4);
            bool some_axis_misses_top = false;
            bool some_axis_misses_bottom = false;
            for (int a = 0; a < axis_count; ++a) {
                bool top = false;
                bool bottom = false;
                for (int j = 0; j < quartile; ++j) {
                    bottom |= assign.mapping[static_cast<std::size_t>(j)] == a;
                    top |= assign.mapping[static_cast<std::size_t>(half - 1 - j)] == a;
                }
                some_axis_misses_top |= !top;
                some_axis_misses_bottom |= !bottom;
            }
            if (!some_axis_misses_top || !some_axis_misses_bottom) {
                return fmt("sequential mode unexpectedly balanced at half=%d axes=%d", half,
                           axis_count);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_mrope_relative_position(Rng& rng) {
    for (int it = 0; it < 500; ++it) {
        const int d = rand_head_dim(rng);
        const auto spec = make_spectrum(d);
        const int axis_count = rand_int(rng, 0, 1) == 0 ? 2 : 3;
        const auto assign = assign_axes(d / 2, axis_count, rand_mode(rng));
        const auto q = rand_vector(rng, d);
        const auto k = rand_vector(rng, d);
        const auto p1 = rand_position(rng, axis_count, -100, 100);
        const auto p2 = rand_position(rng, axis_count, -100, 100);
        const double lhs =
            dot(apply_mrope(q, p1, assign, spec), apply_mrope(k, p2, assign, spec));
        const double rhs = dot(apply_mrope(q, p1.componentwise_sub(p2), assign, spec), k);
        if (std::abs(lhs - rhs) > 1e-9) {
            return fmt("per-axis identity gap %.3e", std::abs(lhs - rhs));
        }
    }
    return std::nullopt;
}

// --- ruler-seq ----------------------------------------------------------

std::optional<std::string> check_ruler_count_law(Rng& rng) {
    for (int it = 0; it < 300; ++it) {
        const int patch = static_cast<int>(rand_int(rng, 1, 48));
        const int width = static_cast<int>(rand_int(rng, 1, 4000));
        const int height = static_cast<int>(rand_int(rng, 1, 4000));
        const int s = static_cast<int>(rand_int(rng, 1, 20));
        const auto grid = build_grid(width, height, patch);
        const auto set = build_ruler_tokens(grid, s);
        const std::int64_t expect = grid.max_patches() / s + 1;
        if (static_cast<std::int64_t>(set.tokens.size()) != expect) {
            return fmt("count %zu != %lld", set.tokens.size(), static_cast<long long>(expect));
        }
        for (std::size_t n = 0; n < set.tokens.size(); ++n) {
            if (set.tokens[n].grid_index != static_cast<std::int64_t>(n) * s) {
                return fmt("index %zu holds %lld", n,
                           static_cast<long long>(set.tokens[n].grid_index));
            }
        }
        if (set.tokens.front().grid_index != 0 ||
            set.tokens.back().grid_index != (grid.max_patches() / s) * static_cast<std::int64_t>(s)) {
            return std::string("missing 0 or far-edge index");
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_ruler_position_sharing(Rng& rng) {
    for (int it = 0; it < 50; ++it) {
        const int patch = 28;
        const int axis_count = rand_int(rng, 0, 1) == 0 ? 2 : 3;
        const int s = static_cast<int>(rand_int(rng, 1, 8));
        std::vector<ImageInput> images;
        const int n_images = static_cast<int>(rand_int(rng, 1, 2));
        for (int i = 0; i < n_images; ++i) {
            const auto grid = build_grid(static_cast<int>(rand_int(rng, 1, 12)) * patch,
                                         static_cast<int>(rand_int(rng, 1, 12)) * patch, patch);
            images.push_back({grid, static_cast<std::int64_t>(grid.patch_rows) * grid.patch_cols});
        }
        const auto seq = assemble_sequence({"<sys>"}, images, {"<prompt>"}, s, axis_count);
        const int h_axis = axis_count == 3 ? 1 : 0;
        const int w_axis = axis_count == 3 ? 2 : 1;
        // Recover each image's t0 from its (0,0) patch, then demand that
        // every ruler index within both grid extents matches a vision row
        // and a vision column.
        for (std::size_t img_idx = 0; img_idx < images.size(); ++img_idx) {
            const std::string anchor = "<img" + std::to_string(img_idx) + ":0,0>";
            std::int64_t t0 = -1;
            for (const auto& token : seq.tokens) {
                if (token.payload == anchor) {
                    t0 = token.position[h_axis];
                    break;
                }
            }
            if (t0 < 0) {
                return fmt("image %zu has no (0,0) patch", img_idx);
            }
            const ImageGrid& grid = images[img_idx].grid;
            for (std::int64_t i = 0; i <= grid.min_patches() - 1; i += s) {
                bool row_shared = false;
                bool col_shared = false;
                for (const auto& other : seq.tokens) {
                    if (other.segment != Segment::kVision) {
                        continue;
                    }
                    row_shared |= other.position[h_axis] == t0 + i;
                    col_shared |= other.position[w_axis] == t0 + i;
                }
                if (!row_shared || !col_shared) {
                    return fmt("ruler index %lld of a %dx%d grid shares no position",
                               static_cast<long long>(i), grid.patch_rows, grid.patch_cols);
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_ruler_face_value_law(Rng& rng) {
    for (int it = 0; it < 200; ++it) {
        const int patch = static_cast<int>(rand_int(rng, 1, 64));
        const auto grid = build_grid(static_cast<int>(rand_int(rng, 1, 5000)),
                                     static_cast<int>(rand_int(rng, 1, 5000)), patch);
        const auto set = build_ruler_tokens(grid, static_cast<int>(rand_int(rng, 1, 16)));
        for (const auto& token : set.tokens) {
            if (std::stoll(token.face_value) != token.grid_index * patch) {
                return fmt("face '%s' != %lld", token.face_value.c_str(),
                           static_cast<long long>(token.grid_index * patch));
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_ruler_bound_law(Rng& rng) {
    for (int it = 0; it < 100; ++it) {
        const int patch = static_cast<int>(rand_int(rng, 1, 32));
        const int width = static_cast<int>(rand_int(rng, 1, 600));
        const int height = static_cast<int>(rand_int(rng, 1, 600));
        const int s = static_cast<int>(rand_int(rng, 1, 16));
        const auto grid = build_grid(width, height, patch);
        const auto set = build_ruler_tokens(grid, s);
        for (int x = 0; x < width; ++x) {
            std::int64_t nearest_below = -1;
            for (const auto& token : set.tokens) {
                const std::int64_t face = token.grid_index * patch;
                if (face <= x) {
                    nearest_below = std::max(nearest_below, face);
                }
            }
            if (nearest_below < 0 || x - nearest_below >= set.arithmetic_bound) {
                return fmt("pixel %d is %lld from the nearest face (bound %lld)", x,
                           static_cast<long long>(x - nearest_below),
                           static_cast<long long>(set.arithmetic_bound));
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_ruler_monotone_overhead(Rng& rng) {
    const std::vector<std::pair<int, int>> ladder_169 = {{1280, 720},  {1920, 1080}, {2560, 1440},
                                                         {3840, 2160}, {5120, 2880}, {7680, 4320}};
    const std::vector<std::pair<int, int>> ladder_square = {
        {256, 256}, {512, 512}, {1024, 1024}, {2048, 2048}, {4096, 4096}};
    for (const auto& ladder : {ladder_169, ladder_square}) {
        for (int patch : {14, 28}) {
            for (int s : {2, 4, 8, 16}) {
                double prev = 2.0;
                for (const auto& [w, h] : ladder) {
                    const double ratio = overhead(w, h, patch, s).ratio;
                    if (ratio > prev) {
                        return fmt("ratio rose to %.5f at %dx%d p=%d s=%d", ratio, w, h, patch, s);
                    }
                    prev = ratio;
                }
            }
        }
    }
    for (int it = 0; it < 100; ++it) {
        const int w = static_cast<int>(rand_int(rng, 1, 8000));
        const int h = static_cast<int>(rand_int(rng, 1, 8000));
        std::int64_t prev_count = std::numeric_limits<std::int64_t>::max();
        for (int s = 1; s <= 32; ++s) {
            const auto stats = overhead(w, h, 28, s);
            if (stats.ruler_count > prev_count) {
                return fmt("ruler count rose at %dx%d s=%d", w, h, s);
            }
            prev_count = stats.ruler_count;
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_ruler_assembly_determinism(Rng& rng) {
    for (int it = 0; it < 20; ++it) {
        const int axis_count = rand_int(rng, 0, 1) == 0 ? 2 : 3;
        const int s = static_cast<int>(rand_int(rng, 1, 8));
        std::vector<std::string> sys = {"<s0>", "<s1>"};
        std::vector<std::string> prompt = {"<p0>"};
        std::vector<ImageInput> images;
        for (int i = 0, n = static_cast<int>(rand_int(rng, 0, 2)); i < n; ++i) {
            const auto grid = build_grid(static_cast<int>(rand_int(rng, 1, 300)),
                                         static_cast<int>(rand_int(rng, 1, 300)), 28);
            images.push_back({grid, static_cast<std::int64_t>(grid.patch_rows) * grid.patch_cols});
        }
        const auto a = format_sequence(assemble_sequence(sys, images, prompt, s, axis_count));
        const auto b = format_sequence(assemble_sequence(sys, images, prompt, s, axis_count));
        if (a != b) {
            return std::string("repeated assembly differs");
        }
    }
    return std::nullopt;
}

// --- attention ----------------------------------------------------------

AttentionConfig demo_config(int head_dim, int axis_count, AxisMode mode) {
    return make_attention_config(make_spectrum(head_dim),
                                 assign_axes(head_dim / 2, axis_count, mode));
}

std::optional<std::string> check_attn_self_match_dominance(Rng& rng) {
    for (int it = 0; it < 40; ++it) {
        // Every axis must own at least one frequency, or offsets along an
        // unmapped axis cannot move the score off its maximum.
        const int axis_count = rand_int(rng, 0, 1) == 0 ? 2 : 3;
        int d = rand_head_dim(rng);
        while (d / 2 < axis_count) {
            d = rand_head_dim(rng);
        }
        const auto cfg = demo_config(d, axis_count, rand_mode(rng));
        auto q = rand_vector(rng, d);
        for (int j = 0; j < d / 2; ++j) {
            if (q[2 * j] == 0.0 && q[2 * j + 1] == 0.0) {
                q[2 * j] = 0.5;
            }
        }
        const auto base = rand_position(rng, axis_count, -20, 20);
        const double self = score(q, q, base, base, cfg);
        // Offsets bounded by |delta * theta_0| < pi, theta_0 = 1.
        std::vector<PositionId> offsets;
        for (int dt = -3; dt <= 3; ++dt) {
            for (int dh = -3; dh <= 3; ++dh) {
                if (axis_count == 2) {
                    offsets.push_back(PositionId::hw(dt, dh));
                } else {
                    for (int dw = -3; dw <= 3; ++dw) {
                        offsets.push_back(PositionId::thw(dt, dh, dw));
                    }
                }
            }
        }
        for (const auto& delta : offsets) {
            bool zero = true;
            for (int a = 0; a < axis_count; ++a) {
                zero &= delta[a] == 0;
            }
            if (zero) {
                continue;
            }
            PositionId other = base;
            for (int a = 0; a < axis_count; ++a) {
                other[a] += delta[a];
            }
            if (score(q, q, base, other, cfg) >= self) {
                return fmt("offset %s matches self score at d=%d", delta.to_string().c_str(), d);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_attn_diagonal_retrieval(Rng&) {
    const auto cfg = demo_config(32, 2, AxisMode::kInterleaved);
    const std::vector<double> probe(32, 1.0);
    for (int n = 1; n <= 64; ++n) {
        const auto grid = build_grid(n * 28, n * 28, 28, 5);
        for (int s : {2, 4, 8, 16}) {
            const auto rulers = build_ruler_tokens(grid, s, 2);
            for (int r = 0; r < n; ++r) {
                const auto peak = ruler_peak(grid, rulers, r, r, cfg, probe);
                std::int64_t best_dist = std::numeric_limits<std::int64_t>::max();
                for (const auto& token : rulers.tokens) {
                    best_dist = std::min(best_dist, std::abs(token.grid_index - r));
                }
                if (std::abs(peak.grid_index - r) != best_dist) {
                    return fmt("probe %d in %dx%d s=%d retrieved %lld", r, n, n, s,
                               static_cast<long long>(peak.grid_index));
                }
                int nearest = 0;
                for (const auto& token : rulers.tokens) {
                    nearest += std::abs(token.grid_index - r) == best_dist ? 1 : 0;
                }
                if ((nearest > 1) != peak.tie) {
                    return fmt("tie flag %d with %d nearest at r=%d s=%d n=%d", peak.tie, nearest,
                               r, s, n);
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_attn_shift_invariance(Rng& rng) {
    for (int it = 0; it < 500; ++it) {
        const int d = rand_head_dim(rng);
        const int axis_count = rand_int(rng, 0, 1) == 0 ? 2 : 3;
        const auto cfg = demo_config(d, axis_count, rand_mode(rng));
        const auto q = rand_vector(rng, d);
        const auto k = rand_vector(rng, d);
        const auto p1 = rand_position(rng, axis_count, -50, 50);
        const auto p2 = rand_position(rng, axis_count, -50, 50);
        const std::int64_t shift = rand_int(rng, -50, 50);
        PositionId p1s = p1;
        PositionId p2s = p2;
        for (int a = 0; a < axis_count; ++a) {
            p1s[a] += shift;
            p2s[a] += shift;
        }
        const double before = score(q, k, p1, p2, cfg);
        const double after = score(q, k, p1s, p2s, cfg);
        if (std::abs(before - after) > 1e-9) {
            return fmt("score moved by %.3e under shift %lld", std::abs(before - after),
                       static_cast<long long>(shift));
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_attn_score_gradient(Rng& rng) {
    const double step = 1e-5;
    for (int it = 0; it < 100; ++it) {
        const int d = rand_head_dim(rng);
        const int axis_count = rand_int(rng, 0, 1) == 0 ? 2 : 3;
        const auto cfg = demo_config(d, axis_count, rand_mode(rng));
        auto q = rand_vector(rng, d);
        const auto k = rand_vector(rng, d);
        const auto pq = rand_position(rng, axis_count, -50, 50);
        const auto pk = rand_position(rng, axis_count, -50, 50);
        const auto analytic = score_gradient_q(k, pq, pk, cfg);
        std::vector<double> fd(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            const double saved = q[static_cast<std::size_t>(i)];
            q[static_cast<std::size_t>(i)] = saved + step;
            const double plus = score(q, k, pq, pk, cfg);
            q[static_cast<std::size_t>(i)] = saved - step;
            const double minus = score(q, k, pq, pk, cfg);
            q[static_cast<std::size_t>(i)] = saved;
            fd[static_cast<std::size_t>(i)] = (plus - minus) / (2 * step);
        }
        if (relative_gap(analytic, fd) > 1e-6) {
            return fmt("score gradient gap %.3e", relative_gap(analytic, fd));
        }
    }
    return std::nullopt;
}

// --- grounding-eval -----------------------------------------------------

struct RandomDataset {
    std::vector<GroundingSample> samples;
    std::vector<Prediction> preds;
};

RandomDataset make_random_dataset(Rng& rng, int max_samples) {
    static const char* const kPlatforms[] = {"mobile", "desktop", "web"};
    RandomDataset data;
    const int n = static_cast<int>(rand_int(rng, 0, max_samples));
    for (int i = 0; i < n; ++i) {
        GroundingSample sample;
        sample.id = "s" + std::to_string(i);
        sample.image_width_px = static_cast<int>(rand_int(rng, 100, 4000));
        sample.image_height_px = static_cast<int>(rand_int(rng, 100, 4000));
        sample.platform = kPlatforms[rand_int(rng, 0, 2)];
        const double x0 = rand_real(rng, 0, sample.image_width_px - 60.0);
        const double y0 = rand_real(rng, 0, sample.image_height_px - 60.0);
        sample.target = {x0, y0, x0 + rand_real(rng, 1, 50), y0 + rand_real(rng, 1, 50)};
        data.samples.push_back(std::move(sample));
        if (rand_int(rng, 0, 9) == 0) {
            continue; // missing prediction
        }
        Prediction pred;
        pred.id = "s" + std::to_string(i);
        pred.x = rand_real(rng, 0, data.samples.back().image_width_px);
        pred.y = rand_real(rng, 0, data.samples.back().image_height_px);
        if (rand_int(rng, 0, 1) == 0) { // force a hit half the time
            const BBox& b = data.samples.back().target;
            pred.x = (b.x_min + b.x_max) / 2;
            pred.y = (b.y_min + b.y_max) / 2;
        }
        data.preds.push_back(std::move(pred));
    }
    return data;
}

std::optional<std::string> check_eval_accuracy_range(Rng& rng) {
    for (int it = 0; it < 50; ++it) {
        const auto data = make_random_dataset(rng, 100);
        const auto report = element_accuracy(data.samples, data.preds);
        if (report.overall < 0.0 || report.overall > 1.0) {
            return fmt("accuracy %.4f out of range", report.overall);
        }
        if (report.total > 0 &&
            std::abs(report.overall * static_cast<double>(report.total) -
                     static_cast<double>(report.hits)) > 1e-9) {
            return std::string("accuracy * total is not the hit count");
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_eval_platform_average(Rng& rng) {
    for (int it = 0; it < 50; ++it) {
        const auto data = make_random_dataset(rng, 150);
        const auto report = element_accuracy(data.samples, data.preds);
        std::int64_t hits = 0;
        std::int64_t total = 0;
        for (const auto& [platform, stats] : report.per_platform) {
            hits += stats.hits;
            total += stats.total;
        }
        if (hits != report.hits || total != report.total) {
            return std::string("platform counts do not fold to the overall report");
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_eval_parse_roundtrip(Rng& rng) {
    for (int it = 0; it < 300; ++it) {
        // Dyadic rationals have exact finite decimal expansions.
        const double x = static_cast<double>(rand_int(rng, -2560000, 2560000)) / 256.0;
        const double y = static_cast<double>(rand_int(rng, -2560000, 2560000)) / 256.0;
        const std::string text = fmt("x=%.8f, y=%.8f", x, y);
        const ParsedPoint point = parse_point(text);
        if (point.x != x || point.y != y) {
            return fmt("round trip of '%s' returned (%.10f, %.10f)", text.c_str(), point.x,
                       point.y);
        }
        if (point.multiple_matches) {
            return fmt("single pair '%s' flagged as multiple", text.c_str());
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_eval_denormalize(Rng& rng) {
    for (int it = 0; it < 200; ++it) {
        const int w = static_cast<int>(rand_int(rng, 1, 8000));
        const int h = static_cast<int>(rand_int(rng, 1, 8000));
        const double u1 = rand_real(rng, 0, 1);
        const double u2 = rand_real(rng, 0, 1);
        const double v = rand_real(rng, 0, 1);
        const auto [x1, y1] = denormalize(std::min(u1, u2), v, w, h);
        const auto [x2, y2] = denormalize(std::max(u1, u2), v, w, h);
        if (x1 > x2 || y1 != y2) {
            return std::string("denormalize is not monotone in u");
        }
        if (denormalize(0, 0, w, h) != std::pair<double, double>(0.0, 0.0)) {
            return std::string("denormalize not exact at 0");
        }
        if (denormalize(1, 1, w, h) !=
            std::pair<double, double>(static_cast<double>(w), static_cast<double>(h))) {
            return std::string("denormalize not exact at 1");
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_eval_oracle_equivalence(Rng& rng) {
    for (int it = 0; it < 20; ++it) {
        const auto data = make_random_dataset(rng, 200);
        const auto report = element_accuracy(data.samples, data.preds);
        // Naive per-sample loop.
        std::int64_t hits = 0;
        std::map<std::string, std::pair<std::int64_t, std::int64_t>> per_platform;
        std::vector<std::string> unmatched;
        for (const auto& sample : data.samples) {
            const Prediction* found = nullptr;
            for (const auto& pred : data.preds) {
                if (pred.id == sample.id) {
                    found = &pred;
                    break;
                }
            }
            bool hit = false;
            if (found == nullptr) {
                unmatched.push_back(sample.id);
            } else {
                hit = sample.target.x_min <= found->x && found->x <= sample.target.x_max &&
                      sample.target.y_min <= found->y && found->y <= sample.target.y_max;
            }
            hits += hit ? 1 : 0;
            auto& p = per_platform[sample.platform];
            ++p.second;
            p.first += hit ? 1 : 0;
        }
        if (hits != report.hits || unmatched != report.unmatched_ids ||
            per_platform.size() != report.per_platform.size()) {
            return std::string("naive oracle disagrees with element_accuracy");
        }
        for (const auto& [platform, counts] : per_platform) {
            const auto it2 = report.per_platform.find(platform);
            if (it2 == report.per_platform.end() || it2->second.hits != counts.first ||
                it2->second.total != counts.second) {
                return fmt("platform '%s' differs from the oracle", platform.c_str());
            }
        }
    }
    return std::nullopt;
}

// --- cli ----------------------------------------------------------------

std::optional<std::string> check_cli_deterministic_output(Rng&) {
    const std::vector<std::vector<std::string>> invocations = {
        {"spectrum", "--dim", "64", "--json"},
        {"spectrum", "--dim", "32", "--csv"},
        {"assign", "--half-dim", "16", "--axes", "3", "--mode", "inter", "--json"},
        {"ruler", "--width", "1920", "--height", "1080", "--patch", "28", "--interval", "8",
         "--json"},
    };
    for (const auto& args : invocations) {
        std::ostringstream out1;
        std::ostringstream out2;
        std::ostringstream err;
        if (cli::run(args, out1, err) != 0 || cli::run(args, out2, err) != 0) {
            return std::string("subcommand failed: ") + args[0];
        }
        if (out1.str() != out2.str() || out1.str().empty()) {
            return std::string("output differs across runs for: ") + args[0];
        }
    }
    return std::nullopt;
}

struct NamedCheck {
    const char* name;
    CheckFn fn;
};

const NamedCheck kChecks[] = {
    {"rope.norm_preservation", check_rope_norm_preservation},
    {"rope.relative_position_identity", check_rope_relative_position},
    {"rope.composition", check_rope_composition},
    {"rope.gradient_finite_difference", check_rope_gradient},
    {"mrope.text_token_reduction", check_mrope_text_reduction},
    {"mrope.interleaved_balance", check_mrope_interleaved_balance},
    {"mrope.sequential_imbalance", check_mrope_sequential_imbalance},
    {"mrope.relative_position_identity", check_mrope_relative_position},
    {"ruler.count_law", check_ruler_count_law},
    {"ruler.position_sharing", check_ruler_position_sharing},
    {"ruler.face_value_law", check_ruler_face_value_law},
    {"ruler.bound_law", check_ruler_bound_law},
    {"ruler.monotone_overhead", check_ruler_monotone_overhead},
    {"ruler.assembly_determinism", check_ruler_assembly_determinism},
    {"attn.self_match_dominance", check_attn_self_match_dominance},
    {"attn.diagonal_retrieval", check_attn_diagonal_retrieval},
    {"attn.shift_invariance", check_attn_shift_invariance},
    {"attn.score_gradient", check_attn_score_gradient},
    {"eval.accuracy_range", check_eval_accuracy_range},
    {"eval.platform_weighted_average", check_eval_platform_average},
    {"eval.parse_format_roundtrip", check_eval_parse_roundtrip},
    {"eval.denormalize_monotone_exact", check_eval_denormalize},
    {"eval.oracle_equivalence", check_eval_oracle_equivalence},
    {"cli.deterministic_output", check_cli_deterministic_output},
};

} // namespace

std::vector<CheckResult> run_checks(std::uint64_t seed) {
    std::vector<CheckResult> results;
    std::uint64_t index = 0;
    for (const NamedCheck& check : kChecks) {
        Rng rng(seed + 0x9e3779b97f4a7c15ULL * ++index);
        CheckResult result;
        result.name = check.name;
        try {
            const auto failure = check.fn(rng);
            result.passed = !failure.has_value();
            result.detail = failure.value_or("");
        } catch (const std::exception& e) {
            result.passed = false;
            result.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(result));
    }
    return results;
}

bool run_checks(std::uint64_t seed, std::ostream& out) {
    const auto results = run_checks(seed);
    bool all = true;
    for (const CheckResult& result : results) {
        if (result.passed) {
            out << "PASS " << result.name << "\n";
        } else {
            out << "FAIL " << result.name << ": " << result.detail << "\n";
            all = false;
        }
    }
    out << (all ? "all checks passed" : "some checks FAILED") << " (" << results.size()
        << " checks, seed " << seed << ")\n";
    return all;
}

} // namespace rulerkit
