// Acceptance suite: one line per criterion, non-zero exit if any fails.
// Criteria marked with a runtime budget fail when they exceed it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rulerkit/attention.hpp"
#include "rulerkit/eval.hpp"
#include "rulerkit/mrope.hpp"
#include "rulerkit/rope.hpp"
#include "rulerkit/sequence.hpp"

using namespace rulerkit;

namespace {

using Clock = std::chrono::steady_clock;
using Rng = std::mt19937_64;

constexpr std::uint64_t kSeed = 0x5eed2026;

std::vector<double> random_vector(Rng& rng, int dim) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) {
        x = dist(rng);
    }
    return v;
}

double norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return std::sqrt(acc);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

int random_dim(Rng& rng) {
    static const int kDims[] = {4, 8, 16, 32, 64};
    return kDims[std::uniform_int_distribution<int>(0, 4)(rng)];
}

std::int64_t random_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// 1. apply_mrope with all-equal axes equals apply_rotation bit for bit.
std::optional<std::string> criterion_text_reduction(Rng& rng) {
    for (int it = 0; it < 1000; ++it) {
        const int d = random_dim(rng);
        const auto spec = make_spectrum(d);
        const int axes = random_int(rng, 0, 1) == 0 ? 2 : 3;
        const AxisMode mode =
            random_int(rng, 0, 1) == 0 ? AxisMode::kSequential : AxisMode::kInterleaved;
        const auto assign = assign_axes(d / 2, axes, mode);
        const auto v = random_vector(rng, d);
        const std::int64_t m = random_int(rng, -100000, 100000);
        const auto multi = apply_mrope(v, PositionId::uniform(axes, m), assign, spec);
        const auto plain = apply_rotation(v, m, spec);
        if (std::memcmp(multi.data(), plain.data(), multi.size() * sizeof(double)) != 0) {
            return "bitwise mismatch at case " + std::to_string(it);
        }
    }
    return std::nullopt;
}

// 2. Norm preservation, relative-position identity, composition.
std::optional<std::string> criterion_rotation_algebra(Rng& rng) {
    for (int it = 0; it < 1000; ++it) {
        const int d = random_dim(rng);
        const auto spec = make_spectrum(d);
        const auto v = random_vector(rng, d);
        const std::int64_t m = random_int(rng, -10000, 10000);
        if (std::abs(norm(apply_rotation(v, m, spec)) - norm(v)) > 1e-12) {
            return "norm drifted beyond 1e-12";
        }
    }
    for (int it = 0; it < 1000; ++it) {
        const int d = random_dim(rng);
        const auto spec = make_spectrum(d);
        const auto q = random_vector(rng, d);
        const auto k = random_vector(rng, d);
        const std::int64_t m = random_int(rng, -10000, 10000);
        const std::int64_t n = random_int(rng, -10000, 10000);
        const double lhs = dot(apply_rotation(q, m, spec), apply_rotation(k, n, spec));
        const double rhs = dot(apply_rotation(q, m - n, spec), k);
        if (std::abs(lhs - rhs) > 1e-9) {
            return "relative-position identity broke 1e-9";
        }
    }
    for (int it = 0; it < 1000; ++it) {
        const int d = random_dim(rng);
        const auto spec = make_spectrum(d);
        const auto v = random_vector(rng, d);
        const std::int64_t m = random_int(rng, -5000, 5000);
        const std::int64_t n = random_int(rng, -5000, 5000);
        const auto composed = apply_rotation(apply_rotation(v, m, spec), n, spec);
        const auto direct = apply_rotation(v, m + n, spec);
        for (std::size_t i = 0; i < composed.size(); ++i) {
            if (std::abs(composed[i] - direct[i]) > 1e-9) {
                return "composition broke 1e-9";
            }
        }
    }
    return std::nullopt;
}

double relative_gap(const std::vector<double>& got, const std::vector<double>& want) {
    double diff = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        diff += (got[i] - want[i]) * (got[i] - want[i]);
    }
    return std::sqrt(diff) / std::max(1e-12, norm(want));
}

// 3. Analytic backward of apply_rotation and of score vs central differences.
std::optional<std::string> criterion_gradients(Rng& rng) {
    const double step = 1e-5;
    for (int it = 0; it < 100; ++it) {
        const int d = random_dim(rng);
        const auto spec = make_spectrum(d);
        auto v = random_vector(rng, d);
        const auto upstream = random_vector(rng, d);
        const std::int64_t m = random_int(rng, -100, 100);
        const auto analytic = rotation_gradient(upstream, m, spec);
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
            return "rotation gradient exceeded 1e-6 relative error";
        }
    }
    for (int it = 0; it < 100; ++it) {
        const int d = random_dim(rng);
        const int axes = random_int(rng, 0, 1) == 0 ? 2 : 3;
        const AxisMode mode =
            random_int(rng, 0, 1) == 0 ? AxisMode::kSequential : AxisMode::kInterleaved;
        const auto cfg = make_attention_config(make_spectrum(d), assign_axes(d / 2, axes, mode));
        auto q = random_vector(rng, d);
        const auto k = random_vector(rng, d);
        PositionId pq = PositionId::uniform(axes, 0);
        PositionId pk = PositionId::uniform(axes, 0);
        for (int a = 0; a < axes; ++a) {
            pq[a] = random_int(rng, -50, 50);
            pk[a] = random_int(rng, -50, 50);
        }
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
            return "score gradient exceeded 1e-6 relative error";
        }
    }
    return std::nullopt;
}

// 4. Interleaved balance and full-spectrum coverage; sequential negative control.
std::optional<std::string> criterion_frequency_balance(Rng&) {
    for (int axes : {2, 3}) {
        for (int half = 4; half <= 128; ++half) {
            const auto inter = assign_axes(half, axes, AxisMode::kInterleaved);
            std::vector<int> counts(static_cast<std::size_t>(axes), 0);
            for (int a : inter.mapping) {
                ++counts[static_cast<std::size_t>(a)];
            }
            int lo = counts[0];
            int hi = counts[0];
            for (int c : counts) {
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
            if (hi - lo > 1) {
                return "interleaved counts spread at half_dim " + std::to_string(half);
            }
            for (int a = 0; a < axes; ++a) {
                bool low = false;
                bool high = false;
                for (int j = 0; j < axes && j < half; ++j) {
                    low |= inter.mapping[static_cast<std::size_t>(j)] == a;
                    high |= inter.mapping[static_cast<std::size_t>(half - 1 - j)] == a;
                }
                if (!low || !high) {
                    return "interleaved axis misses a spectrum end at half_dim " +
                           std::to_string(half);
                }
            }
            const auto seq = assign_axes(half, axes, AxisMode::kSequential);
            bool some_axis_fails = false;
            for (int a = 0; a < axes; ++a) {
                bool low = false;
                bool high = false;
                for (int j = 0; j < axes && j < half; ++j) {
                    low |= seq.mapping[static_cast<std::size_t>(j)] == a;
                    high |= seq.mapping[static_cast<std::size_t>(half - 1 - j)] == a;
                }
                some_axis_fails |= !(low && high);
            }
            if (!some_axis_fails) {
                return "sequential mode passed the full-range check at half_dim " +
                       std::to_string(half);
            }
        }
    }
    return std::nullopt;
}

// 5. Ruler construction law, exhaustive to max(H,W) = 256.
std::optional<std::string> criterion_ruler_law(Rng&) {
    for (int patch : {14, 28}) {
        for (int extent = 1; extent <= 256; ++extent) {
            struct Dims {
                int w;
                int h;
            };
            const Dims variants[] = {
                {extent * patch, patch},
                {patch, extent * patch},
                {extent * patch, extent * patch},
                {extent * patch - (patch > 5 ? 5 : 0), patch}, // ragged right edge
            };
            for (const Dims& dims : variants) {
                const auto grid = build_grid(dims.w, dims.h, patch);
                if (grid.max_patches() != extent) {
                    return "grid extent mismatch";
                }
                for (int s : {1, 2, 4, 8, 16}) {
                    const auto set = build_ruler_tokens(grid, s);
                    if (set.arithmetic_bound != static_cast<std::int64_t>(s) * patch) {
                        return "bound != s * p";
                    }
                    const std::int64_t expect_count = extent / s + 1;
                    if (static_cast<std::int64_t>(set.tokens.size()) != expect_count) {
                        return "count != floor(max/s)+1 at extent " + std::to_string(extent);
                    }
                    for (std::size_t n = 0; n < set.tokens.size(); ++n) {
                        const auto& token = set.tokens[n];
                        if (token.grid_index != static_cast<std::int64_t>(n) * s) {
                            return "indices are not the multiples of s";
                        }
                        if (std::stoll(token.face_value) != token.grid_index * patch) {
                            return "face value != i * p";
                        }
                    }
                }
            }
        }
    }
    return std::nullopt;
}

// 6. Diagonal retrieval returns a nearest multiple of s, brute-force verified.
std::optional<std::string> criterion_diagonal_retrieval(Rng&) {
    const auto cfg = make_attention_config(make_spectrum(32),
                                           assign_axes(16, 2, AxisMode::kInterleaved));
    const std::vector<double> probe(32, 1.0);
    // Closed-form reference for an all-ones probe: each pair contributes
    // 2 cos(delta * theta).
    const auto reference = [&](std::int64_t delta) {
        double acc = 0.0;
        for (double theta : cfg.spec.thetas) {
            acc += 2.0 * std::cos(static_cast<double>(delta) * theta);
        }
        return cfg.scale * acc;
    };
    for (int n = 1; n <= 64; ++n) {
        const auto grid = build_grid(n * 28, n * 28, 28, 7);
        for (int s : {2, 4, 8, 16}) {
            const auto rulers = build_ruler_tokens(grid, s, 2);
            for (int r = 0; r < n; ++r) {
                const auto peak = ruler_peak(grid, rulers, r, r, cfg, probe);
                std::int64_t brute_best = -1;
                double brute_score = -1e300;
                std::int64_t nearest_dist = 1 << 30;
                int nearest_count = 0;
                for (const auto& token : rulers.tokens) {
                    const double sc = reference(r - token.grid_index);
                    if (sc > brute_score) {
                        brute_score = sc;
                        brute_best = token.grid_index;
                    }
                    const std::int64_t dist = std::abs(token.grid_index - r);
                    if (dist < nearest_dist) {
                        nearest_dist = dist;
                        nearest_count = 1;
                    } else if (dist == nearest_dist) {
                        ++nearest_count;
                    }
                }
                if (std::abs(peak.grid_index - r) != nearest_dist) {
                    return "probe " + std::to_string(r) + " of grid " + std::to_string(n) +
                           " s=" + std::to_string(s) + " did not retrieve a nearest multiple";
                }
                if (!peak.tie && peak.grid_index != brute_best) {
                    return "peak disagrees with the brute-force argmax";
                }
                if (peak.tie != (nearest_count > 1)) {
                    return "tie flag disagrees with equidistance";
                }
            }
        }
    }
    return std::nullopt;
}

// 7. Overhead below 1% at patch 28, s=8 for every bundled resolution with
// min dimension >= 720, including 8K at 35/42625.
std::optional<std::string> criterion_overhead(Rng&) {
    std::ifstream in(std::string(RULERKIT_DATA_DIR) + "/resolutions.csv");
    if (!in) {
        return "bundled resolution list not found";
    }
    bool saw_8k = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string name;
        std::string w;
        std::string h;
        std::getline(fields, name, ',');
        std::getline(fields, w, ',');
        std::getline(fields, h);
        const int width = std::stoi(w);
        const int height = std::stoi(h);
        const auto stats = overhead(width, height, 28, 8);
        if (std::min(width, height) >= 720 && stats.ratio >= 0.01) {
            return name + " ratio " + std::to_string(stats.ratio) + " is not below 1%";
        }
        if (width == 7680 && height == 4320) {
            saw_8k = true;
            if (stats.vision_count != 42625 || stats.ruler_count != 35) {
                return "8K counts differ from 35/42625";
            }
            if (std::abs(stats.ratio - 35.0 / 42625.0) > 1e-15) {
                return "8K ratio differs from 35/42625";
            }
        }
    }
    if (!saw_8k) {
        return "resolution list does not include 7680x4320";
    }
    return std::nullopt;
}

// 8. element_accuracy equals a naive per-sample loop; the bundled fixture
// scores exactly 0.7.
std::optional<std::string> criterion_eval_oracle(Rng& rng) {
    static const char* const kPlatforms[] = {"mobile", "desktop", "web"};
    for (int dataset = 0; dataset < 50; ++dataset) {
        std::vector<GroundingSample> samples;
        std::vector<Prediction> preds;
        const int n = static_cast<int>(random_int(rng, 0, 200));
        for (int i = 0; i < n; ++i) {
            GroundingSample sample;
            sample.id = "g" + std::to_string(i);
            sample.image_width_px = static_cast<int>(random_int(rng, 200, 4000));
            sample.image_height_px = static_cast<int>(random_int(rng, 200, 4000));
            sample.platform = kPlatforms[random_int(rng, 0, 2)];
            std::uniform_real_distribution<double> ux(0.0, sample.image_width_px - 80.0);
            std::uniform_real_distribution<double> uy(0.0, sample.image_height_px - 80.0);
            const double x0 = ux(rng);
            const double y0 = uy(rng);
            sample.target = {x0, y0, x0 + 60.0, y0 + 60.0};
            samples.push_back(sample);
            if (random_int(rng, 0, 9) == 0) {
                continue;
            }
            Prediction pred;
            pred.id = sample.id;
            if (random_int(rng, 0, 1) == 0) {
                pred.x = (sample.target.x_min + sample.target.x_max) / 2;
                pred.y = (sample.target.y_min + sample.target.y_max) / 2;
            } else {
                pred.x = static_cast<double>(random_int(rng, 0, sample.image_width_px));
                pred.y = static_cast<double>(random_int(rng, 0, sample.image_height_px));
            }
            preds.push_back(pred);
        }
        const auto report = element_accuracy(samples, preds);
        std::int64_t hits = 0;
        std::map<std::string, std::pair<std::int64_t, std::int64_t>> platforms;
        for (const auto& sample : samples) {
            const Prediction* found = nullptr;
            for (const auto& pred : preds) {
                if (pred.id == sample.id) {
                    found = &pred;
                    break;
                }
            }
            const bool hit = found != nullptr && sample.target.x_min <= found->x &&
                             found->x <= sample.target.x_max && sample.target.y_min <= found->y &&
                             found->y <= sample.target.y_max;
            hits += hit ? 1 : 0;
            auto& p = platforms[sample.platform];
            ++p.second;
            p.first += hit ? 1 : 0;
        }
        if (hits != report.hits || static_cast<std::size_t>(report.total) != samples.size()) {
            return "naive loop disagrees on dataset " + std::to_string(dataset);
        }
        for (const auto& [platform, counts] : platforms) {
            const auto it = report.per_platform.find(platform);
            if (it == report.per_platform.end() || it->second.hits != counts.first ||
                it->second.total != counts.second) {
                return "per-platform counts disagree on dataset " + std::to_string(dataset);
            }
        }
    }
    std::ifstream samples_in(std::string(RULERKIT_DATA_DIR) + "/grounding_samples.jsonl");
    std::ifstream preds_in(std::string(RULERKIT_DATA_DIR) + "/grounding_preds.jsonl");
    if (!samples_in || !preds_in) {
        return "bundled fixture not found";
    }
    const auto samples = load_grounding_samples(samples_in);
    const auto load = load_predictions(preds_in);
    const auto report = element_accuracy(samples, load.preds);
    if (report.total != 10 || report.hits != 7 || report.overall != 0.7) {
        return "bundled fixture does not score 0.7";
    }
    return std::nullopt;
}

std::string run_command(const std::string& command, int* exit_code) {
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        *exit_code = -1;
        return output;
    }
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) {
        output.append(buf, got);
    }
    const int status = pclose(pipe);
    *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return output;
}

// 9. `check` passes and repeated CLI invocations are byte-identical.
std::optional<std::string> criterion_determinism(Rng&) {
    const std::string cli = RULERKIT_CLI_PATH;
    const std::string data = RULERKIT_DATA_DIR;
    int code = 0;
    run_command(cli + " check", &code);
    if (code != 0) {
        return "`check` exited with " + std::to_string(code);
    }
    const std::string invocations[] = {
        cli + " spectrum --dim 64 --json",
        cli + " spectrum --dim 64 --csv",
        cli + " overhead --resolutions " + data + "/resolutions.csv --patch 28 --intervals" +
            " 2,4,8,16 --csv",
        cli + " eval --dataset " + data + "/grounding_samples.jsonl --preds " + data +
            "/grounding_preds.jsonl --json 2>/dev/null",
    };
    for (const std::string& invocation : invocations) {
        int code1 = 0;
        int code2 = 0;
        const std::string first = run_command(invocation, &code1);
        const std::string second = run_command(invocation, &code2);
        if (code1 != 0 || code2 != 0) {
            return "invocation failed: " + invocation;
        }
        if (first.empty() || first != second) {
            return "output differs across runs: " + invocation;
        }
    }
    return std::nullopt;
}

struct Criterion {
    int number;
    const char* label;
    double budget_seconds;
    std::optional<std::string> (*fn)(Rng&);
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {1, "text-reduction equivalence (1000 cases, bitwise)", 1.0, criterion_text_reduction},
        {2, "rotation algebra (norm/relative/composition, 1000 cases each)", 1.0,
         criterion_rotation_algebra},
        {3, "gradient checks vs central finite differences (100+100 cases)", 5.0,
         criterion_gradients},
        {4, "frequency balance, half_dim 4..128, axes 2 and 3", 1.0,
         criterion_frequency_balance},
        {5, "ruler construction law, exhaustive to max(H,W)=256", 5.0, criterion_ruler_law},
        {6, "diagonal ruler-peak retrieval, grids to 64x64, s in {2,4,8,16}", 30.0,
         criterion_diagonal_retrieval},
        {7, "overhead below 1% at patch 28, s=8 (bundled resolutions)", 1.0, criterion_overhead},
        {8, "evaluation oracle (50 random datasets + bundled fixture = 0.7)", 1.0,
         criterion_eval_oracle},
        {9, "end-to-end determinism (`check` + byte-identical json/csv)", 0.0,
         criterion_determinism},
    };
    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Rng rng(kSeed + static_cast<std::uint64_t>(criterion.number));
        const auto start = Clock::now();
        std::optional<std::string> failure;
        try {
            failure = criterion.fn(rng);
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (!failure && criterion.budget_seconds > 0.0 && elapsed > criterion.budget_seconds) {
            failure = "runtime " + std::to_string(elapsed) + "s over budget " +
                      std::to_string(criterion.budget_seconds) + "s";
        }
        if (failure) {
            ++failures;
            std::printf("FAIL %d %s: %s (%.3fs)\n", criterion.number, criterion.label,
                        failure->c_str(), elapsed);
        } else {
            std::printf("PASS %d %s (%.3fs)\n", criterion.number, criterion.label, elapsed);
        }
    }
    if (failures > 0) {
        std::printf("%d criteria FAILED\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
