#include "rulerkit/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "rulerkit/attention.hpp"
#include "rulerkit/checks.hpp"
#include "rulerkit/eval.hpp"
#include "rulerkit/mrope.hpp"
#include "rulerkit/rope.hpp"
#include "rulerkit/sequence.hpp"

namespace rulerkit::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

enum class Format { kHuman, kJson, kCsv };

// Shortest round-trip decimal, hex-free and locale-independent.
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec <= 16; ++prec) {
            char probe[32];
            std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
            std::sscanf(probe, "%lf", &back);
            if (back == v) {
                return probe;
            }
        }
    }
    return buf;
}

struct ResolutionEntry {
    std::string name;
    int width = 0;
    int height = 0;
};

// Lines of "name,width,height"; blank lines and #-comments are skipped.
std::vector<ResolutionEntry> load_resolutions(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open resolutions file: " + path);
    }
    std::vector<ResolutionEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        ResolutionEntry entry;
        std::istringstream fields(line);
        std::string width;
        std::string height;
        if (!std::getline(fields, entry.name, ',') || !std::getline(fields, width, ',') ||
            !std::getline(fields, height)) {
            throw ParseError("resolutions line " + std::to_string(line_no) +
                             ": expected name,width,height");
        }
        try {
            entry.width = std::stoi(width);
            entry.height = std::stoi(height);
        } catch (const std::exception&) {
            throw ParseError("resolutions line " + std::to_string(line_no) +
                             ": bad width/height");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

AxisMode parse_mode(const std::string& mode) {
    if (mode == "seq" || mode == "sequential") {
        return AxisMode::kSequential;
    }
    if (mode == "inter" || mode == "interleaved") {
        return AxisMode::kInterleaved;
    }
    throw CLI::ValidationError("--mode", "must be seq or inter");
}

std::string mode_name(AxisMode mode) {
    return mode == AxisMode::kSequential ? "sequential" : "interleaved";
}

Format pick_format(bool json, bool csv) {
    if (json) {
        return Format::kJson;
    }
    return csv ? Format::kCsv : Format::kHuman;
}

void emit_json(std::ostream& out, const ordered_json& doc) {
    out << doc.dump(2) << "\n";
}

// --- spectrum -------------------------------------------------------------

int cmd_spectrum(int dim, double base, Format format, std::ostream& out) {
    const auto spec = make_spectrum(dim, base);
    if (format == Format::kJson) {
        ordered_json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["head_dim"] = spec.head_dim;
        doc["base"] = spec.base;
        doc["thetas"] = spec.thetas;
        emit_json(out, doc);
    } else if (format == Format::kCsv) {
        out << "# schema_version=" << kSchemaVersion << "\n";
        out << "j,theta\n";
        for (std::size_t j = 0; j < spec.thetas.size(); ++j) {
            out << j << "," << num(spec.thetas[j]) << "\n";
        }
    } else {
        char base_text[32];
        std::snprintf(base_text, sizeof(base_text), "%g", spec.base);
        out << "head_dim " << spec.head_dim << ", base " << base_text << "\n";
        for (std::size_t j = 0; j < spec.thetas.size(); ++j) {
            out << "  theta[" << j << "] = " << num(spec.thetas[j]) << "\n";
        }
    }
    return 0;
}

// --- assign ---------------------------------------------------------------

int cmd_assign(int half_dim, int axes, AxisMode mode, double base, Format format,
               std::ostream& out) {
    const auto assign = assign_axes(half_dim, axes, mode);
    const auto spec = make_spectrum(2 * half_dim, base);
    const auto profile = axis_frequency_profile(assign, spec);
    std::vector<std::string> names;
    names.reserve(assign.mapping.size());
    for (int axis : assign.mapping) {
        names.push_back(axis_name(assign, axis));
    }
    if (format == Format::kJson) {
        ordered_json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["half_dim"] = assign.half_dim;
        doc["axis_count"] = assign.axis_count;
        doc["mode"] = mode_name(assign.mode);
        doc["mapping"] = names;
        if (!assign.section_sizes.empty()) {
            doc["section_sizes"] = assign.section_sizes;
        }
        ordered_json stats = ordered_json::array();
        for (const auto& st : profile) {
            stats.push_back({{"axis", axis_name(assign, st.axis)},
                             {"count", st.count},
                             {"theta_min", st.theta_min},
                             {"theta_max", st.theta_max},
                             {"j_min", st.j_min},
                             {"j_max", st.j_max}});
        }
        doc["profile"] = stats;
        emit_json(out, doc);
    } else {
        out << mode_name(assign.mode) << " assignment, half_dim " << assign.half_dim << ", "
            << assign.axis_count << " axes\n  mapping:";
        for (const std::string& name : names) {
            out << " " << name;
        }
        out << "\n";
        for (const auto& st : profile) {
            out << "  axis " << axis_name(assign, st.axis) << ": count " << st.count << ", j ["
                << st.j_min << ", " << st.j_max << "], theta [" << num(st.theta_min) << ", "
                << num(st.theta_max) << "]\n";
        }
    }
    return 0;
}

// --- ruler ----------------------------------------------------------------

int cmd_ruler(int width, int height, int patch, int interval, std::int64_t t0, int axes,
              Format format, std::ostream& out) {
    const auto grid = build_grid(width, height, patch, t0);
    const auto set = build_ruler_tokens(grid, interval, axes);
    if (format == Format::kJson) {
        ordered_json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["grid"] = {{"width_px", grid.width_px},
                       {"height_px", grid.height_px},
                       {"patch_px", grid.patch_px},
                       {"patch_cols", grid.patch_cols},
                       {"patch_rows", grid.patch_rows},
                       {"t0", grid.t0}};
        doc["interval"] = set.interval;
        doc["arithmetic_bound"] = set.arithmetic_bound;
        ordered_json tokens = ordered_json::array();
        for (const auto& token : set.tokens) {
            tokens.push_back({{"grid_index", token.grid_index},
                              {"position", token.position.to_string()},
                              {"face_value", token.face_value}});
        }
        doc["tokens"] = tokens;
        emit_json(out, doc);
    } else {
        out << "grid " << grid.patch_rows << "x" << grid.patch_cols << " patches ("
            << grid.width_px << "x" << grid.height_px << " px, patch " << grid.patch_px
            << "), interval " << set.interval << ", bound " << set.arithmetic_bound << " px\n";
        for (const auto& token : set.tokens) {
            out << "  i=" << token.grid_index << " pos=" << token.position.to_string()
                << " face=" << token.face_value << "\n";
        }
    }
    return 0;
}

// --- sequence ---------------------------------------------------------------

int cmd_sequence(int system_count, const std::vector<std::string>& image_specs, int prompt_count,
                 int patch, int interval, int axes, Format format, std::ostream& out) {
    std::vector<ImageInput> images;
    for (const std::string& spec : image_specs) {
        const auto sep = spec.find('x');
        if (sep == std::string::npos) {
            throw CLI::ValidationError("--images", "expected WIDTHxHEIGHT, got " + spec);
        }
        int w = 0;
        int h = 0;
        try {
            w = std::stoi(spec.substr(0, sep));
            h = std::stoi(spec.substr(sep + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--images", "expected WIDTHxHEIGHT, got " + spec);
        }
        const auto grid = build_grid(w, h, patch);
        images.push_back({grid, static_cast<std::int64_t>(grid.patch_rows) * grid.patch_cols});
    }
    std::vector<std::string> system_tokens;
    for (int i = 0; i < system_count; ++i) {
        system_tokens.push_back("<sys" + std::to_string(i) + ">");
    }
    std::vector<std::string> prompt_tokens;
    for (int i = 0; i < prompt_count; ++i) {
        prompt_tokens.push_back("<prompt" + std::to_string(i) + ">");
    }
    const auto seq = assemble_sequence(system_tokens, images, prompt_tokens, interval, axes);
    if (format == Format::kJson) {
        ordered_json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["axis_count"] = seq.axis_count;
        ordered_json tokens = ordered_json::array();
        for (const auto& token : seq.tokens) {
            tokens.push_back({{"index", token.index},
                              {"segment", segment_name(token.segment)},
                              {"position", token.position.to_string()},
                              {"payload", token.payload}});
        }
        doc["tokens"] = tokens;
        emit_json(out, doc);
    } else {
        out << format_sequence(seq);
    }
    return 0;
}

// --- overhead ---------------------------------------------------------------

int cmd_overhead(const std::string& resolutions_path, int patch,
                 const std::vector<int>& intervals, Format format, std::ostream& out) {
    const auto entries = load_resolutions(resolutions_path);
    if (format == Format::kJson) {
        ordered_json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["patch_px"] = patch;
        ordered_json rows = ordered_json::array();
        for (const auto& entry : entries) {
            for (int s : intervals) {
                const auto stats = overhead(entry.width, entry.height, patch, s);
                rows.push_back({{"name", entry.name},
                                {"width_px", entry.width},
                                {"height_px", entry.height},
                                {"interval", s},
                                {"vision_tokens", stats.vision_count},
                                {"ruler_tokens", stats.ruler_count},
                                {"ratio", stats.ratio}});
            }
        }
        doc["rows"] = rows;
        emit_json(out, doc);
    } else if (format == Format::kCsv) {
        out << "# schema_version=" << kSchemaVersion << "\n";
        out << "name,width_px,height_px,interval,vision_tokens,ruler_tokens,ratio,percent\n";
        for (const auto& entry : entries) {
            for (int s : intervals) {
                const auto stats = overhead(entry.width, entry.height, patch, s);
                char percent[32];
                std::snprintf(percent, sizeof(percent), "%.4f", stats.ratio * 100.0);
                out << entry.name << "," << entry.width << "," << entry.height << "," << s << ","
                    << stats.vision_count << "," << stats.ruler_count << "," << num(stats.ratio)
                    << "," << percent << "\n";
            }
        }
    } else {
        out << "patch " << patch << " px\n";
        for (const auto& entry : entries) {
            out << entry.name << " (" << entry.width << "x" << entry.height << ")\n";
            for (int s : intervals) {
                const auto stats = overhead(entry.width, entry.height, patch, s);
                char line[160];
                std::snprintf(line, sizeof(line),
                              "  s=%-3d vision %-8lld ruler %-5lld ratio %.4f%%\n", s,
                              static_cast<long long>(stats.vision_count),
                              static_cast<long long>(stats.ruler_count), stats.ratio * 100.0);
                out << line;
            }
        }
    }
    return 0;
}

// --- attn-demo ----------------------------------------------------------------

int cmd_attn_demo(const std::string& grid_spec, int interval, const std::string& probe_spec,
                  AxisMode mode, int dim, int patch, double base, std::ostream& out) {
    const auto sep = grid_spec.find('x');
    if (sep == std::string::npos) {
        throw CLI::ValidationError("--grid", "expected HxW, got " + grid_spec);
    }
    const auto comma = probe_spec.find(',');
    if (comma == std::string::npos) {
        throw CLI::ValidationError("--probe", "expected r,c, got " + probe_spec);
    }
    int rows = 0;
    int cols = 0;
    int r = 0;
    int c = 0;
    try {
        rows = std::stoi(grid_spec.substr(0, sep));
        cols = std::stoi(grid_spec.substr(sep + 1));
        r = std::stoi(probe_spec.substr(0, comma));
        c = std::stoi(probe_spec.substr(comma + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid/--probe", "expected integers");
    }
    if (rows < 1 || cols < 1) {
        throw CLI::ValidationError("--grid", "grid extents must be positive");
    }
    const auto grid = build_grid(cols * patch, rows * patch, patch);
    const auto rulers = build_ruler_tokens(grid, interval, 2);
    const auto cfg = make_attention_config(make_spectrum(dim, base),
                                           assign_axes(dim / 2, 2, mode));
    const std::vector<double> probe(static_cast<std::size_t>(dim), 1.0);
    const auto scores = ruler_scores(grid, rulers, r, c, cfg, probe);
    const auto peak = ruler_peak(grid, rulers, r, c, cfg, probe);
    out << "grid " << rows << "x" << cols << ", probe (" << r << "," << c << "), interval "
        << interval << ", " << mode_name(mode) << " dim " << dim << "\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        char line[96];
        std::snprintf(line, sizeof(line), "  ruler i=%-4lld face=%-6s score %+.6f%s\n",
                      static_cast<long long>(rulers.tokens[i].grid_index),
                      rulers.tokens[i].face_value.c_str(), scores[i],
                      rulers.tokens[i].grid_index == peak.grid_index ? "  <- peak" : "");
        out << line;
    }
    out << "peak ruler index " << peak.grid_index << (peak.tie ? " (tie)" : "") << "\n";
    return 0;
}

// --- eval ----------------------------------------------------------------

void report_csv(const AccuracyReport& report, std::ostream& out) {
    out << "# schema_version=" << kSchemaVersion << "\n";
    out << "scope,hits,total,accuracy\n";
    out << "overall," << report.hits << "," << report.total << "," << num(report.overall) << "\n";
    for (const auto& [platform, stats] : report.per_platform) {
        out << platform << "," << stats.hits << "," << stats.total << "," << num(stats.accuracy())
            << "\n";
    }
}

ordered_json report_json(const AccuracyReport& report) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["hits"] = report.hits;
    doc["total"] = report.total;
    doc["accuracy"] = report.overall;
    ordered_json platforms = ordered_json::object();
    for (const auto& [platform, stats] : report.per_platform) {
        platforms[platform] = {
            {"hits", stats.hits}, {"total", stats.total}, {"accuracy", stats.accuracy()}};
    }
    doc["per_platform"] = platforms;
    ordered_json results = ordered_json::array();
    for (const auto& sample : report.samples) {
        results.push_back({{"id", sample.id},
                           {"platform", sample.platform},
                           {"predicted", sample.predicted},
                           {"hit", sample.hit}});
    }
    doc["samples"] = results;
    doc["unmatched_ids"] = report.unmatched_ids;
    doc["unknown_prediction_ids"] = report.unknown_prediction_ids;
    return doc;
}

AccuracyReport run_eval(const std::string& dataset_path, const std::string& preds_path,
                        bool normalized, std::ostream& err) {
    std::ifstream dataset_in(dataset_path);
    if (!dataset_in) {
        throw ParseError("cannot open dataset file: " + dataset_path);
    }
    const auto samples = load_grounding_samples(dataset_in);
    std::ifstream preds_in(preds_path);
    if (!preds_in) {
        throw ParseError("cannot open predictions file: " + preds_path);
    }
    auto load = load_predictions(preds_in);
    for (const std::string& id : load.parse_failures) {
        err << "warning: no coordinate pair in raw_text for id " << id
            << "; counting as a miss\n";
    }
    for (const std::string& id : load.multi_match_ids) {
        err << "warning: several coordinate pairs for id " << id << "; first one used\n";
    }
    if (normalized) {
        std::map<std::string, const GroundingSample*> by_id;
        for (const auto& sample : samples) {
            by_id[sample.id] = &sample;
        }
        for (auto& pred : load.preds) {
            const auto it = by_id.find(pred.id);
            if (it == by_id.end()) {
                continue;
            }
            const auto [x, y] = denormalize(pred.x, pred.y, it->second->image_width_px,
                                            it->second->image_height_px);
            pred.x = x;
            pred.y = y;
        }
    }
    return element_accuracy(samples, load.preds);
}

int cmd_eval(const std::string& dataset_path, const std::string& preds_path, bool normalized,
             Format format, std::ostream& out, std::ostream& err) {
    const auto report = run_eval(dataset_path, preds_path, normalized, err);
    if (format == Format::kJson) {
        emit_json(out, report_json(report));
    } else if (format == Format::kCsv) {
        report_csv(report, out);
    } else {
        char line[96];
        std::snprintf(line, sizeof(line), "element accuracy %.4f (%lld/%lld)\n", report.overall,
                      static_cast<long long>(report.hits), static_cast<long long>(report.total));
        out << line;
        for (const auto& [platform, stats] : report.per_platform) {
            std::snprintf(line, sizeof(line), "  %-10s %.4f (%lld/%lld)\n", platform.c_str(),
                          stats.accuracy(), static_cast<long long>(stats.hits),
                          static_cast<long long>(stats.total));
            out << line;
        }
        if (!report.unmatched_ids.empty()) {
            out << "missing predictions:";
            for (const auto& id : report.unmatched_ids) {
                out << " " << id;
            }
            out << "\n";
        }
        if (!report.unknown_prediction_ids.empty()) {
            out << "predictions without samples:";
            for (const auto& id : report.unknown_prediction_ids) {
                out << " " << id;
            }
            out << "\n";
        }
    }
    return 0;
}

// --- sweep ----------------------------------------------------------------

int cmd_sweep(const std::string& dataset_path, const std::string& preds_dir,
              const std::vector<int>& intervals, bool normalized, Format format, std::ostream& out,
              std::ostream& err) {
    struct Row {
        int interval;
        AccuracyReport report;
    };
    std::vector<Row> rows;
    for (int s : intervals) {
        const std::string preds_path = preds_dir + "/s" + std::to_string(s) + ".jsonl";
        rows.push_back({s, run_eval(dataset_path, preds_path, normalized, err)});
    }
    if (format == Format::kJson) {
        ordered_json doc;
        doc["schema_version"] = kSchemaVersion;
        ordered_json entries = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json entry = report_json(row.report);
            entry.erase("schema_version");
            entry.erase("samples");
            ordered_json named;
            named["interval"] = row.interval;
            named.update(entry);
            entries.push_back(named);
        }
        doc["rows"] = entries;
        emit_json(out, doc);
    } else if (format == Format::kCsv) {
        out << "# schema_version=" << kSchemaVersion << "\n";
        out << "interval,hits,total,accuracy\n";
        for (const auto& row : rows) {
            out << row.interval << "," << row.report.hits << "," << row.report.total << ","
                << num(row.report.overall) << "\n";
        }
    } else {
        for (const auto& row : rows) {
            char line[96];
            std::snprintf(line, sizeof(line), "s=%-3d accuracy %.4f (%lld/%lld)\n", row.interval,
                          row.report.overall, static_cast<long long>(row.report.hits),
                          static_cast<long long>(row.report.total));
            out << line;
        }
    }
    return 0;
}

std::vector<int> parse_intervals(const std::string& csv) {
    std::vector<int> intervals;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            const int s = std::stoi(item);
            if (s < 1) {
                throw std::invalid_argument("non-positive");
            }
            intervals.push_back(s);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--intervals", "expected comma-separated positive integers");
        }
    }
    if (intervals.empty()) {
        throw CLI::ValidationError("--intervals", "list is empty");
    }
    return intervals;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("RULER_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw CLI::ValidationError("RULER_SEED", "must be an unsigned integer");
        }
    }
    return kDefaultCheckSeed;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"coordinate reference tokens and multi-axis rotary embeddings for GUI grounding"};
    app.require_subcommand(1);

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "dump rotary frequency spectrum");
    int dim = 64;
    double base = kDefaultRopeBase;
    bool as_json = false;
    bool as_csv = false;
    spectrum->add_option("--dim", dim, "head dimension (even)")->required();
    spectrum->add_option("--base", base, "rotary base");
    auto* spectrum_json = spectrum->add_flag("--json", as_json, "JSON output");
    spectrum->add_flag("--csv", as_csv, "CSV output")->excludes(spectrum_json);

    // assign
    auto* assign = app.add_subcommand("assign", "dump axis assignment and frequency profile");
    int half_dim = 32;
    int axes = 2;
    std::string mode_str = "inter";
    assign->add_option("--half-dim", half_dim, "number of frequency indices")->required();
    assign->add_option("--axes", axes, "axis count (2 or 3)")->check(CLI::IsMember({2, 3}));
    assign->add_option("--mode", mode_str, "seq or inter");
    assign->add_option("--base", base, "rotary base");
    assign->add_flag("--json", as_json, "JSON output");

    // ruler
    auto* ruler = app.add_subcommand("ruler", "construct coordinate reference tokens");
    int width = 0;
    int height = 0;
    int patch = 28;
    int interval = 8;
    std::int64_t t0 = 0;
    ruler->add_option("--width", width, "image width in pixels")->required();
    ruler->add_option("--height", height, "image height in pixels")->required();
    ruler->add_option("--patch", patch, "patch side in pixels");
    ruler->add_option("--interval", interval, "token interval in patches");
    ruler->add_option("--t0", t0, "initial spatial position id");
    ruler->add_option("--axes", axes, "axis count (2 or 3)")->check(CLI::IsMember({2, 3}));
    ruler->add_flag("--json", as_json, "JSON output");

    // sequence
    auto* sequence = app.add_subcommand("sequence", "assemble and dump a multimodal sequence");
    int system_count = 2;
    int prompt_count = 4;
    std::vector<std::string> image_specs;
    sequence->add_option("--system", system_count, "system token count");
    sequence->add_option("--prompt", prompt_count, "prompt token count");
    sequence->add_option("--images", image_specs, "image sizes, WIDTHxHEIGHT")->delimiter(',');
    sequence->add_option("--patch", patch, "patch side in pixels");
    sequence->add_option("--interval", interval, "ruler token interval in patches");
    sequence->add_option("--axes", axes, "axis count (2 or 3)")->check(CLI::IsMember({2, 3}));
    sequence->add_flag("--json", as_json, "JSON output");

    // overhead
    auto* overhead_cmd = app.add_subcommand("overhead", "ruler-to-vision token ratio table");
    std::string resolutions_path;
    std::string intervals_csv = "2,4,8,16";
    overhead_cmd->add_option("--resolutions", resolutions_path, "file of name,width,height lines")
        ->required();
    overhead_cmd->add_option("--patch", patch, "patch side in pixels");
    overhead_cmd->add_option("--intervals", intervals_csv, "comma-separated interval list");
    auto* overhead_json = overhead_cmd->add_flag("--json", as_json, "JSON output");
    overhead_cmd->add_flag("--csv", as_csv, "CSV output")->excludes(overhead_json);

    // attn-demo
    auto* attn = app.add_subcommand("attn-demo", "per-ruler attention scores for a probe patch");
    std::string grid_spec;
    std::string probe_spec;
    int attn_dim = 32;
    attn->add_option("--grid", grid_spec, "patch grid as HxW")->required();
    attn->add_option("--interval", interval, "ruler token interval in patches");
    attn->add_option("--probe", probe_spec, "probe patch as r,c")->required();
    attn->add_option("--mode", mode_str, "seq or inter");
    attn->add_option("--dim", attn_dim, "head dimension")->check(CLI::PositiveNumber);
    attn->add_option("--patch", patch, "patch side in pixels");
    attn->add_option("--base", base, "rotary base");

    // eval
    auto* eval = app.add_subcommand("eval", "element accuracy of predictions against a dataset");
    std::string dataset_path;
    std::string preds_path;
    bool normalized = false;
    eval->add_option("--dataset", dataset_path, "grounding samples, JSONL")->required();
    eval->add_option("--preds", preds_path, "predictions, JSONL")->required();
    eval->add_flag("--normalized", normalized, "treat points as [0,1] and scale by image size");
    auto* eval_json = eval->add_flag("--json", as_json, "JSON output");
    eval->add_flag("--csv", as_csv, "CSV output")->excludes(eval_json);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "per-interval accuracy table");
    std::string preds_dir;
    sweep->add_option("--dataset", dataset_path, "grounding samples, JSONL")->required();
    sweep->add_option("--preds-dir", preds_dir, "directory with s<interval>.jsonl files")
        ->required();
    sweep->add_option("--intervals", intervals_csv, "comma-separated interval list");
    sweep->add_flag("--normalized", normalized, "treat points as [0,1] and scale by image size");
    auto* sweep_json = sweep->add_flag("--json", as_json, "JSON output");
    sweep->add_flag("--csv", as_csv, "CSV output")->excludes(sweep_json);

    // check
    auto* check = app.add_subcommand("check", "run the full property suite");
    std::uint64_t seed = 0;
    auto* seed_opt = check->add_option("--seed", seed, "property-test seed");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 1;
    }

    try {
        const Format format = pick_format(as_json, as_csv);
        if (spectrum->parsed()) {
            return cmd_spectrum(dim, base, format, out);
        }
        if (assign->parsed()) {
            return cmd_assign(half_dim, axes, parse_mode(mode_str), base, format, out);
        }
        if (ruler->parsed()) {
            return cmd_ruler(width, height, patch, interval, t0, axes, format, out);
        }
        if (sequence->parsed()) {
            return cmd_sequence(system_count, image_specs, prompt_count, patch, interval, axes,
                                format, out);
        }
        if (overhead_cmd->parsed()) {
            return cmd_overhead(resolutions_path, patch, parse_intervals(intervals_csv), format,
                                out);
        }
        if (attn->parsed()) {
            return cmd_attn_demo(grid_spec, interval, probe_spec, parse_mode(mode_str), attn_dim,
                                 patch, base, out);
        }
        if (eval->parsed()) {
            return cmd_eval(dataset_path, preds_path, normalized, format, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(dataset_path, preds_dir, parse_intervals(intervals_csv), normalized,
                             format, out, err);
        }
        if (check->parsed()) {
            const std::uint64_t chosen = seed_opt->count() > 0 ? seed : default_seed();
            return run_checks(chosen, out) ? 0 : 2;
        }
    } catch (const CLI::ValidationError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand selected\n";
    return 1;
}

} // namespace rulerkit::cli
