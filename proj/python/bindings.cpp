#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rulerkit/attention.hpp"
#include "rulerkit/eval.hpp"
#include "rulerkit/mrope.hpp"
#include "rulerkit/rope.hpp"
#include "rulerkit/sequence.hpp"

namespace py = pybind11;
using namespace rulerkit;

namespace {

PositionId position_from_tuple(const std::vector<std::int64_t>& axes) {
    if (axes.size() == 2) {
        return PositionId::hw(axes[0], axes[1]);
    }
    if (axes.size() == 3) {
        return PositionId::thw(axes[0], axes[1], axes[2]);
    }
    throw std::invalid_argument("position must have 2 or 3 axes");
}

std::vector<std::int64_t> position_to_list(const PositionId& pos) {
    std::vector<std::int64_t> axes(static_cast<std::size_t>(pos.axis_count()));
    for (int a = 0; a < pos.axis_count(); ++a) {
        axes[static_cast<std::size_t>(a)] = pos[a];
    }
    return axes;
}

AxisMode mode_from_string(const std::string& mode) {
    if (mode == "sequential" || mode == "seq") {
        return AxisMode::kSequential;
    }
    if (mode == "interleaved" || mode == "inter") {
        return AxisMode::kInterleaved;
    }
    throw std::invalid_argument("mode must be 'sequential' or 'interleaved'");
}

} // namespace

PYBIND11_MODULE(rulerkit, m) {
    m.doc() = "Coordinate reference tokens and multi-axis rotary embeddings for GUI grounding";

    py::register_exception<ParseError>(m, "PointParseError");

    py::class_<FrequencySpectrum>(m, "FrequencySpectrum")
        .def_readonly("head_dim", &FrequencySpectrum::head_dim)
        .def_readonly("base", &FrequencySpectrum::base)
        .def_readonly("thetas", &FrequencySpectrum::thetas);

    py::class_<AxisAssignment>(m, "AxisAssignment")
        .def_readonly("axis_count", &AxisAssignment::axis_count)
        .def_readonly("half_dim", &AxisAssignment::half_dim)
        .def_readonly("mapping", &AxisAssignment::mapping)
        .def_readonly("section_sizes", &AxisAssignment::section_sizes)
        .def_property_readonly("mode", [](const AxisAssignment& a) {
            return a.mode == AxisMode::kSequential ? "sequential" : "interleaved";
        })
        .def("axis_names", [](const AxisAssignment& a) {
            std::vector<std::string> names;
            for (int axis : a.mapping) {
                names.push_back(axis_name(a, axis));
            }
            return names;
        });

    py::class_<ImageGrid>(m, "ImageGrid")
        .def_readonly("width_px", &ImageGrid::width_px)
        .def_readonly("height_px", &ImageGrid::height_px)
        .def_readonly("patch_px", &ImageGrid::patch_px)
        .def_readonly("patch_cols", &ImageGrid::patch_cols)
        .def_readonly("patch_rows", &ImageGrid::patch_rows)
        .def_readonly("t0", &ImageGrid::t0);

    py::class_<RulerToken>(m, "RulerToken")
        .def_readonly("grid_index", &RulerToken::grid_index)
        .def_readonly("face_value", &RulerToken::face_value)
        .def_property_readonly(
            "position", [](const RulerToken& t) { return position_to_list(t.position); });

    py::class_<RulerTokenSet>(m, "RulerTokenSet")
        .def_readonly("interval", &RulerTokenSet::interval)
        .def_readonly("arithmetic_bound", &RulerTokenSet::arithmetic_bound)
        .def_readonly("tokens", &RulerTokenSet::tokens);

    py::class_<SequenceToken>(m, "SequenceToken")
        .def_readonly("index", &SequenceToken::index)
        .def_readonly("payload", &SequenceToken::payload)
        .def_property_readonly("segment",
                               [](const SequenceToken& t) { return segment_name(t.segment); })
        .def_property_readonly(
            "position", [](const SequenceToken& t) { return position_to_list(t.position); });

    py::class_<MultimodalSequence>(m, "MultimodalSequence")
        .def_readonly("axis_count", &MultimodalSequence::axis_count)
        .def_readonly("tokens", &MultimodalSequence::tokens);

    py::class_<OverheadStats>(m, "OverheadStats")
        .def_readonly("vision_count", &OverheadStats::vision_count)
        .def_readonly("ruler_count", &OverheadStats::ruler_count)
        .def_readonly("ratio", &OverheadStats::ratio);

    py::class_<AccuracyReport>(m, "AccuracyReport")
        .def_readonly("hits", &AccuracyReport::hits)
        .def_readonly("total", &AccuracyReport::total)
        .def_readonly("accuracy", &AccuracyReport::overall)
        .def_readonly("unmatched_ids", &AccuracyReport::unmatched_ids)
        .def_property_readonly("per_platform", [](const AccuracyReport& r) {
            py::dict platforms;
            for (const auto& [platform, stats] : r.per_platform) {
                py::dict entry;
                entry["hits"] = stats.hits;
                entry["total"] = stats.total;
                entry["accuracy"] = stats.accuracy();
                platforms[py::str(platform)] = entry;
            }
            return platforms;
        });

    m.def("make_spectrum", &make_spectrum, py::arg("head_dim"),
          py::arg("base") = kDefaultRopeBase);
    m.def(
        "apply_rotation",
        [](const std::vector<double>& v, std::int64_t m, const FrequencySpectrum& spec) {
            return apply_rotation(v, m, spec);
        },
        py::arg("v"), py::arg("m"), py::arg("spec"));
    m.def(
        "rotation_gradient",
        [](const std::vector<double>& upstream, std::int64_t m, const FrequencySpectrum& spec) {
            return rotation_gradient(upstream, m, spec);
        },
        py::arg("upstream"), py::arg("m"), py::arg("spec"));
    m.def(
        "assign_axes",
        [](int half_dim, int axis_count, const std::string& mode,
           std::optional<std::vector<int>> section_sizes) {
            return assign_axes(half_dim, axis_count, mode_from_string(mode),
                               std::move(section_sizes));
        },
        py::arg("half_dim"), py::arg("axis_count"), py::arg("mode") = "interleaved",
        py::arg("section_sizes") = py::none());
    m.def(
        "apply_mrope",
        [](const std::vector<double>& v, const std::vector<std::int64_t>& pos,
           const AxisAssignment& assign, const FrequencySpectrum& spec) {
            return apply_mrope(v, position_from_tuple(pos), assign, spec);
        },
        py::arg("v"), py::arg("pos"), py::arg("assign"), py::arg("spec"));
    m.def("build_grid", &build_grid, py::arg("width_px"), py::arg("height_px"),
          py::arg("patch_px"), py::arg("t0") = 0);
    m.def("build_ruler_tokens", &build_ruler_tokens, py::arg("grid"), py::arg("interval"),
          py::arg("axis_count") = 2);
    m.def(
        "assemble_sequence",
        [](const std::vector<std::string>& system_tokens, const std::vector<ImageGrid>& images,
           const std::vector<std::string>& prompt_tokens, int interval, int axis_count) {
            std::vector<ImageInput> inputs;
            inputs.reserve(images.size());
            for (const ImageGrid& grid : images) {
                inputs.push_back(
                    {grid, static_cast<std::int64_t>(grid.patch_rows) * grid.patch_cols});
            }
            return assemble_sequence(system_tokens, inputs, prompt_tokens, interval, axis_count);
        },
        py::arg("system_tokens"), py::arg("images"), py::arg("prompt_tokens"),
        py::arg("interval") = 8, py::arg("axis_count") = 2);
    m.def("format_sequence", &format_sequence, py::arg("sequence"));
    m.def("overhead", &overhead, py::arg("width_px"), py::arg("height_px"), py::arg("patch_px"),
          py::arg("interval"));
    m.def(
        "score",
        [](const std::vector<double>& q, const std::vector<double>& k,
           const std::vector<std::int64_t>& pos_q, const std::vector<std::int64_t>& pos_k,
           const FrequencySpectrum& spec, const AxisAssignment& assign, double scale) {
            return score(q, k, position_from_tuple(pos_q), position_from_tuple(pos_k),
                         make_attention_config(spec, assign, scale));
        },
        py::arg("q"), py::arg("k"), py::arg("pos_q"), py::arg("pos_k"), py::arg("spec"),
        py::arg("assign"), py::arg("scale") = 0.0);
    m.def(
        "ruler_peak",
        [](const ImageGrid& grid, const RulerTokenSet& rulers, int row, int col,
           const FrequencySpectrum& spec, const AxisAssignment& assign,
           const std::vector<double>& probe_vector, double scale) {
            const auto peak = ruler_peak(grid, rulers, row, col,
                                         make_attention_config(spec, assign, scale), probe_vector);
            return py::make_tuple(peak.grid_index, peak.tie);
        },
        py::arg("grid"), py::arg("rulers"), py::arg("row"), py::arg("col"), py::arg("spec"),
        py::arg("assign"), py::arg("probe_vector"), py::arg("scale") = 0.0);
    m.def(
        "parse_point",
        [](const std::string& text) {
            const ParsedPoint point = parse_point(text);
            return py::make_tuple(point.x, point.y, point.multiple_matches);
        },
        py::arg("text"));
    m.def("denormalize", &denormalize, py::arg("u"), py::arg("v"), py::arg("width_px"),
          py::arg("height_px"));
    m.def(
        "element_accuracy",
        [](const std::vector<std::tuple<std::string, std::vector<double>, std::string>>& samples,
           const std::vector<std::tuple<std::string, double, double>>& preds) {
            std::vector<GroundingSample> gs;
            for (const auto& [id, bbox, platform] : samples) {
                if (bbox.size() != 4) {
                    throw std::invalid_argument("bbox must be [x_min, y_min, x_max, y_max]");
                }
                GroundingSample sample;
                sample.id = id;
                sample.image_width_px = 1 << 20;
                sample.image_height_px = 1 << 20;
                sample.target = {bbox[0], bbox[1], bbox[2], bbox[3]};
                sample.platform = platform;
                gs.push_back(std::move(sample));
            }
            std::vector<Prediction> ps;
            for (const auto& [id, x, y] : preds) {
                ps.push_back({id, x, y});
            }
            return element_accuracy(gs, ps);
        },
        py::arg("samples"), py::arg("preds"),
        "samples: (id, [x_min,y_min,x_max,y_max], platform); preds: (id, x, y)");

    m.attr("__version__") = "0.1.0";
}
