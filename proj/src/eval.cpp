#include "rulerkit/eval.hpp"

#include <algorithm>
#include <istream>
#include <regex>
#include <set>
#include <string>
#include <unordered_map>

#include "json.hpp"

namespace rulerkit {

namespace {

// Optionally signed decimal.
const char* const kNum = R"([+-]?(?:\d+(?:\.\d*)?|\.\d+))";

const std::regex& point_regex() {
    static const std::regex re("x\\s*=\\s*(" + std::string(kNum) + ")\\s*,\\s*y\\s*=\\s*(" + kNum +
                               ")" + "|\\(\\s*(" + kNum + ")\\s*,\\s*(" + kNum + ")\\s*\\)" +
                               "|(" + kNum + ")\\s*,\\s*(" + kNum + ")");
    return re;
}

} // namespace

ParsedPoint parse_point(std::string_view text) {
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(text.begin(), text.end(), m, point_regex())) {
        throw ParseError("no coordinate pair found in: " + std::string(text), std::string(text));
    }
    ParsedPoint point;
    for (std::size_t g = 1; g + 1 < m.size(); g += 2) {
        if (m[g].matched) {
            point.x = std::stod(m[g].str());
            point.y = std::stod(m[g + 1].str());
            break;
        }
    }
    std::match_results<std::string_view::const_iterator> rest;
    if (std::regex_search(m[0].second, text.end(), rest, point_regex())) {
        point.multiple_matches = true;
    }
    return point;
}

std::pair<double, double> denormalize(double u, double v, int width_px, int height_px) {
    if (width_px < 1 || height_px < 1) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("normalized coordinates must lie in [0,1]");
    }
    return {u * width_px, v * height_px};
}

AccuracyReport element_accuracy(const std::vector<GroundingSample>& samples,
                                const std::vector<Prediction>& preds) {
    std::unordered_map<std::string, const Prediction*> by_id;
    std::set<std::string> duplicates;
    for (const Prediction& p : preds) {
        if (!by_id.emplace(p.id, &p).second) {
            duplicates.insert(p.id);
        }
    }
    if (!duplicates.empty()) {
        std::string msg = "duplicate prediction ids:";
        for (const std::string& id : duplicates) {
            msg += " " + id;
        }
        throw std::invalid_argument(msg);
    }

    AccuracyReport report;
    report.total = static_cast<std::int64_t>(samples.size());
    std::set<std::string> sample_ids;
    for (const GroundingSample& sample : samples) {
        sample_ids.insert(sample.id);
        SampleResult result;
        result.id = sample.id;
        result.platform = sample.platform;
        auto it = by_id.find(sample.id);
        if (it == by_id.end()) {
            report.unmatched_ids.push_back(sample.id);
        } else {
            result.predicted = true;
            result.hit = sample.target.contains(it->second->x, it->second->y);
        }
        auto& platform = report.per_platform[sample.platform];
        ++platform.total;
        if (result.hit) {
            ++platform.hits;
            ++report.hits;
        }
        report.samples.push_back(std::move(result));
    }
    for (const Prediction& p : preds) {
        if (!sample_ids.count(p.id)) {
            report.unknown_prediction_ids.push_back(p.id);
        }
    }
    report.overall = report.total == 0 ? 0.0 : static_cast<double>(report.hits) / report.total;
    return report;
}

namespace {

using nlohmann::json;

json parse_record(const std::string& line, const char* what, std::size_t line_no) {
    try {
        json record = json::parse(line);
        if (!record.is_object()) {
            throw ParseError(std::string(what) + " line " + std::to_string(line_no) +
                             ": expected a JSON object");
        }
        return record;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + " line " + std::to_string(line_no) + ": " + e.what(),
                         line);
    }
}

std::string id_field(const json& record, const char* what, std::size_t line_no) {
    if (!record.contains("id")) {
        throw ParseError(std::string(what) + " line " + std::to_string(line_no) + ": missing id");
    }
    const json& id = record.at("id");
    return id.is_string() ? id.get<std::string>() : id.dump();
}

} // namespace

std::vector<GroundingSample> load_grounding_samples(std::istream& in) {
    std::vector<GroundingSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const json record = parse_record(line, "dataset", line_no);
        GroundingSample sample;
        sample.id = id_field(record, "dataset", line_no);
        try {
            sample.image_width_px = record.at("image_width").get<int>();
            sample.image_height_px = record.at("image_height").get<int>();
            sample.instruction = record.value("instruction", std::string{});
            sample.platform = record.value("platform", std::string{});
            const json& bbox = record.at("bbox");
            if (!bbox.is_array() || bbox.size() != 4) {
                throw ParseError("bbox must be [x_min,y_min,x_max,y_max]");
            }
            sample.target = {bbox[0].get<double>(), bbox[1].get<double>(), bbox[2].get<double>(),
                             bbox[3].get<double>()};
        } catch (const json::exception& e) {
            throw ParseError("dataset line " + std::to_string(line_no) + ": " + e.what(), line);
        }
        if (sample.image_width_px < 1 || sample.image_height_px < 1) {
            throw ParseError("dataset line " + std::to_string(line_no) +
                             ": image dimensions must be positive");
        }
        const BBox& b = sample.target;
        if (b.x_min > b.x_max || b.y_min > b.y_max) {
            throw ParseError("dataset line " + std::to_string(line_no) + ": degenerate bbox");
        }
        if (b.x_min < 0 || b.y_min < 0 || b.x_max > sample.image_width_px ||
            b.y_max > sample.image_height_px) {
            throw ParseError("dataset line " + std::to_string(line_no) +
                             ": bbox outside image bounds");
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

PredictionLoad load_predictions(std::istream& in) {
    PredictionLoad load;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const json record = parse_record(line, "predictions", line_no);
        Prediction pred;
        pred.id = id_field(record, "predictions", line_no);
        if (record.contains("x") && record.contains("y")) {
            try {
                pred.x = record.at("x").get<double>();
                pred.y = record.at("y").get<double>();
            } catch (const json::exception& e) {
                throw ParseError("predictions line " + std::to_string(line_no) + ": " + e.what(),
                                 line);
            }
        } else if (record.contains("raw_text")) {
            try {
                const ParsedPoint point = parse_point(record.at("raw_text").get<std::string>());
                pred.x = point.x;
                pred.y = point.y;
                if (point.multiple_matches) {
                    load.multi_match_ids.push_back(pred.id);
                }
            } catch (const ParseError&) {
                load.parse_failures.push_back(pred.id);
                continue;
            }
        } else {
            throw ParseError("predictions line " + std::to_string(line_no) +
                             ": record needs x/y or raw_text");
        }
        load.preds.push_back(std::move(pred));
    }
    return load;
}

} // namespace rulerkit
