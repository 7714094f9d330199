#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rulerkit {

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& what, std::string text = {})
        : std::runtime_error(what), text_(std::move(text)) {}

    const std::string& text() const { return text_; }

  private:
    std::string text_;
};

struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    // Boundary inclusive.
    bool contains(double x, double y) const {
        return x_min <= x && x <= x_max && y_min <= y && y <= y_max;
    }
};

struct GroundingSample {
    std::string id;
    int image_width_px = 0;
    int image_height_px = 0;
    std::string instruction;
    BBox target;
    std::string platform;
};

struct Prediction {
    std::string id;
    double x = 0.0;
    double y = 0.0;
};

struct ParsedPoint {
    double x = 0.0;
    double y = 0.0;
    bool multiple_matches = false;
};

// Extracts the first coordinate pair matching, in order of appearance:
//   x=<num>, y=<num>   |   (<num>, <num>)   |   <num>, <num>
// Numbers are optionally signed decimals; surrounding prose is ignored.
// Throws ParseError when no pair is present; sets multiple_matches when
// more than one pair appears.
ParsedPoint parse_point(std::string_view text);

// (u, v) in [0,1]^2 -> raw pixels (u * width_px, v * height_px), no rounding.
std::pair<double, double> denormalize(double u, double v, int width_px, int height_px);

struct SampleResult {
    std::string id;
    std::string platform;
    bool predicted = false;
    bool hit = false;
};

struct PlatformStats {
    std::int64_t hits = 0;
    std::int64_t total = 0;

    double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(hits) / total; }
};

struct AccuracyReport {
    std::int64_t hits = 0;
    std::int64_t total = 0;
    double overall = 0.0;
    std::map<std::string, PlatformStats> per_platform;
    std::vector<SampleResult> samples;              // in dataset order
    std::vector<std::string> unmatched_ids;         // samples without a prediction
    std::vector<std::string> unknown_prediction_ids; // predictions without a sample
};

// Hit iff the predicted point falls within the target box, boundaries
// inclusive. Missing predictions count as misses and are listed. Duplicate
// prediction ids are invalid input.
AccuracyReport element_accuracy(const std::vector<GroundingSample>& samples,
                                const std::vector<Prediction>& preds);

// Line-delimited dataset records, one JSON object per line:
//   {"id","image_width","image_height","instruction","bbox":[x0,y0,x1,y1],"platform"}
std::vector<GroundingSample> load_grounding_samples(std::istream& in);

struct PredictionLoad {
    std::vector<Prediction> preds;
    std::vector<std::string> parse_failures;   // ids whose raw_text had no coordinate pair
    std::vector<std::string> multi_match_ids;  // ids whose raw_text had several pairs
};

// Line-delimited prediction records: {"id","x","y"} or {"id","raw_text"};
// raw_text is routed through parse_point. Unparseable raw_text drops the
// prediction (the sample scores as a miss) and records the id.
PredictionLoad load_predictions(std::istream& in);

} // namespace rulerkit
