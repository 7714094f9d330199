#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rulerkit/mrope.hpp"

namespace rulerkit {

// Patch grid of one image: patch_cols = ceil(width_px / patch_px),
// patch_rows = ceil(height_px / patch_px). t0 is the initial spatial
// position id of the image's patches within a sequence.
struct ImageGrid {
    int width_px = 0;
    int height_px = 0;
    int patch_px = 0;
    int patch_cols = 0; // along width
    int patch_rows = 0; // along height
    std::int64_t t0 = 0;

    int max_patches() const { return patch_cols > patch_rows ? patch_cols : patch_rows; }
    int min_patches() const { return patch_cols < patch_rows ? patch_cols : patch_rows; }
};

ImageGrid build_grid(int width_px, int height_px, int patch_px, std::int64_t t0 = 0);

// One coordinate reference token: grid index i (a multiple of the interval),
// position with all axes equal to t0 + i, face value = decimal string of the
// pixel coordinate i * patch_px.
struct RulerToken {
    std::int64_t grid_index = 0;
    PositionId position;
    std::string face_value;
};

struct RulerTokenSet {
    int interval = 1;                    // s, in patch units
    std::int64_t arithmetic_bound = 0;   // s * patch_px, in pixels
    std::vector<RulerToken> tokens;      // indices {0, s, ..., floor(max(H,W)/s)*s}
};

RulerTokenSet build_ruler_tokens(const ImageGrid& grid, int interval, int axis_count = 2);

enum class Segment { kSystem, kRuler, kVision, kPrompt };

std::string segment_name(Segment segment);

struct SequenceToken {
    std::size_t index = 0; // 0-based causal order
    Segment segment = Segment::kSystem;
    PositionId position;
    std::string payload;
};

struct MultimodalSequence {
    int axis_count = 2;
    std::vector<SequenceToken> tokens;
};

// An image to place in a sequence plus the number of vision placeholders it
// contributes; the count must equal patch_rows * patch_cols.
struct ImageInput {
    ImageGrid grid;
    std::int64_t vision_count = 0;
};

// Assembles [system, (ruler, vision)*, prompt] with position ids.
//
// Text-like tokens (system, ruler, prompt) get all-axes-equal positions.
// Position components chain as "next = max component used so far + 1":
// system tokens occupy 0..n_sys-1, each image's ruler block and vision grid
// start at a fresh t0 (the input grid's t0 is ignored), and prompt tokens
// resume after the last image. The vision token at patch row r, col c has
// h = t0 + r, w = t0 + c (t = t0 with three axes). A pure-text sequence
// therefore numbers 0,1,2,... on every axis.
MultimodalSequence assemble_sequence(const std::vector<std::string>& system_tokens,
                                     const std::vector<ImageInput>& images,
                                     const std::vector<std::string>& prompt_tokens, int interval,
                                     int axis_count);

// One token per line: "seq_idx<TAB>segment<TAB>pos<TAB>payload".
std::string format_sequence(const MultimodalSequence& seq);

struct OverheadStats {
    std::int64_t vision_count = 0;
    std::int64_t ruler_count = 0;
    double ratio = 0.0; // ruler_count / vision_count
};

OverheadStats overhead(int width_px, int height_px, int patch_px, int interval);

} // namespace rulerkit
