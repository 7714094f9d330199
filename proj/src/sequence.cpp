#include "rulerkit/sequence.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rulerkit {

ImageGrid build_grid(int width_px, int height_px, int patch_px, std::int64_t t0) {
    if (width_px < 1 || height_px < 1 || patch_px < 1) {
        throw std::invalid_argument("pixel sizes must be positive");
    }
    if (t0 < 0) {
        throw std::invalid_argument("t0 must be non-negative");
    }
    ImageGrid grid;
    grid.width_px = width_px;
    grid.height_px = height_px;
    grid.patch_px = patch_px;
    grid.patch_cols = (width_px + patch_px - 1) / patch_px;
    grid.patch_rows = (height_px + patch_px - 1) / patch_px;
    grid.t0 = t0;
    return grid;
}

RulerTokenSet build_ruler_tokens(const ImageGrid& grid, int interval, int axis_count) {
    if (interval < 1) {
        throw std::invalid_argument("interval must be >= 1");
    }
    RulerTokenSet set;
    set.interval = interval;
    set.arithmetic_bound = static_cast<std::int64_t>(interval) * grid.patch_px;
    // Indices {0, s, ..., floor(max(H,W)/s)*s}. The last index can sit one
    // past the final patch row/column; it marks the image's far edge.
    const std::int64_t last = static_cast<std::int64_t>(grid.max_patches() / interval) * interval;
    for (std::int64_t i = 0; i <= last; i += interval) {
        RulerToken token;
        token.grid_index = i;
        token.position = PositionId::uniform(axis_count, grid.t0 + i);
        token.face_value = std::to_string(i * grid.patch_px);
        set.tokens.push_back(std::move(token));
    }
    return set;
}

std::string segment_name(Segment segment) {
    switch (segment) {
    case Segment::kSystem:
        return "system";
    case Segment::kRuler:
        return "ruler";
    case Segment::kVision:
        return "vision";
    case Segment::kPrompt:
        return "prompt";
    }
    throw std::invalid_argument("unknown segment");
}

MultimodalSequence assemble_sequence(const std::vector<std::string>& system_tokens,
                                     const std::vector<ImageInput>& images,
                                     const std::vector<std::string>& prompt_tokens, int interval,
                                     int axis_count) {
    if (axis_count != 2 && axis_count != 3) {
        throw std::invalid_argument("axis_count must be 2 or 3");
    }
    if (interval < 1) {
        throw std::invalid_argument("interval must be >= 1");
    }
    for (const ImageInput& img : images) {
        const std::int64_t expect =
            static_cast<std::int64_t>(img.grid.patch_rows) * img.grid.patch_cols;
        if (img.vision_count != expect) {
            throw std::invalid_argument("image declares " + std::to_string(img.vision_count) +
                                        " vision tokens but its grid holds " +
                                        std::to_string(expect));
        }
    }

    MultimodalSequence seq;
    seq.axis_count = axis_count;
    std::int64_t next_component = 0; // max position component used so far + 1
    std::size_t index = 0;

    auto emit = [&](Segment segment, PositionId pos, std::string payload) {
        for (int a = 0; a < axis_count; ++a) {
            next_component = std::max(next_component, pos[a] + 1);
        }
        seq.tokens.push_back({index++, segment, pos, std::move(payload)});
    };

    for (const std::string& tok : system_tokens) {
        emit(Segment::kSystem, PositionId::uniform(axis_count, next_component), tok);
    }

    std::size_t image_idx = 0;
    for (const ImageInput& img : images) {
        ImageGrid grid = img.grid;
        grid.t0 = next_component;
        for (const RulerToken& token : build_ruler_tokens(grid, interval, axis_count).tokens) {
            emit(Segment::kRuler, token.position, token.face_value);
        }
        for (int r = 0; r < grid.patch_rows; ++r) {
            for (int c = 0; c < grid.patch_cols; ++c) {
                PositionId pos = axis_count == 3
                                     ? PositionId::thw(grid.t0, grid.t0 + r, grid.t0 + c)
                                     : PositionId::hw(grid.t0 + r, grid.t0 + c);
                emit(Segment::kVision, pos,
                     "<img" + std::to_string(image_idx) + ":" + std::to_string(r) + "," +
                         std::to_string(c) + ">");
            }
        }
        ++image_idx;
    }

    for (const std::string& tok : prompt_tokens) {
        emit(Segment::kPrompt, PositionId::uniform(axis_count, next_component), tok);
    }
    return seq;
}

std::string format_sequence(const MultimodalSequence& seq) {
    std::string out;
    for (const SequenceToken& token : seq.tokens) {
        out += std::to_string(token.index);
        out += '\t';
        out += segment_name(token.segment);
        out += '\t';
        out += token.position.to_string();
        out += '\t';
        out += token.payload;
        out += '\n';
    }
    return out;
}

OverheadStats overhead(int width_px, int height_px, int patch_px, int interval) {
    if (interval < 1) {
        throw std::invalid_argument("interval must be >= 1");
    }
    const ImageGrid grid = build_grid(width_px, height_px, patch_px);
    OverheadStats stats;
    stats.vision_count = static_cast<std::int64_t>(grid.patch_rows) * grid.patch_cols;
    stats.ruler_count = grid.max_patches() / interval + 1;
    stats.ratio = static_cast<double>(stats.ruler_count) / static_cast<double>(stats.vision_count);
    return stats;
}

} // namespace rulerkit
