#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace illu {

/// H x W pixel grid, 1 (gray) or 3 (RGB) channels, 8-bit row-major samples.
/// The universal currency of the pipeline.
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data; // interleaved, row-major

    bool valid() const {
        return width >= 1 && height >= 1 && (channels == 1 || channels == 3) &&
               data.size() == static_cast<std::size_t>(width) * height * channels;
    }
    std::uint8_t at(int y, int x, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t& at(int y, int x, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool operator==(const RasterImage&) const = default;
};

/// Row-major real working plane, nominal range [0, 255].
struct FloatPlane {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    FloatPlane() = default;
    FloatPlane(int h, int w, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int y, int x) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    double& at(int y, int x) {
        return values[static_cast<std::size_t>(y) * width + x];
    }
};

/// Placement of a rendered character string: tight ink box (C_H x C_W) and
/// its top-left position on the canvas.
struct GlyphLayout {
    std::string text;
    int bbox_w = 0;
    int bbox_h = 0;
    int origin_x = 0;
    int origin_y = 0;
    int canvas_w = 0;
    int canvas_h = 0;
};

enum class ScaleClass { Large, Medium, Small, Unclassified };

const char* scale_name(ScaleClass s);
ScaleClass scale_from_name(const std::string& name);

// --- Operations -------------------------------------------------------------

/// Luminance conversion with Rec. 601 weights (0.299/0.587/0.114).
/// 1-channel input passes through numerically unchanged.
FloatPlane to_gray(const RasterImage& img);

/// Area-averaging (box) resampling to exactly (out_h, out_w).
FloatPlane resize(const FloatPlane& plane, int out_h, int out_w);

/// Pastes the plane centered on a white canvas (floor division for odd
/// margins). Border samples are exactly 255.0.
FloatPlane pad_center_white(const FloatPlane& plane, int canvas_h, int canvas_w);

/// Clamp to [0, 255] and round to 8-bit.
std::uint8_t quantize_sample(double v);
RasterImage quantize(const FloatPlane& plane);

FloatPlane channel_plane(const RasterImage& img, int channel);
RasterImage merge_channels(const std::vector<FloatPlane>& planes);

// --- PNG I/O (8-bit, non-interlaced) ----------------------------------------

RasterImage read_png(const std::string& path);
void write_png(const std::string& path, const RasterImage& img);
std::vector<std::uint8_t> encode_png(const RasterImage& img);

} // namespace illu
