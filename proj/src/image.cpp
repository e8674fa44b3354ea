#include "illu/image.hpp"

#include <cmath>

#include "illu/errors.hpp"

namespace illu {

const char* scale_name(ScaleClass s) {
    switch (s) {
        case ScaleClass::Large: return "large";
        case ScaleClass::Medium: return "medium";
        case ScaleClass::Small: return "small";
        default: return "unclassified";
    }
}

ScaleClass scale_from_name(const std::string& name) {
    if (name == "large") return ScaleClass::Large;
    if (name == "medium") return ScaleClass::Medium;
    if (name == "small") return ScaleClass::Small;
    if (name == "unclassified") return ScaleClass::Unclassified;
    throw Error("unknown scale class: " + name);
}

FloatPlane to_gray(const RasterImage& img) {
    if (!img.valid()) throw Error("to_gray: invalid image");
    FloatPlane out(img.height, img.width);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    if (img.channels == 1) {
        for (std::size_t i = 0; i < n; ++i) out.values[i] = img.data[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint8_t* p = &img.data[i * 3];
            out.values[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
        }
    }
    return out;
}

namespace {

struct Tap {
    int index;
    double weight;
};

// Overlap weights of output cell i against input cells, for a box filter.
std::vector<std::vector<Tap>> box_taps(int in_n, int out_n) {
    std::vector<std::vector<Tap>> taps(out_n);
    const double ratio = static_cast<double>(in_n) / out_n;
    for (int i = 0; i < out_n; ++i) {
        const double a = i * ratio;
        const double b = (i + 1) * ratio;
        int first = static_cast<int>(std::floor(a));
        int last = static_cast<int>(std::ceil(b)) - 1;
        if (last >= in_n) last = in_n - 1;
        for (int j = first; j <= last; ++j) {
            double w = std::min(b, static_cast<double>(j + 1)) -
                       std::max(a, static_cast<double>(j));
            if (w > 0) taps[i].push_back({j, w});
        }
    }
    return taps;
}

} // namespace

FloatPlane resize(const FloatPlane& plane, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) throw ZeroDimension("resize: target dimension < 1");
    if (plane.height < 1 || plane.width < 1) throw ZeroDimension("resize: empty input");
    if (out_h == plane.height && out_w == plane.width) return plane;

    const auto row_taps = box_taps(plane.height, out_h);
    const auto col_taps = box_taps(plane.width, out_w);

    FloatPlane out(out_h, out_w);
#pragma omp parallel for schedule(static)
    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            double acc = 0.0, wsum = 0.0;
            for (const Tap& ty : row_taps[oy]) {
                const double* row = &plane.values[static_cast<std::size_t>(ty.index) *
                                                  plane.width];
                for (const Tap& tx : col_taps[ox]) {
                    const double w = ty.weight * tx.weight;
                    acc += w * row[tx.index];
                    wsum += w;
                }
            }
            out.at(oy, ox) = acc / wsum;
        }
    }
    return out;
}

FloatPlane pad_center_white(const FloatPlane& plane, int canvas_h, int canvas_w) {
    if (plane.height > canvas_h || plane.width > canvas_w)
        throw ContentLargerThanCanvas("pad_center_white: content exceeds canvas");
    FloatPlane out(canvas_h, canvas_w, 255.0);
    const int top = (canvas_h - plane.height) / 2;
    const int left = (canvas_w - plane.width) / 2;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < plane.height; ++y) {
        for (int x = 0; x < plane.width; ++x) {
            out.at(top + y, left + x) = plane.at(y, x);
        }
    }
    return out;
}

std::uint8_t quantize_sample(double v) {
    long r = std::lround(v);
    if (r < 0) r = 0;
    if (r > 255) r = 255;
    return static_cast<std::uint8_t>(r);
}

RasterImage quantize(const FloatPlane& plane) {
    RasterImage img;
    img.width = plane.width;
    img.height = plane.height;
    img.channels = 1;
    img.data.resize(plane.values.size());
    for (std::size_t i = 0; i < plane.values.size(); ++i)
        img.data[i] = quantize_sample(plane.values[i]);
    return img;
}

FloatPlane channel_plane(const RasterImage& img, int channel) {
    if (channel < 0 || channel >= img.channels)
        throw Error("channel_plane: channel out of range");
    FloatPlane out(img.height, img.width);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = img.data[i * img.channels + channel];
    return out;
}

RasterImage merge_channels(const std::vector<FloatPlane>& planes) {
    if (planes.size() != 1 && planes.size() != 3)
        throw Error("merge_channels: expected 1 or 3 planes");
    const int h = planes[0].height, w = planes[0].width;
    for (const auto& p : planes)
        if (p.height != h || p.width != w)
            throw Error("merge_channels: plane dimensions differ");
    RasterImage img;
    img.width = w;
    img.height = h;
    img.channels = static_cast<int>(planes.size());
    img.data.resize(static_cast<std::size_t>(w) * h * planes.size());
    const std::size_t n = static_cast<std::size_t>(w) * h;
    for (std::size_t c = 0; c < planes.size(); ++c)
        for (std::size_t i = 0; i < n; ++i)
            img.data[i * planes.size() + c] = quantize_sample(planes[c].values[i]);
    return img;
}

} // namespace illu
