#include "illu/perception.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "illu/errors.hpp"
#include "illu/spectral.hpp"

namespace illu {

FloatPlane perceive_plane(const FloatPlane& plane, const PerceptionParams& params,
                          bool filter, bool rescale) {
    if (!(params.lambda > 0.0 && params.lambda < 1.0))
        throw InvalidLambda("perceive: lambda must be in (0,1)");
    if (!(params.s > 0.0 && params.s < 1.0))
        throw Error("perceive: s must be in (0,1)");

    FloatPlane work = plane;
    if (filter) {
        Spectrum spec = fft2d_centered(work);
        spec = low_pass(spec, params.lambda);
        work = ifft2d_magnitude(spec);
    }
    if (rescale) {
        const int oh = static_cast<int>(std::floor(plane.height * params.s));
        const int ow = static_cast<int>(std::floor(plane.width * params.s));
        if (oh < 1 || ow < 1)
            throw ZeroDimension("perceive: rescale factor collapses a dimension");
        work = resize(work, oh, ow);
        work = pad_center_white(work, plane.height, plane.width);
    }
    return work;
}

RasterImage perceive(const RasterImage& img, const PerceptionParams& params) {
    if (!img.valid()) throw Error("perceive: invalid image");
    std::vector<FloatPlane> planes;
    planes.reserve(img.channels);
    for (int c = 0; c < img.channels; ++c)
        planes.push_back(perceive_plane(channel_plane(img, c), params));
    return merge_channels(planes);
}

SmspSchedule build_schedule(int k, const PerceptionParams& strong,
                            const PerceptionParams& weak) {
    if (k < 2) throw KTooSmall("build_schedule: need k >= 2");
    if (!(strong.lambda < weak.lambda) || !(strong.s < weak.s))
        throw NonMonotoneBoundaries(
            "build_schedule: boundary parameters must strictly increase");

    SmspSchedule sched;
    sched.k = k;
    sched.strong = strong;
    sched.weak = weak;
    sched.derived.resize(k);
    sched.derived.front() = strong;
    sched.derived.back() = weak;
    const double lr = weak.lambda / strong.lambda;
    const double sr = weak.s / strong.s;
    for (int i = 2; i <= k - 1; ++i) {
        const double t = static_cast<double>(i - 1) / (k - 1);
        sched.derived[i - 1] = {strong.lambda * std::pow(lr, t),
                                strong.s * std::pow(sr, t)};
    }
    return sched;
}

SmspInput build_smsp_input(const RasterImage& img, const SmspSchedule& schedule) {
    SmspInput out;
    out.images.reserve(schedule.k + 1);
    out.images.push_back(img);
    for (const PerceptionParams& p : schedule.derived)
        out.images.push_back(perceive(img, p));
    return out;
}

namespace {

RasterImage perceive_partial(const RasterImage& img, const PerceptionParams& params,
                             bool filter, bool rescale) {
    std::vector<FloatPlane> planes;
    planes.reserve(img.channels);
    for (int c = 0; c < img.channels; ++c)
        planes.push_back(perceive_plane(channel_plane(img, c), params, filter, rescale));
    return merge_channels(planes);
}

} // namespace

SmspInput ablate(const RasterImage& img, const AblationMode& mode,
                 const SmspSchedule& schedule) {
    SmspInput out;
    switch (mode.kind) {
        case AblationMode::SingleVariant: {
            if (mode.variant < 1 || mode.variant > schedule.k)
                throw IndexOutOfRange("ablate: variant index out of range");
            out.images.push_back(img);
            out.images.push_back(perceive(img, schedule.derived[mode.variant - 1]));
            break;
        }
        case AblationMode::NoFilter:
        case AblationMode::NoRescale: {
            const bool filter = mode.kind != AblationMode::NoFilter;
            out.images.push_back(img);
            for (const PerceptionParams& p : schedule.derived)
                out.images.push_back(perceive_partial(img, p, filter, !filter));
            break;
        }
    }
    return out;
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable convolution with replicated borders.
FloatPlane gaussian_blur(const FloatPlane& in, double sigma) {
    const auto kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size()) / 2;
    const int h = in.height, w = in.width;

    FloatPlane tmp(h, w);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int i = -radius; i <= radius; ++i) {
                const int xi = std::clamp(x + i, 0, w - 1);
                acc += kernel[i + radius] * in.at(y, xi);
            }
            tmp.at(y, x) = acc;
        }
    }
    FloatPlane out(h, w);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int i = -radius; i <= radius; ++i) {
                const int yi = std::clamp(y + i, 0, h - 1);
                acc += kernel[i + radius] * tmp.at(yi, x);
            }
            out.at(y, x) = acc;
        }
    }
    return out;
}

} // namespace

RasterImage baseline_filtered(const RasterImage& img, const FilteredConfig& cfg) {
    if (!img.valid()) throw Error("baseline_filtered: invalid image");
    std::vector<FloatPlane> planes;
    for (int c = 0; c < img.channels; ++c) {
        FloatPlane p = channel_plane(img, c);
        for (int i = 0; i < cfg.passes; ++i) p = gaussian_blur(p, cfg.sigma);
        if (cfg.amount != 0.0) {
            FloatPlane soft = gaussian_blur(p, cfg.sigma);
            for (std::size_t i = 0; i < p.values.size(); ++i)
                p.values[i] += cfg.amount * (p.values[i] - soft.values[i]);
        }
        planes.push_back(std::move(p));
    }
    return merge_channels(planes);
}

namespace {

// floor(cdf(v) * 255) lookup over an 8-bit histogram
std::array<std::uint8_t, 256> equalization_map(const std::array<std::uint64_t, 256>& hist) {
    std::uint64_t total = 0;
    for (auto c : hist) total += c;
    std::array<std::uint8_t, 256> lut{};
    std::uint64_t cum = 0;
    for (int v = 0; v < 256; ++v) {
        cum += hist[v];
        lut[v] = static_cast<std::uint8_t>(
            std::floor(255.0 * static_cast<double>(cum) / static_cast<double>(total)));
    }
    return lut;
}

} // namespace

RasterImage baseline_blur_histogram(const RasterImage& img, const BlurHistConfig& cfg) {
    if (!img.valid()) throw Error("baseline_blur_histogram: invalid image");

    std::vector<FloatPlane> blurred;
    for (int c = 0; c < img.channels; ++c) {
        FloatPlane p = channel_plane(img, c);
        if (cfg.sigma > 0) p = gaussian_blur(p, cfg.sigma);
        blurred.push_back(std::move(p));
    }

    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    if (img.channels == 1) {
        std::array<std::uint64_t, 256> hist{};
        std::vector<std::uint8_t> q(n);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = quantize_sample(blurred[0].values[i]);
            ++hist[q[i]];
        }
        const auto lut = equalization_map(hist);
        RasterImage out;
        out.width = img.width;
        out.height = img.height;
        out.channels = 1;
        out.data.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.data[i] = lut[q[i]];
        return out;
    }

    // RGB: equalize luminance in YCbCr, leave chroma untouched
    std::array<std::uint64_t, 256> hist{};
    std::vector<std::uint8_t> yq(n);
    std::vector<double> cb(n), cr(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = blurred[0].values[i];
        const double g = blurred[1].values[i];
        const double b = blurred[2].values[i];
        const double y = 0.299 * r + 0.587 * g + 0.114 * b;
        cb[i] = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
        cr[i] = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
        yq[i] = quantize_sample(y);
        ++hist[yq[i]];
    }
    const auto lut = equalization_map(hist);
    RasterImage out;
    out.width = img.width;
    out.height = img.height;
    out.channels = 3;
    out.data.resize(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = lut[yq[i]];
        const double r = y + 1.402 * (cr[i] - 128.0);
        const double g = y - 0.344136 * (cb[i] - 128.0) - 0.714136 * (cr[i] - 128.0);
        const double b = y + 1.772 * (cb[i] - 128.0);
        out.data[i * 3] = quantize_sample(r);
        out.data[i * 3 + 1] = quantize_sample(g);
        out.data[i * 3 + 2] = quantize_sample(b);
    }
    return out;
}

} // namespace illu
