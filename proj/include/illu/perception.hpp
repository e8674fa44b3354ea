#pragma once

#include <vector>

#include "illu/image.hpp"

namespace illu {

/// One perception strength: spectral cutoff fraction and rescale factor,
/// both in (0, 1).
struct PerceptionParams {
    double lambda = 0;
    double s = 0;

    bool operator==(const PerceptionParams&) const = default;
};

/// Ordered list of K perception strengths, strongest first, interpolated
/// geometrically between the boundary pairs. derived[0] == strong and
/// derived[k-1] == weak exactly.
struct SmspSchedule {
    int k = 0;
    PerceptionParams strong;
    PerceptionParams weak;
    std::vector<PerceptionParams> derived;
};

/// The K+1 input tuple: index 0 is the untouched original, indices 1..K the
/// perception-adjusted variants ordered strong to weak.
struct SmspInput {
    std::vector<RasterImage> images;
};

/// The perception transform: ideal spectral low-pass at cutoff
/// min(H,W)*lambda, inverse transform magnitude, box downscale to
/// (floor(H*s), floor(W*s)), white center padding back to the input size.
/// RGB inputs are processed per channel. Output dims equal input dims.
RasterImage perceive(const RasterImage& img, const PerceptionParams& params);

/// Pre-quantization single-plane path of perceive; `filter` / `rescale`
/// select which of the two stages run (both on = the full transform).
FloatPlane perceive_plane(const FloatPlane& plane, const PerceptionParams& params,
                          bool filter = true, bool rescale = true);

/// Geometric interpolation between boundary strengths:
/// lambda_i = lambda_1 * (lambda_K/lambda_1)^((i-1)/(K-1)), same form for s.
/// Throws KTooSmall (k < 2) or NonMonotoneBoundaries.
SmspSchedule build_schedule(int k, const PerceptionParams& strong,
                            const PerceptionParams& weak);

/// Assembles the K+1 tuple: the original followed by one variant per
/// schedule entry, strong to weak.
SmspInput build_smsp_input(const RasterImage& img, const SmspSchedule& schedule);

struct AblationMode {
    enum Kind { NoFilter, NoRescale, SingleVariant };
    Kind kind = NoFilter;
    int variant = 0; // 1-based, SingleVariant only

    static AblationMode no_filter() { return {NoFilter, 0}; }
    static AblationMode no_rescale() { return {NoRescale, 0}; }
    static AblationMode single_variant(int i) { return {SingleVariant, i}; }
};

/// Ablation variants of the tuple: skip the filtering stage, skip the
/// rescaling stage, or keep only [original, variant_i].
SmspInput ablate(const RasterImage& img, const AblationMode& mode,
                 const SmspSchedule& schedule);

/// "Filtered" baseline: `passes` successive Gaussian blurs followed by an
/// unsharp mask of the given amount. Blur kernels are truncated at radius
/// ceil(3*sigma) and renormalized; borders replicate.
struct FilteredConfig {
    double sigma = 2.0;
    int passes = 3;
    double amount = 1.0;
};
RasterImage baseline_filtered(const RasterImage& img, const FilteredConfig& cfg);

/// "Blur with Histogram" baseline: one Gaussian blur, then global histogram
/// equalization of the luminance plane (chroma untouched for RGB). The
/// equalization map is floor(cdf(v) * 255).
struct BlurHistConfig {
    double sigma = 2.0;
};
RasterImage baseline_blur_histogram(const RasterImage& img, const BlurHistConfig& cfg);

} // namespace illu
