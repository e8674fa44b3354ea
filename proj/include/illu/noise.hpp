#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "illu/font.hpp"
#include "illu/image.hpp"

namespace illu {

enum class TextureKind { VG, GN, HD, LN, MN };

const char* texture_name(TextureKind k);
TextureKind texture_from_name(const std::string& name);

/// Vertical gratings: black-and-white stripes in runs of stripe_width columns.
struct VgParams {
    int stripe_width = 8;
    bool operator==(const VgParams&) const = default;
};

/// Gaussian noise around a base gray level.
struct GnParams {
    double base_gray = 120.0;
    double sigma = 30.0;
    bool operator==(const GnParams&) const = default;
};

/// Halftone dots on a jittered grid; the two regions differ by dot radius.
struct HdParams {
    double radius = 3.0;
    int cell = 14;
    double jitter = 3.0;
    bool operator==(const HdParams&) const = default;
};

/// Labyrinth noise: box-smoothed white noise thresholded to binary; the two
/// regions differ by smoothing radius.
struct LnParams {
    int smooth_radius = 4;
    bool operator==(const LnParams&) const = default;
};

/// Micro-text noise: small symbols on a jittered grid; the two regions use
/// different symbol sets.
struct MnParams {
    std::vector<std::string> symbols = {"$", "%", "#"};
    int glyph_px = 12;
    int cell = 16;
    bool operator==(const MnParams&) const = default;
};

using TextureParams = std::variant<VgParams, GnParams, HdParams, LnParams, MnParams>;

TextureKind kind_of(const TextureParams& params);

/// Character/background parameter pair (p_c, p_b) the dataset uses by
/// default for a texture kind.
std::pair<TextureParams, TextureParams> default_texture_pair(TextureKind kind);

/// Deterministic texture synthesis: output is a pure function of
/// (params, dims, seed), independent of thread count. MN requires a font.
/// Values lie in [0, 255].
FloatPlane generate_texture(const TextureParams& params, int h, int w,
                            std::uint64_t seed, const Font* font = nullptr);

/// Binary character-region mask.
struct CharMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> inside; // 1 = character region

    bool at(int y, int x) const {
        return inside[static_cast<std::size_t>(y) * width + x] != 0;
    }
};

/// Thresholds a rendered original (black glyphs on white) at 128.
CharMask mask_from_original(const RasterImage& original);

/// Per-pixel region composition: character pixels from the p_c texture,
/// the rest from the p_b texture. Both textures share the seed so the seam
/// is parameter-driven, not phase-driven.
RasterImage compose_illusion(const CharMask& mask, const TextureParams& p_c,
                             const TextureParams& p_b, std::uint64_t seed,
                             const Font* font = nullptr);

/// Appendix-style bounding-box scale classes, defined at 1000x1000 and
/// scaled linearly with min(canvas).
ScaleClass classify_scale(const GlyphLayout& layout);

/// Fraction of mask pixels with a visible character/background contrast:
/// a mask pixel counts as recovered when some pixel within `window` differs
/// between the illusion and the pure background texture. Textures are sparse
/// (stripes, dots, glyphs), so contrast is evaluated over a neighborhood
/// rather than pointwise.
double region_fidelity(const RasterImage& illusion, const FloatPlane& pure_bg,
                       const CharMask& mask, int window);

} // namespace illu
