#pragma once

#include <memory>
#include <string>
#include <utility>

#include "illu/image.hpp"

namespace illu {

/// Minimal TrueType loader and rasterizer. Supports the sfnt tables needed
/// to shape and fill single-line strings: cmap (formats 4/6/12), glyf/loca
/// (simple and composite outlines), head, maxp, hhea, hmtx.
///
/// Rasterization is anti-aliased via 4x4 supersampled scanline fill with the
/// non-zero winding rule.
class Font {
public:
    static Font load(const std::string& path);

    bool has_glyph(char32_t cp) const;

    /// Anti-aliased ink coverage of the laid-out string at the given em size
    /// in pixels, cropped to the tight ink box. 0 = no ink, 255 = full ink.
    /// Returns an empty plane when the text carries no ink (e.g. spaces).
    /// Throws MissingGlyph when a code point has no glyph.
    FloatPlane rasterize_line(const std::u32string& text, double pixel_size) const;

    /// Cheap ink-box estimate (width, height in pixels) from glyph headers,
    /// used to seed the size search in render_characters.
    std::pair<double, double> measure_line(const std::u32string& text,
                                           double pixel_size) const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
};

/// Renders black glyphs centered on a white canvas, choosing the glyph size
/// so the tight ink box lands in the requested scale class (thresholds are
/// defined at 1000x1000 and scale linearly with min(canvas)).
/// Throws MissingGlyph or UnreachableScale.
std::pair<RasterImage, GlyphLayout> render_characters(const std::string& text,
                                                      int canvas_h, int canvas_w,
                                                      const Font& font,
                                                      ScaleClass target);

} // namespace illu
