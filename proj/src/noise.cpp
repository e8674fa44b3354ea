#include "illu/noise.hpp"

#include <algorithm>
#include <cmath>

#include "illu/errors.hpp"
#include "illu/util.hpp"

namespace illu {

const char* texture_name(TextureKind k) {
    switch (k) {
        case TextureKind::VG: return "vg";
        case TextureKind::GN: return "gn";
        case TextureKind::HD: return "hd";
        case TextureKind::LN: return "ln";
        default: return "mn";
    }
}

TextureKind texture_from_name(const std::string& name) {
    if (name == "vg") return TextureKind::VG;
    if (name == "gn") return TextureKind::GN;
    if (name == "hd") return TextureKind::HD;
    if (name == "ln") return TextureKind::LN;
    if (name == "mn") return TextureKind::MN;
    throw InvalidParams("unknown texture kind: " + name);
}

TextureKind kind_of(const TextureParams& params) {
    return static_cast<TextureKind>(params.index());
}

std::pair<TextureParams, TextureParams> default_texture_pair(TextureKind kind) {
    switch (kind) {
        case TextureKind::VG: return {VgParams{12}, VgParams{8}};
        case TextureKind::GN: return {GnParams{140.0, 30.0}, GnParams{120.0, 30.0}};
        case TextureKind::HD: return {HdParams{5.0, 14, 3.0}, HdParams{3.0, 14, 3.0}};
        case TextureKind::LN: return {LnParams{7}, LnParams{4}};
        default:
            return {MnParams{{"@", "&"}, 12, 16}, MnParams{{"$", "%", "#"}, 12, 16}};
    }
}

namespace {

FloatPlane gen_vg(const VgParams& p, int h, int w) {
    if (p.stripe_width < 1) throw InvalidParams("vg: stripe width < 1");
    FloatPlane out(h, w);
    for (int x = 0; x < w; ++x) {
        const double v = (x / p.stripe_width) % 2 == 0 ? 0.0 : 255.0;
        for (int y = 0; y < h; ++y) out.at(y, x) = v;
    }
    return out;
}

FloatPlane gen_gn(const GnParams& p, int h, int w, std::uint64_t seed) {
    if (p.sigma < 0) throw InvalidParams("gn: sigma < 0");
    FloatPlane out(h, w);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double z = gaussian(hash_combine(seed, y, x, 0),
                                      hash_combine(seed, y, x, 1));
            out.at(y, x) = std::clamp(p.base_gray + p.sigma * z, 0.0, 255.0);
        }
    }
    return out;
}

FloatPlane gen_hd(const HdParams& p, int h, int w, std::uint64_t seed) {
    if (p.cell < 2 || p.radius <= 0) throw InvalidParams("hd: invalid grid");
    FloatPlane out(h, w, 255.0);
    const double r2 = p.radius * p.radius;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int cy = y / p.cell, cx = x / p.cell;
            // dots from neighboring cells can spill into this pixel
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int gy = cy + dy, gx = cx + dx;
                    const double jx =
                        (uniform01(hash_combine(seed, gy, gx, 2)) * 2 - 1) * p.jitter;
                    const double jy =
                        (uniform01(hash_combine(seed, gy, gx, 3)) * 2 - 1) * p.jitter;
                    const double centre_x = (gx + 0.5) * p.cell + jx;
                    const double centre_y = (gy + 0.5) * p.cell + jy;
                    const double ddx = x - centre_x, ddy = y - centre_y;
                    if (ddx * ddx + ddy * ddy <= r2) {
                        out.at(y, x) = 0.0;
                        dy = dx = 2; // done with this pixel
                    }
                }
            }
        }
    }
    return out;
}

FloatPlane gen_ln(const LnParams& p, int h, int w, std::uint64_t seed) {
    if (p.smooth_radius < 1) throw InvalidParams("ln: smoothing radius < 1");
    // shared white-noise field
    std::vector<double> noise(static_cast<std::size_t>(h) * w);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            noise[static_cast<std::size_t>(y) * w + x] =
                uniform01(hash_combine(seed, y, x, 4));

    // box smoothing via a summed-area table, edge-clipped window
    std::vector<double> sat(static_cast<std::size_t>(h + 1) * (w + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        double rowsum = 0;
        for (int x = 0; x < w; ++x) {
            rowsum += noise[static_cast<std::size_t>(y) * w + x];
            sat[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] =
                sat[static_cast<std::size_t>(y) * (w + 1) + x + 1] + rowsum;
        }
    }
    auto window_mean = [&](int y, int x, int r) {
        const int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
        const int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
        const double sum = sat[static_cast<std::size_t>(y1 + 1) * (w + 1) + x1 + 1] -
                           sat[static_cast<std::size_t>(y0) * (w + 1) + x1 + 1] -
                           sat[static_cast<std::size_t>(y1 + 1) * (w + 1) + x0] +
                           sat[static_cast<std::size_t>(y0) * (w + 1) + x0];
        return sum / ((y1 - y0 + 1) * (x1 - x0 + 1));
    };

    FloatPlane out(h, w);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(y, x) = window_mean(y, x, p.smooth_radius) >= 0.5 ? 255.0 : 0.0;
    return out;
}

FloatPlane gen_mn(const MnParams& p, int h, int w, std::uint64_t seed, const Font* font) {
    if (!font) throw InvalidParams("mn: font required");
    if (p.symbols.empty() || p.glyph_px < 4 || p.cell < 2)
        throw InvalidParams("mn: invalid parameters");

    // pre-rasterize the symbol set once
    std::vector<FloatPlane> stamps;
    for (const std::string& s : p.symbols) {
        std::u32string cps;
        for (char32_t cp : utf8_decode(s)) cps += cp;
        stamps.push_back(font->rasterize_line(cps, p.glyph_px));
    }

    FloatPlane out(h, w, 255.0);
    const int cells_y = (h + p.cell - 1) / p.cell;
    const int cells_x = (w + p.cell - 1) / p.cell;
    for (int gy = 0; gy < cells_y; ++gy) {
        for (int gx = 0; gx < cells_x; ++gx) {
            // symbol choice and placement share the per-site hash stream
            const std::size_t pick =
                hash_combine(seed, gy, gx, 5) % stamps.size();
            const FloatPlane& st = stamps[pick];
            if (st.values.empty()) continue;
            const double jx = uniform01(hash_combine(seed, gy, gx, 6));
            const double jy = uniform01(hash_combine(seed, gy, gx, 7));
            const int ox = gx * p.cell + static_cast<int>(jx * std::max(1, p.cell - st.width));
            const int oy = gy * p.cell + static_cast<int>(jy * std::max(1, p.cell - st.height));
            for (int y = 0; y < st.height; ++y) {
                const int ty = oy + y;
                if (ty < 0 || ty >= h) continue;
                for (int x = 0; x < st.width; ++x) {
                    const int tx = ox + x;
                    if (tx < 0 || tx >= w) continue;
                    out.at(ty, tx) = std::min(out.at(ty, tx), 255.0 - st.at(y, x));
                }
            }
        }
    }
    return out;
}

} // namespace

FloatPlane generate_texture(const TextureParams& params, int h, int w,
                            std::uint64_t seed, const Font* font) {
    if (h < 1 || w < 1) throw InvalidParams("texture: empty dimensions");
    return std::visit(
        [&](const auto& p) -> FloatPlane {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, VgParams>) return gen_vg(p, h, w);
            else if constexpr (std::is_same_v<T, GnParams>) return gen_gn(p, h, w, seed);
            else if constexpr (std::is_same_v<T, HdParams>) return gen_hd(p, h, w, seed);
            else if constexpr (std::is_same_v<T, LnParams>) return gen_ln(p, h, w, seed);
            else return gen_mn(p, h, w, seed, font);
        },
        params);
}

CharMask mask_from_original(const RasterImage& original) {
    FloatPlane gray = to_gray(original);
    CharMask mask;
    mask.width = gray.width;
    mask.height = gray.height;
    mask.inside.resize(gray.values.size());
    for (std::size_t i = 0; i < gray.values.size(); ++i)
        mask.inside[i] = gray.values[i] < 128.0 ? 1 : 0;
    return mask;
}

RasterImage compose_illusion(const CharMask& mask, const TextureParams& p_c,
                             const TextureParams& p_b, std::uint64_t seed,
                             const Font* font) {
    if (mask.width < 1 || mask.height < 1)
        throw MaskMismatch("compose_illusion: empty mask");
    if (p_c.index() != p_b.index())
        throw InvalidParams("compose_illusion: region parameters use different kinds");
    if (p_c == p_b)
        throw IdenticalParams("compose_illusion: p_c == p_b leaves no illusion");

    const FloatPlane tc = generate_texture(p_c, mask.height, mask.width, seed, font);
    const FloatPlane tb = generate_texture(p_b, mask.height, mask.width, seed, font);

    FloatPlane out(mask.height, mask.width);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            out.at(y, x) = mask.at(y, x) ? tc.at(y, x) : tb.at(y, x);
    return quantize(out);
}

ScaleClass classify_scale(const GlyphLayout& layout) {
    const double f =
        layout.canvas_w > 0 && layout.canvas_h > 0
            ? std::min(layout.canvas_h, layout.canvas_w) / 1000.0
            : 1.0;
    const double maxdim = std::max(layout.bbox_h, layout.bbox_w);
    if (maxdim >= 600.0 * f) return ScaleClass::Large;
    if (maxdim >= 200.0 * f && maxdim <= 500.0 * f) return ScaleClass::Medium;
    if (maxdim <= 150.0 * f) return ScaleClass::Small;
    return ScaleClass::Unclassified;
}

double region_fidelity(const RasterImage& illusion, const FloatPlane& pure_bg,
                       const CharMask& mask, int window) {
    if (illusion.width != mask.width || illusion.height != mask.height ||
        pure_bg.width != mask.width || pure_bg.height != mask.height)
        throw MaskMismatch("region_fidelity: dimension mismatch");

    FloatPlane gray = to_gray(illusion);
    const int h = mask.height, w = mask.width;
    std::vector<std::uint8_t> differs(static_cast<std::size_t>(h) * w);
    for (std::size_t i = 0; i < differs.size(); ++i)
        differs[i] =
            std::abs(gray.values[i] - pure_bg.values[i]) > 1.0 ? 1 : 0;

    std::size_t mask_px = 0, recovered = 0;
#pragma omp parallel for schedule(static) reduction(+ : mask_px, recovered)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(y, x)) continue;
            ++mask_px;
            bool hit = false;
            for (int dy = -window; dy <= window && !hit; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                for (int dx = -window; dx <= window; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= w) continue;
                    if (differs[static_cast<std::size_t>(yy) * w + xx] &&
                        mask.at(yy, xx)) {
                        hit = true;
                        break;
                    }
                }
            }
            if (hit) ++recovered;
        }
    }
    return mask_px ? static_cast<double>(recovered) / mask_px : 1.0;
}

} // namespace illu
