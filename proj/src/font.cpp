#include "illu/font.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "illu/errors.hpp"
#include "illu/util.hpp"

namespace illu {

namespace {

struct Reader {
    const std::vector<std::uint8_t>& b;
    std::size_t off = 0;

    void require(std::size_t n) const {
        if (off + n > b.size()) throw Error("font: truncated table");
    }
    std::uint8_t u8() {
        require(1);
        return b[off++];
    }
    std::uint16_t u16() {
        require(2);
        std::uint16_t v = static_cast<std::uint16_t>(b[off] << 8 | b[off + 1]);
        off += 2;
        return v;
    }
    std::uint32_t u32() {
        require(4);
        std::uint32_t v = static_cast<std::uint32_t>(b[off]) << 24 |
                          static_cast<std::uint32_t>(b[off + 1]) << 16 |
                          static_cast<std::uint32_t>(b[off + 2]) << 8 |
                          static_cast<std::uint32_t>(b[off + 3]);
        off += 4;
        return v;
    }
    std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
    std::int8_t i8() { return static_cast<std::int8_t>(u8()); }
    void skip(std::size_t n) {
        require(n);
        off += n;
    }
};

struct Pt {
    double x = 0, y = 0;
};

// Quadratic segment in font units; when `line`, the control point is unused.
struct Seg {
    Pt p0, c, p1;
    bool line = false;
};

constexpr int kSupersample = 4;

} // namespace

struct Font::Impl {
    std::vector<std::uint8_t> bytes;
    double upem = 1000;
    bool long_loca = false;
    std::uint16_t num_glyphs = 0;
    std::uint16_t num_h_metrics = 0;
    std::size_t loca_off = 0, glyf_off = 0, glyf_len = 0, hmtx_off = 0;
    std::size_t cmap_sub = 0;
    int cmap_fmt = 0;

    std::uint32_t glyph_index(char32_t cp) const;
    double advance(std::uint32_t gid) const;
    std::pair<std::size_t, std::size_t> glyph_span(std::uint32_t gid) const;
    void append_outline(std::uint32_t gid, double a, double b, double c, double d,
                        double dx, double dy, std::vector<Seg>& out, int depth) const;
};

namespace {

std::size_t find_table(const std::vector<std::uint8_t>& bytes, const char tag[4],
                       std::size_t& len_out) {
    Reader r{bytes};
    std::uint32_t ver = r.u32();
    if (ver != 0x00010000 && ver != 0x74727565) // 'true'
        throw Error("font: not a TrueType file");
    std::uint16_t num_tables = r.u16();
    r.skip(6);
    for (int i = 0; i < num_tables; ++i) {
        r.require(16);
        bool match = std::memcmp(&bytes[r.off], tag, 4) == 0;
        r.skip(8);
        std::uint32_t off = r.u32();
        std::uint32_t len = r.u32();
        if (match) {
            if (off + static_cast<std::size_t>(len) > bytes.size())
                throw Error("font: table out of range");
            len_out = len;
            return off;
        }
    }
    len_out = 0;
    return 0;
}

} // namespace

Font Font::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("font: cannot open " + path);
    auto impl = std::make_shared<Impl>();
    impl->bytes.assign(std::istreambuf_iterator<char>(in), {});
    const auto& bytes = impl->bytes;
    if (bytes.size() < 12) throw Error("font: file too small: " + path);

    std::size_t len = 0;
    std::size_t head = find_table(bytes, "head", len);
    if (!head || len < 54) throw Error("font: missing head table");
    {
        Reader r{bytes, head + 18};
        impl->upem = r.u16();
        r = Reader{bytes, head + 50};
        impl->long_loca = r.i16() != 0;
    }
    std::size_t maxp = find_table(bytes, "maxp", len);
    if (!maxp) throw Error("font: missing maxp table");
    {
        Reader r{bytes, maxp + 4};
        impl->num_glyphs = r.u16();
    }
    std::size_t hhea = find_table(bytes, "hhea", len);
    if (!hhea || len < 36) throw Error("font: missing hhea table");
    {
        Reader r{bytes, hhea + 34};
        impl->num_h_metrics = r.u16();
    }
    impl->hmtx_off = find_table(bytes, "hmtx", len);
    if (!impl->hmtx_off) throw Error("font: missing hmtx table");
    impl->loca_off = find_table(bytes, "loca", len);
    impl->glyf_off = find_table(bytes, "glyf", impl->glyf_len);
    if (!impl->loca_off || !impl->glyf_off)
        throw Error("font: missing glyf outlines (CFF fonts unsupported)");

    std::size_t cmap = find_table(bytes, "cmap", len);
    if (!cmap) throw Error("font: missing cmap table");
    {
        Reader r{bytes, cmap + 2};
        std::uint16_t n = r.u16();
        std::size_t best = 0;
        int best_rank = -1;
        for (int i = 0; i < n; ++i) {
            std::uint16_t plat = r.u16();
            std::uint16_t enc = r.u16();
            std::uint32_t sub = r.u32();
            int rank = -1;
            if (plat == 3 && enc == 10) rank = 3;      // UCS-4
            else if (plat == 0 && enc >= 4) rank = 3;
            else if (plat == 3 && enc == 1) rank = 2;  // BMP
            else if (plat == 0) rank = 1;
            if (rank > best_rank) {
                best_rank = rank;
                best = cmap + sub;
            }
        }
        if (best_rank < 0) throw Error("font: no unicode cmap subtable");
        Reader f{bytes, best};
        impl->cmap_fmt = f.u16();
        impl->cmap_sub = best;
        if (impl->cmap_fmt != 4 && impl->cmap_fmt != 6 && impl->cmap_fmt != 12)
            throw Error("font: unsupported cmap format");
    }

    Font font;
    font.impl_ = std::move(impl);
    return font;
}

std::uint32_t Font::Impl::glyph_index(char32_t cp) const {
    Reader r{bytes, cmap_sub};
    if (cmap_fmt == 4) {
        if (cp > 0xFFFF) return 0;
        r.skip(6);
        std::uint16_t seg_x2 = r.u16();
        const int segs = seg_x2 / 2;
        const std::size_t ends = cmap_sub + 14;
        const std::size_t starts = ends + seg_x2 + 2;
        const std::size_t deltas = starts + seg_x2;
        const std::size_t ranges = deltas + seg_x2;
        auto rd16 = [&](std::size_t at) {
            Reader rr{bytes, at};
            return rr.u16();
        };
        int lo = 0, hi = segs - 1, seg = -1;
        while (lo <= hi) {
            int mid = (lo + hi) / 2;
            if (rd16(ends + 2 * mid) >= cp) {
                seg = mid;
                hi = mid - 1;
            } else {
                lo = mid + 1;
            }
        }
        if (seg < 0) return 0;
        std::uint16_t start = rd16(starts + 2 * seg);
        if (cp < start) return 0;
        std::uint16_t delta = rd16(deltas + 2 * seg);
        std::uint16_t range_off = rd16(ranges + 2 * seg);
        if (range_off == 0) return (cp + delta) & 0xFFFF;
        std::size_t addr = ranges + 2 * seg + range_off + 2 * (cp - start);
        std::uint16_t gid = rd16(addr);
        if (gid == 0) return 0;
        return (gid + delta) & 0xFFFF;
    }
    if (cmap_fmt == 6) {
        r.skip(6);
        std::uint16_t first = r.u16();
        std::uint16_t count = r.u16();
        if (cp < first || cp >= static_cast<char32_t>(first + count)) return 0;
        Reader rr{bytes, cmap_sub + 10 + 2 * (cp - first)};
        return rr.u16();
    }
    // format 12
    r.skip(12);
    std::uint32_t groups = r.u32();
    std::size_t base = cmap_sub + 16;
    std::uint32_t lo = 0, hi = groups;
    while (lo < hi) {
        std::uint32_t mid = (lo + hi) / 2;
        Reader g{bytes, base + 12 * mid};
        std::uint32_t start = g.u32();
        std::uint32_t end = g.u32();
        std::uint32_t sgid = g.u32();
        if (cp < start) {
            hi = mid;
        } else if (cp > end) {
            lo = mid + 1;
        } else {
            return sgid + (cp - start);
        }
    }
    return 0;
}

double Font::Impl::advance(std::uint32_t gid) const {
    std::uint32_t idx = std::min<std::uint32_t>(gid, num_h_metrics ? num_h_metrics - 1 : 0);
    Reader r{bytes, hmtx_off + 4 * static_cast<std::size_t>(idx)};
    return r.u16();
}

std::pair<std::size_t, std::size_t> Font::Impl::glyph_span(std::uint32_t gid) const {
    if (gid >= num_glyphs) return {0, 0};
    std::size_t a, b;
    if (long_loca) {
        Reader r{bytes, loca_off + 4 * static_cast<std::size_t>(gid)};
        a = r.u32();
        b = r.u32();
    } else {
        Reader r{bytes, loca_off + 2 * static_cast<std::size_t>(gid)};
        a = 2 * static_cast<std::size_t>(r.u16());
        b = 2 * static_cast<std::size_t>(r.u16());
    }
    if (b < a || b > glyf_len) return {0, 0};
    return {a, b};
}

void Font::Impl::append_outline(std::uint32_t gid, double a, double b, double c,
                                double d, double dx, double dy, std::vector<Seg>& out,
                                int depth) const {
    if (depth > 5) return;
    auto [ga, gb] = glyph_span(gid);
    if (gb <= ga) return; // empty glyph (e.g. space)
    Reader r{bytes, glyf_off + ga};
    int ncont = r.i16();
    r.skip(8); // bbox

    auto xf = [&](double x, double y) {
        return Pt{a * x + c * y + dx, b * x + d * y + dy};
    };

    if (ncont >= 0) {
        std::vector<std::uint16_t> ends(ncont);
        for (int i = 0; i < ncont; ++i) ends[i] = r.u16();
        const int npts = ncont ? ends.back() + 1 : 0;
        std::uint16_t ins = r.u16();
        r.skip(ins);

        std::vector<std::uint8_t> flags;
        flags.reserve(npts);
        while (static_cast<int>(flags.size()) < npts) {
            std::uint8_t f = r.u8();
            flags.push_back(f);
            if (f & 0x08) { // REPEAT
                std::uint8_t n = r.u8();
                for (int i = 0; i < n; ++i) flags.push_back(f);
            }
        }
        std::vector<double> xs(npts), ys(npts);
        double v = 0;
        for (int i = 0; i < npts; ++i) {
            std::uint8_t f = flags[i];
            if (f & 0x02) {
                std::uint8_t dv = r.u8();
                v += (f & 0x10) ? dv : -static_cast<double>(dv);
            } else if (!(f & 0x10)) {
                v += r.i16();
            }
            xs[i] = v;
        }
        v = 0;
        for (int i = 0; i < npts; ++i) {
            std::uint8_t f = flags[i];
            if (f & 0x04) {
                std::uint8_t dv = r.u8();
                v += (f & 0x20) ? dv : -static_cast<double>(dv);
            } else if (!(f & 0x20)) {
                v += r.i16();
            }
            ys[i] = v;
        }

        int start = 0;
        for (int ci = 0; ci < ncont; ++ci) {
            const int end = ends[ci];
            const int n = end - start + 1;
            if (n < 2) {
                start = end + 1;
                continue;
            }
            // Expand implied on-curve midpoints between consecutive off points.
            std::vector<Pt> p;
            std::vector<bool> on;
            for (int i = 0; i < n; ++i) {
                Pt cur{xs[start + i], ys[start + i]};
                bool cur_on = flags[start + i] & 0x01;
                if (!p.empty() && !on.back() && !cur_on) {
                    p.push_back({(p.back().x + cur.x) / 2, (p.back().y + cur.y) / 2});
                    on.push_back(true);
                }
                p.push_back(cur);
                on.push_back(cur_on);
            }
            if (!on.front() && !on.back()) {
                p.push_back({(p.back().x + p.front().x) / 2,
                             (p.back().y + p.front().y) / 2});
                on.push_back(true);
            }
            if (!on.front()) {
                // rotate so the walk starts on-curve
                std::rotate(p.begin(), p.end() - 1, p.end());
                std::vector<bool> on2(on.size());
                on2[0] = on.back();
                std::copy(on.begin(), on.end() - 1, on2.begin() + 1);
                on = std::move(on2);
            }
            const std::size_t m = p.size();
            std::size_t i = 1;
            Pt prev = p[0];
            while (i <= m) {
                const Pt cur = p[i % m];
                const bool cur_on = on[i % m];
                if (cur_on) {
                    out.push_back({xf(prev.x, prev.y), {}, xf(cur.x, cur.y), true});
                    prev = cur;
                    ++i;
                } else {
                    const Pt nxt = p[(i + 1) % m];
                    out.push_back(
                        {xf(prev.x, prev.y), xf(cur.x, cur.y), xf(nxt.x, nxt.y), false});
                    prev = nxt;
                    i += 2;
                }
            }
            start = end + 1;
        }
    } else {
        // composite glyph
        while (true) {
            std::uint16_t flags = r.u16();
            std::uint16_t cgid = r.u16();
            double arg1, arg2;
            if (flags & 0x0001) {
                arg1 = r.i16();
                arg2 = r.i16();
            } else {
                arg1 = r.i8();
                arg2 = r.i8();
            }
            double ca = 1, cb = 0, cc = 0, cd = 1;
            auto f2dot14 = [&] { return r.i16() / 16384.0; };
            if (flags & 0x0008) {
                ca = cd = f2dot14();
            } else if (flags & 0x0040) {
                ca = f2dot14();
                cd = f2dot14();
            } else if (flags & 0x0080) {
                ca = f2dot14();
                cb = f2dot14();
                cc = f2dot14();
                cd = f2dot14();
            }
            double cdx = 0, cdy = 0;
            if (flags & 0x0002) { // ARGS_ARE_XY_VALUES
                cdx = arg1;
                cdy = arg2;
            }
            // compose child transform with ours
            append_outline(cgid, a * ca + c * cb, b * ca + d * cb, a * cc + c * cd,
                           b * cc + d * cd, a * cdx + c * cdy + dx,
                           b * cdx + d * cdy + dy, out, depth + 1);
            if (!(flags & 0x0020)) break; // MORE_COMPONENTS
        }
    }
}

bool Font::has_glyph(char32_t cp) const {
    return impl_->glyph_index(cp) != 0;
}

namespace {

std::vector<Seg> shape_line(const Font::Impl& f, const std::u32string& text) {
    std::vector<Seg> segs;
    double pen = 0;
    for (char32_t cp : text) {
        std::uint32_t gid = f.glyph_index(cp);
        if (gid == 0)
            throw MissingGlyph("font has no glyph for U+" +
                               [](char32_t c) {
                                   char buf[16];
                                   std::snprintf(buf, sizeof buf, "%04X",
                                                 static_cast<unsigned>(c));
                                   return std::string(buf);
                               }(cp));
        f.append_outline(gid, 1, 0, 0, 1, pen, 0, segs, 0);
        pen += f.advance(gid);
    }
    return segs;
}

struct DevEdge {
    double x0, y0, x1, y1;
};

// Flattens segments into edges in device space; y grows downward.
void flatten(const std::vector<Seg>& segs, double scale, double ox, double oy,
             std::vector<DevEdge>& edges) {
    auto dev = [&](const Pt& p) {
        return Pt{p.x * scale + ox, oy - p.y * scale};
    };
    for (const Seg& s : segs) {
        Pt a = dev(s.p0), b2 = dev(s.p1);
        if (s.line) {
            if (a.y != b2.y) edges.push_back({a.x, a.y, b2.x, b2.y});
            continue;
        }
        Pt c = dev(s.c);
        const double devx = a.x - 2 * c.x + b2.x;
        const double devy = a.y - 2 * c.y + b2.y;
        const double dev2 = devx * devx + devy * devy;
        int n = 1;
        if (dev2 > 0) {
            // segment count so the chord deviation stays under ~0.1 device px
            n = static_cast<int>(std::ceil(std::sqrt(std::sqrt(dev2) / 0.4)));
            n = std::clamp(n, 1, 64);
        }
        Pt prev = a;
        for (int i = 1; i <= n; ++i) {
            const double t = static_cast<double>(i) / n;
            const double u = 1 - t;
            Pt pt{u * u * a.x + 2 * u * t * c.x + t * t * b2.x,
                  u * u * a.y + 2 * u * t * c.y + t * t * b2.y};
            if (prev.y != pt.y) edges.push_back({prev.x, prev.y, pt.x, pt.y});
            prev = pt;
        }
    }
}

} // namespace

FloatPlane Font::rasterize_line(const std::u32string& text, double pixel_size) const {
    const Impl& f = *impl_;
    std::vector<Seg> segs = shape_line(f, text);
    if (segs.empty()) return {};

    double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
    for (const Seg& s : segs) {
        xmin = std::min({xmin, s.p0.x, s.p1.x});
        xmax = std::max({xmax, s.p0.x, s.p1.x});
        ymin = std::min({ymin, s.p0.y, s.p1.y});
        ymax = std::max({ymax, s.p0.y, s.p1.y});
        if (!s.line) {
            xmin = std::min(xmin, s.c.x);
            xmax = std::max(xmax, s.c.x);
            ymin = std::min(ymin, s.c.y);
            ymax = std::max(ymax, s.c.y);
        }
    }
    const double scale = pixel_size / f.upem;
    const int ss = kSupersample;
    const int wpx = std::max(1, static_cast<int>(std::ceil((xmax - xmin) * scale)) + 2);
    const int hpx = std::max(1, static_cast<int>(std::ceil((ymax - ymin) * scale)) + 2);

    std::vector<DevEdge> edges;
    flatten(segs, scale * ss, (1.0 - xmin * scale) * ss, (1.0 + ymax * scale) * ss,
            edges);

    const int wss = wpx * ss;
    std::vector<std::uint16_t> cov(static_cast<std::size_t>(wpx) * hpx, 0);

#pragma omp parallel
    {
        std::vector<std::pair<double, int>> xs;
#pragma omp for schedule(static)
        for (int row = 0; row < hpx; ++row) {
            for (int sy = 0; sy < ss; ++sy) {
                const double y = row * ss + sy + 0.5;
                xs.clear();
                for (const DevEdge& e : edges) {
                    const double lo = std::min(e.y0, e.y1);
                    const double hi = std::max(e.y0, e.y1);
                    if (!(lo <= y && y < hi)) continue;
                    const double t = (y - e.y0) / (e.y1 - e.y0);
                    xs.emplace_back(e.x0 + t * (e.x1 - e.x0), e.y1 > e.y0 ? 1 : -1);
                }
                std::sort(xs.begin(), xs.end());
                int wind = 0;
                double span_start = 0;
                for (const auto& [x, dir] : xs) {
                    if (wind == 0) span_start = x;
                    wind += dir;
                    if (wind == 0) {
                        int ix0 = std::max(0, static_cast<int>(std::ceil(span_start - 0.5)));
                        int ix1 = std::min(wss - 1, static_cast<int>(std::floor(x - 0.5)));
                        for (int ix = ix0; ix <= ix1; ++ix)
                            ++cov[static_cast<std::size_t>(row) * wpx + ix / ss];
                    }
                }
            }
        }
    }

    FloatPlane ink(hpx, wpx);
    const double norm = 255.0 / (ss * ss);
    for (std::size_t i = 0; i < ink.values.size(); ++i) ink.values[i] = cov[i] * norm;

    // crop to tight ink box
    int top = hpx, bottom = -1, left = wpx, right = -1;
    for (int y = 0; y < hpx; ++y)
        for (int x = 0; x < wpx; ++x)
            if (ink.at(y, x) > 0) {
                top = std::min(top, y);
                bottom = std::max(bottom, y);
                left = std::min(left, x);
                right = std::max(right, x);
            }
    if (bottom < 0) return {};
    FloatPlane out(bottom - top + 1, right - left + 1);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) out.at(y, x) = ink.at(top + y, left + x);
    return out;
}

std::pair<double, double> Font::measure_line(const std::u32string& text,
                                             double pixel_size) const {
    const Impl& f = *impl_;
    std::vector<Seg> segs = shape_line(f, text);
    if (segs.empty()) return {0, 0};
    double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
    for (const Seg& s : segs) {
        for (const Pt* p : {&s.p0, &s.p1}) {
            xmin = std::min(xmin, p->x);
            xmax = std::max(xmax, p->x);
            ymin = std::min(ymin, p->y);
            ymax = std::max(ymax, p->y);
        }
    }
    const double scale = pixel_size / f.upem;
    return {(xmax - xmin) * scale, (ymax - ymin) * scale};
}

namespace {

bool class_satisfied(ScaleClass target, double maxdim, double f) {
    switch (target) {
        case ScaleClass::Large: return maxdim >= 600.0 * f;
        case ScaleClass::Medium: return maxdim >= 200.0 * f && maxdim <= 500.0 * f;
        case ScaleClass::Small: return maxdim <= 150.0 * f && maxdim >= 1.0;
        default: return false;
    }
}

double class_target(ScaleClass target, double f) {
    switch (target) {
        case ScaleClass::Large: return 700.0 * f;
        case ScaleClass::Medium: return 350.0 * f;
        case ScaleClass::Small: return 120.0 * f;
        default: return 0;
    }
}

} // namespace

std::pair<RasterImage, GlyphLayout> render_characters(const std::string& text,
                                                      int canvas_h, int canvas_w,
                                                      const Font& font,
                                                      ScaleClass target) {
    if (text.empty()) throw UnreachableScale("render_characters: empty text");
    if (target == ScaleClass::Unclassified)
        throw UnreachableScale("render_characters: no target class");
    std::u32string cps;
    for (char32_t cp : utf8_decode(text)) cps += cp;

    const double f = std::min(canvas_h, canvas_w) / 1000.0;
    const double goal = class_target(target, f);

    auto [ew, eh] = font.measure_line(cps, 100.0);
    const double est = std::max(ew, eh);
    if (est <= 0) throw UnreachableScale("render_characters: text has no ink");

    double size = 100.0 * goal / est;
    FloatPlane ink;
    double maxdim = 0;
    bool ok = false;
    for (int iter = 0; iter < 8; ++iter) {
        if (size < 3.0) break; // below legibility floor
        ink = font.rasterize_line(cps, size);
        if (ink.values.empty()) throw UnreachableScale("render_characters: text has no ink");
        maxdim = std::max(ink.width, ink.height);
        if (ink.width <= canvas_w && ink.height <= canvas_h &&
            class_satisfied(target, maxdim, f)) {
            ok = true;
            break;
        }
        size *= goal / maxdim;
    }
    if (!ok)
        throw UnreachableScale("render_characters: cannot realize scale class for \"" +
                               text + "\"");

    FloatPlane canvas(canvas_h, canvas_w, 255.0);
    const int top = (canvas_h - ink.height) / 2;
    const int left = (canvas_w - ink.width) / 2;
    for (int y = 0; y < ink.height; ++y)
        for (int x = 0; x < ink.width; ++x)
            canvas.at(top + y, left + x) = 255.0 - ink.at(y, x);

    GlyphLayout layout;
    layout.text = text;
    layout.bbox_w = ink.width;
    layout.bbox_h = ink.height;
    layout.origin_x = left;
    layout.origin_y = top;
    layout.canvas_w = canvas_w;
    layout.canvas_h = canvas_h;
    return {quantize(canvas), layout};
}

} // namespace illu
