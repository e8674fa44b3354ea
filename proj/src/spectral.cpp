#include "illu/spectral.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "illu/errors.hpp"

namespace illu {

namespace {

using cplx = std::complex<double>;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
    int m = 1;
    while (m < n) m <<= 1;
    return m;
}

// Forward radix-2 FFT, in place, unnormalized. n must be a power of two.
void fft_pow2(cplx* x, int n, const std::vector<cplx>& tw) {
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < len / 2; ++k) {
                const cplx w = tw[static_cast<std::size_t>(k) * step];
                const cplx u = x[i + k];
                const cplx t = w * x[i + k + len / 2];
                x[i + k] = u + t;
                x[i + k + len / 2] = u - t;
            }
        }
    }
}

// Per-length precomputed data. Cached per thread so concurrent transforms
// never share mutable state.
struct Plan {
    int n = 0;
    int m = 0;                  // pow2 conv length for Bluestein (0 if n is pow2)
    std::vector<cplx> tw;       // twiddles for the pow2 core, size core/2
    std::vector<cplx> chirp;    // exp(-i*pi*k^2/n), size n
    std::vector<cplx> bfft;     // FFT of the chirp kernel, size m
};

const Plan& get_plan(int n) {
    thread_local std::map<int, Plan> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Plan p;
    p.n = n;
    const int core = is_pow2(n) ? n : next_pow2(2 * n - 1);
    p.m = is_pow2(n) ? 0 : core;
    p.tw.resize(core / 2);
    for (int k = 0; k < core / 2; ++k)
        p.tw[k] = std::polar(1.0, -2.0 * M_PI * k / core);
    if (p.m) {
        p.chirp.resize(n);
        for (int k = 0; k < n; ++k) {
            // k^2 mod 2n keeps the phase argument small
            const long long q = (static_cast<long long>(k) * k) % (2LL * n);
            p.chirp[k] = std::polar(1.0, -M_PI * static_cast<double>(q) / n);
        }
        std::vector<cplx> b(p.m, cplx{0, 0});
        b[0] = std::conj(p.chirp[0]);
        for (int k = 1; k < n; ++k) {
            b[k] = std::conj(p.chirp[k]);
            b[p.m - k] = std::conj(p.chirp[k]);
        }
        fft_pow2(b.data(), p.m, p.tw);
        p.bfft = std::move(b);
    }
    return cache.emplace(n, std::move(p)).first->second;
}

// Forward unnormalized DFT of length n (any n), in place.
void dft_forward(cplx* x, int n, std::vector<cplx>& scratch) {
    const Plan& p = get_plan(n);
    if (!p.m) {
        fft_pow2(x, n, p.tw);
        return;
    }
    scratch.assign(p.m, cplx{0, 0});
    for (int k = 0; k < n; ++k) scratch[k] = x[k] * p.chirp[k];
    fft_pow2(scratch.data(), p.m, p.tw);
    for (int k = 0; k < p.m; ++k) scratch[k] *= p.bfft[k];
    // inverse conv FFT via conjugation
    for (auto& v : scratch) v = std::conj(v);
    fft_pow2(scratch.data(), p.m, p.tw);
    const double inv_m = 1.0 / p.m;
    for (int k = 0; k < n; ++k) x[k] = std::conj(scratch[k]) * inv_m * p.chirp[k];
}

// Inverse DFT with 1/n normalization, in place.
void dft_inverse(cplx* x, int n, std::vector<cplx>& scratch) {
    for (int k = 0; k < n; ++k) x[k] = std::conj(x[k]);
    dft_forward(x, n, scratch);
    const double inv_n = 1.0 / n;
    for (int k = 0; k < n; ++k) x[k] = std::conj(x[k]) * inv_n;
}

void transform_rows(std::vector<cplx>& a, int h, int w, bool inverse) {
#pragma omp parallel
    {
        std::vector<cplx> scratch;
#pragma omp for schedule(static)
        for (int y = 0; y < h; ++y) {
            cplx* row = a.data() + static_cast<std::size_t>(y) * w;
            if (inverse)
                dft_inverse(row, w, scratch);
            else
                dft_forward(row, w, scratch);
        }
    }
}

void transform_cols(std::vector<cplx>& a, int h, int w, bool inverse) {
#pragma omp parallel
    {
        std::vector<cplx> col(h), scratch;
#pragma omp for schedule(static)
        for (int x = 0; x < w; ++x) {
            for (int y = 0; y < h; ++y) col[y] = a[static_cast<std::size_t>(y) * w + x];
            if (inverse)
                dft_inverse(col.data(), h, scratch);
            else
                dft_forward(col.data(), h, scratch);
            for (int y = 0; y < h; ++y) a[static_cast<std::size_t>(y) * w + x] = col[y];
        }
    }
}

std::vector<cplx> shift2d(const std::vector<cplx>& a, int h, int w, bool inverse) {
    std::vector<cplx> out(a.size());
    const int sy = h / 2, sx = w / 2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (inverse)
                out[static_cast<std::size_t>(y) * w + x] =
                    a[static_cast<std::size_t>((y + sy) % h) * w + (x + sx) % w];
            else
                out[static_cast<std::size_t>((y + sy) % h) * w + (x + sx) % w] =
                    a[static_cast<std::size_t>(y) * w + x];
        }
    }
    return out;
}

} // namespace

Spectrum fft2d_centered(const FloatPlane& plane) {
    if (plane.height < 1 || plane.width < 1)
        throw Error("fft2d_centered: empty plane");
    const int h = plane.height, w = plane.width;
    std::vector<cplx> a(plane.values.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = cplx{plane.values[i], 0.0};
    transform_rows(a, h, w, false);
    transform_cols(a, h, w, false);
    Spectrum spec;
    spec.width = w;
    spec.height = h;
    spec.coeffs = shift2d(a, h, w, false);
    return spec;
}

FloatPlane ifft2d_magnitude(const Spectrum& spec) {
    const int h = spec.height, w = spec.width;
    if (h < 1 || w < 1) throw Error("ifft2d_magnitude: empty spectrum");
    std::vector<cplx> a = shift2d(spec.coeffs, h, w, true);
    transform_rows(a, h, w, true);
    transform_cols(a, h, w, true);
    FloatPlane out(h, w);
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = std::abs(a[i]);
    return out;
}

double EnergyCurve::total() const {
    return std::accumulate(energies.begin(), energies.end(), 0.0);
}

int energy_curve_rmax(int height, int width) {
    const double hy = height / 2.0, hx = width / 2.0;
    return static_cast<int>(std::ceil(std::sqrt(hy * hy + hx * hx)));
}

EnergyCurve energy_curve(const Spectrum& spec) {
    const int h = spec.height, w = spec.width;
    const int cy = h / 2, cx = w / 2;
    EnergyCurve curve;
    curve.energies.assign(energy_curve_rmax(h, w) + 1, 0.0);
    for (int u = 0; u < h; ++u) {
        for (int v = 0; v < w; ++v) {
            const double du = u - cy, dv = v - cx;
            const int r = static_cast<int>(std::floor(std::sqrt(du * du + dv * dv)));
            curve.energies[r] += std::norm(spec.at(u, v));
        }
    }
    return curve;
}

BandReport band_report(const EnergyCurve& curve, int height, int width) {
    const double f = std::min(height, width) / 1000.0;
    const int low_hi = static_cast<int>(std::floor(100.0 * f));
    const int mid_lo = static_cast<int>(std::floor(300.0 * f));
    const int mid_hi = static_cast<int>(std::floor(400.0 * f));
    const int high_lo = static_cast<int>(std::floor(500.0 * f));

    BandReport rep;
    for (int r = 0; r < static_cast<int>(curve.energies.size()); ++r) {
        const double e = curve.energies[r];
        rep.total += e;
        if (r <= low_hi) rep.low += e;
        if (r >= mid_lo && r <= mid_hi) rep.mid += e;
        if (r >= high_lo) rep.high += e;
    }
    if (rep.total > 0) {
        rep.low_share = rep.low / rep.total;
        rep.mid_share = rep.mid / rep.total;
        rep.high_share = rep.high / rep.total;
    }
    return rep;
}

Spectrum low_pass(const Spectrum& spec, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw InvalidLambda("low_pass: lambda must be in (0,1)");
    const int h = spec.height, w = spec.width;
    const int cy = h / 2, cx = w / 2;
    const double cutoff = std::min(h, w) * lambda;
    const double cutoff2 = cutoff * cutoff;
    Spectrum out = spec;
#pragma omp parallel for schedule(static)
    for (int u = 0; u < h; ++u) {
        for (int v = 0; v < w; ++v) {
            const double du = u - cy, dv = v - cx;
            if (du * du + dv * dv > cutoff2) out.at(u, v) = cplx{0, 0};
        }
    }
    return out;
}

std::string energy_curve_csv(const EnergyCurve& curve) {
    std::string out = "r,energy\n";
    char buf[64];
    for (std::size_t r = 0; r < curve.energies.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", r, curve.energies[r]);
        out += buf;
    }
    return out;
}

std::string band_report_csv_header() {
    return "low,mid,high,low_share,mid_share,high_share";
}

std::string band_report_csv_row(const BandReport& rep) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", rep.low,
                  rep.mid, rep.high, rep.low_share, rep.mid_share, rep.high_share);
    return buf;
}

namespace reference {

Spectrum dft2d_centered_direct(const FloatPlane& plane) {
    const int h = plane.height, w = plane.width;
    std::vector<cplx> a(static_cast<std::size_t>(h) * w);
    for (int u = 0; u < h; ++u) {
        for (int v = 0; v < w; ++v) {
            cplx acc{0, 0};
            for (int x = 0; x < h; ++x) {
                for (int y = 0; y < w; ++y) {
                    const double ang = -2.0 * M_PI *
                                       (static_cast<double>(u) * x / h +
                                        static_cast<double>(v) * y / w);
                    acc += plane.at(x, y) * cplx{std::cos(ang), std::sin(ang)};
                }
            }
            a[static_cast<std::size_t>(u) * w + v] = acc;
        }
    }
    Spectrum spec;
    spec.width = w;
    spec.height = h;
    spec.coeffs = shift2d(a, h, w, false);
    return spec;
}

FloatPlane idft2d_magnitude_direct(const Spectrum& spec) {
    const int h = spec.height, w = spec.width;
    std::vector<cplx> a = shift2d(spec.coeffs, h, w, true);
    FloatPlane out(h, w);
    for (int x = 0; x < h; ++x) {
        for (int y = 0; y < w; ++y) {
            cplx acc{0, 0};
            for (int u = 0; u < h; ++u) {
                for (int v = 0; v < w; ++v) {
                    const double ang = 2.0 * M_PI *
                                       (static_cast<double>(u) * x / h +
                                        static_cast<double>(v) * y / w);
                    acc += a[static_cast<std::size_t>(u) * w + v] *
                           cplx{std::cos(ang), std::sin(ang)};
                }
            }
            out.at(x, y) = std::abs(acc) / (static_cast<double>(h) * w);
        }
    }
    return out;
}

} // namespace reference

} // namespace illu
