#pragma once

#include <complex>
#include <string>
#include <vector>

#include "illu/image.hpp"

namespace illu {

/// Centered complex frequency plane. DC sits at (height/2, width/2)
/// (floor division). Coefficients are row-major: coeffs[u * width + v].
struct Spectrum {
    int width = 0;
    int height = 0;
    std::vector<std::complex<double>> coeffs;

    std::complex<double> at(int u, int v) const {
        return coeffs[static_cast<std::size_t>(u) * width + v];
    }
    std::complex<double>& at(int u, int v) {
        return coeffs[static_cast<std::size_t>(u) * width + v];
    }
};

/// Radial spectral energy: energies[r] is the total |F|^2 over the annulus
/// sqrt(u^2+v^2) in [r, r+1) measured from the spectrum center.
struct EnergyCurve {
    std::vector<double> energies;

    double total() const;
};

/// Low/mid/high band aggregation. Thresholds are 100 / 300..400 / 500 at the
/// 1000x1000 reference resolution and scale with min(H, W)/1000.
struct BandReport {
    double low = 0;
    double mid = 0;
    double high = 0;
    double total = 0;
    double low_share = 0;
    double mid_share = 0;
    double high_share = 0;
};

/// Unnormalized forward 2-D DFT, then centered so DC sits at
/// (height/2, width/2). Arbitrary (non-power-of-two) dimensions supported.
Spectrum fft2d_centered(const FloatPlane& plane);

/// Un-centers, inverse-transforms with 1/(H*W) normalization, and takes the
/// element-wise complex magnitude.
FloatPlane ifft2d_magnitude(const Spectrum& spec);

/// Assigns every coefficient to exactly one integer annulus about the center.
/// Curve length is r_max + 1 with r_max = ceil(sqrt((H/2)^2 + (W/2)^2)).
EnergyCurve energy_curve(const Spectrum& spec);

int energy_curve_rmax(int height, int width);

BandReport band_report(const EnergyCurve& curve, int height, int width);

/// Ideal low-pass: keeps coefficients within center distance
/// min(H, W) * lambda exactly and zeroes the rest. Idempotent.
/// Throws InvalidLambda unless 0 < lambda < 1.
Spectrum low_pass(const Spectrum& spec, double lambda);

// CSV export for plotting: one "r,energy" row per radius, and a single
// "low,mid,high,low_share,mid_share,high_share" row.
std::string energy_curve_csv(const EnergyCurve& curve);
std::string band_report_csv_header();
std::string band_report_csv_row(const BandReport& report);

namespace reference {

/// Direct O(N^4) evaluation of the forward DFT sum, then centered. Serial;
/// kept as the independent oracle for the FFT path and for benchmarks.
Spectrum dft2d_centered_direct(const FloatPlane& plane);

/// Direct inverse counterpart of dft2d_centered_direct.
FloatPlane idft2d_magnitude_direct(const Spectrum& spec);

} // namespace reference

} // namespace illu
