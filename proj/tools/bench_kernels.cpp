// Times the OpenMP kernels against their serial counterparts: the FFT path
// at one vs all threads, the direct-sum DFT reference, texture synthesis,
// and the full perception transform.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "illu/noise.hpp"
#include "illu/perception.hpp"
#include "illu/spectral.hpp"
#include "illu/util.hpp"

using namespace illu;

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e30;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

FloatPlane random_plane(int h, int w, std::uint64_t seed) {
    FloatPlane p(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            p.at(y, x) = 255.0 * uniform01(hash_combine(seed, y, x));
    return p;
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace

int main() {
    const int nthreads = max_threads();
    std::printf("threads available: %d\n\n", nthreads);
    std::printf("%-34s %12s %12s %8s\n", "kernel", "serial ms", "parallel ms",
                "speedup");

    auto row = [&](const char* name, const std::function<void()>& fn) {
        set_threads(1);
        const double serial = time_ms(fn);
        set_threads(nthreads);
        const double parallel = time_ms(fn);
        std::printf("%-34s %12.2f %12.2f %7.2fx\n", name, serial, parallel,
                    serial / parallel);
    };

    {
        const FloatPlane p = random_plane(64, 64, 1);
        row("dft2d direct reference 64x64",
            [&] { (void)reference::dft2d_centered_direct(p); });
    }
    {
        const FloatPlane p = random_plane(64, 64, 1);
        row("fft2d 64x64", [&] { (void)fft2d_centered(p); });
    }
    for (int n : {256, 512, 1000}) {
        const FloatPlane p = random_plane(n, n, 2);
        char name[64];
        std::snprintf(name, sizeof name, "fft2d %dx%d", n, n);
        row(name, [&] { (void)fft2d_centered(p); });
    }
    {
        const auto [p_c, p_b] = default_texture_pair(TextureKind::GN);
        row("texture gn 1000x1000",
            [&] { (void)generate_texture(p_b, 1000, 1000, 7); });
    }
    {
        const auto [p_c, p_b] = default_texture_pair(TextureKind::LN);
        row("texture ln 1000x1000",
            [&] { (void)generate_texture(p_b, 1000, 1000, 7); });
    }
    {
        RasterImage img = quantize(random_plane(512, 512, 3));
        row("perceive 512x512 (0.012, 0.1)",
            [&] { (void)perceive(img, {0.012, 0.1}); });
    }
    return 0;
}
