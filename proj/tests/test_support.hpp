#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include "illu/font.hpp"
#include "illu/image.hpp"
#include "illu/util.hpp"

namespace testsup {

// Preference order: env override, then the usual system locations.
inline std::string default_font_path() {
    if (const char* env = std::getenv("ILLU_TEST_FONT"); env && *env) return env;
    for (const char* p : {
             "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf",
             "/usr/share/fonts/TTF/DejaVuSans.ttf",
             "/usr/share/fonts/dejavu/DejaVuSans.ttf",
         }) {
        if (std::filesystem::exists(p)) return p;
    }
    return {};
}

inline const illu::Font& default_font() {
    static illu::Font font = illu::Font::load(default_font_path());
    return font;
}

inline illu::FloatPlane random_plane(int h, int w, std::uint64_t seed,
                                     double lo = 0.0, double hi = 255.0) {
    illu::FloatPlane p(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            p.at(y, x) = lo + (hi - lo) * illu::uniform01(illu::hash_combine(seed, y, x));
    return p;
}

inline illu::RasterImage random_image(int h, int w, int channels, std::uint64_t seed) {
    illu::RasterImage img;
    img.width = w;
    img.height = h;
    img.channels = channels;
    img.data.resize(static_cast<std::size_t>(w) * h * channels);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        img.data[i] = static_cast<std::uint8_t>(
            illu::hash_combine(seed, i) & 0xFF);
    return img;
}

// unique scratch directory under the build tree
inline std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("illu_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testsup
