#include "illu/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "illu/errors.hpp"
#include "illu/util.hpp"

namespace fs = std::filesystem;

namespace illu {

void to_json(nlohmann::json& j, const SampleRecord& r) {
    j = nlohmann::json{{"id", r.id},
                       {"truth", r.truth},
                       {"hidden_type", r.hidden_type},
                       {"background", r.background},
                       {"scale", r.scale},
                       {"seed", r.seed},
                       {"gen_params", r.gen_params},
                       {"image_path", r.image_path}};
}

void from_json(const nlohmann::json& j, SampleRecord& r) {
    j.at("id").get_to(r.id);
    j.at("truth").get_to(r.truth);
    j.at("hidden_type").get_to(r.hidden_type);
    j.at("background").get_to(r.background);
    j.at("scale").get_to(r.scale);
    j.at("seed").get_to(r.seed);
    r.gen_params = j.value("gen_params", nlohmann::json::object());
    j.at("image_path").get_to(r.image_path);
}

nlohmann::json texture_params_json(const TextureParams& p) {
    nlohmann::json j;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, VgParams>) {
                j = {{"kind", "vg"}, {"stripe_width", v.stripe_width}};
            } else if constexpr (std::is_same_v<T, GnParams>) {
                j = {{"kind", "gn"}, {"base_gray", v.base_gray}, {"sigma", v.sigma}};
            } else if constexpr (std::is_same_v<T, HdParams>) {
                j = {{"kind", "hd"},
                     {"radius", v.radius},
                     {"cell", v.cell},
                     {"jitter", v.jitter}};
            } else if constexpr (std::is_same_v<T, LnParams>) {
                j = {{"kind", "ln"}, {"smooth_radius", v.smooth_radius}};
            } else {
                j = {{"kind", "mn"},
                     {"symbols", v.symbols},
                     {"glyph_px", v.glyph_px},
                     {"cell", v.cell}};
            }
        },
        p);
    return j;
}

TextureParams texture_params_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    switch (texture_from_name(kind)) {
        case TextureKind::VG: {
            VgParams p;
            p.stripe_width = j.at("stripe_width").get<int>();
            return p;
        }
        case TextureKind::GN: {
            GnParams p;
            p.base_gray = j.at("base_gray").get<double>();
            p.sigma = j.at("sigma").get<double>();
            return p;
        }
        case TextureKind::HD: {
            HdParams p;
            p.radius = j.at("radius").get<double>();
            p.cell = j.at("cell").get<int>();
            p.jitter = j.at("jitter").get<double>();
            return p;
        }
        case TextureKind::LN: {
            LnParams p;
            p.smooth_radius = j.at("smooth_radius").get<int>();
            return p;
        }
        default: {
            MnParams p;
            p.symbols = j.at("symbols").get<std::vector<std::string>>();
            p.glyph_px = j.at("glyph_px").get<int>();
            p.cell = j.at("cell").get<int>();
            return p;
        }
    }
}

std::vector<SampleRecord> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open manifest: " + path);
    std::vector<SampleRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(nlohmann::json::parse(line).get<SampleRecord>());
        } catch (const nlohmann::json::exception& e) {
            throw Error("manifest " + path + " line " + std::to_string(lineno) + ": " +
                        e.what());
        }
    }
    return records;
}

void write_manifest(const std::string& path, const std::vector<SampleRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write manifest: " + path);
    for (const SampleRecord& r : records)
        out << nlohmann::json(r).dump() << '\n';
}

std::vector<std::string> load_charset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open charset file: " + path);
    std::vector<std::string> entries;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        entries.push_back(line);
    }
    return entries;
}

namespace {

struct SampleTask {
    const CharsetSpec* charset;
    std::size_t entry_index;
    ScaleClass scale;
};

std::string entry_id(const CharsetSpec& cs, std::size_t index, ScaleClass scale) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%03zu", index);
    return cs.hidden_type + buf + "-" + scale_name(scale);
}

} // namespace

BuildResult build_dataset(const DatasetSpec& spec, const std::string& out_dir) {
    if (spec.charsets.empty()) throw Error("build_dataset: no charsets configured");
    for (const auto& cs : spec.charsets)
        if (cs.entries.empty())
            throw Error("build_dataset: empty charset " + cs.hidden_type);

    Font font = Font::load(spec.font_path);

    fs::create_directories(fs::path(out_dir) / "images");

    std::vector<SampleTask> tasks;
    for (const auto& cs : spec.charsets)
        for (std::size_t i = 0; i < cs.entries.size(); ++i)
            for (ScaleClass sc : spec.scales) tasks.push_back({&cs, i, sc});

    const int per_task = 1 + static_cast<int>(spec.backgrounds.size());
    std::vector<SampleRecord> records(tasks.size() * per_task);
    std::vector<int> fidelity_flags(tasks.size() * per_task, 0);
    std::string first_error;

#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        try {
            const SampleTask& task = tasks[t];
            const std::string& truth = task.charset->entries[task.entry_index];
            const std::string base =
                entry_id(*task.charset, task.entry_index, task.scale);

            auto [original, layout] =
                render_characters(truth, spec.canvas, spec.canvas, font, task.scale);
            const std::string scale = scale_name(classify_scale(layout));

            SampleRecord origin_rec;
            origin_rec.id = base + "-origin";
            origin_rec.truth = truth;
            origin_rec.hidden_type = task.charset->hidden_type;
            origin_rec.background = "origin";
            origin_rec.scale = scale;
            origin_rec.seed = hash_string(spec.seed, origin_rec.id);
            origin_rec.image_path = "images/" + origin_rec.id + ".png";
            write_png((fs::path(out_dir) / origin_rec.image_path).string(), original);
            records[t * per_task] = origin_rec;

            const CharMask mask = mask_from_original(original);
            for (std::size_t b = 0; b < spec.backgrounds.size(); ++b) {
                const TextureKind kind = spec.backgrounds[b];
                auto pair_it = spec.texture_pairs.find(kind);
                const auto [p_c, p_b] = pair_it != spec.texture_pairs.end()
                                            ? pair_it->second
                                            : default_texture_pair(kind);
                SampleRecord rec;
                rec.id = base + "-" + texture_name(kind);
                rec.truth = truth;
                rec.hidden_type = task.charset->hidden_type;
                rec.background = texture_name(kind);
                rec.scale = scale;
                rec.seed = hash_string(spec.seed, rec.id);
                rec.gen_params = {{"p_c", texture_params_json(p_c)},
                                  {"p_b", texture_params_json(p_b)}};
                rec.image_path = "images/" + rec.id + ".png";

                RasterImage illusion = compose_illusion(mask, p_c, p_b, rec.seed, &font);
                write_png((fs::path(out_dir) / rec.image_path).string(), illusion);

                if (kind == TextureKind::VG || kind == TextureKind::HD ||
                    kind == TextureKind::MN) {
                    const FloatPlane pure =
                        generate_texture(p_b, spec.canvas, spec.canvas, rec.seed, &font);
                    if (region_fidelity(illusion, pure, mask, 16) < 0.95)
                        fidelity_flags[t * per_task + 1 + b] = 1;
                }
                records[t * per_task + 1 + b] = rec;
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) first_error = e.what();
        }
    }

    if (!first_error.empty()) {
        // remove partial outputs before reporting the failure
        std::error_code ec;
        fs::remove_all(fs::path(out_dir) / "images", ec);
        throw Error("build_dataset: " + first_error);
    }

    BuildResult result;
    result.records = std::move(records);

    if (spec.semantic) {
        auto imported =
            import_semantic(spec.semantic->images_dir, spec.semantic->truths_file);
        result.records.insert(result.records.end(), imported.begin(), imported.end());
    }

    result.manifest_path = (fs::path(out_dir) / "manifest.jsonl").string();
    write_manifest(result.manifest_path, result.records);
    for (const SampleRecord& r : result.records)
        ++result.counts[{r.scale, r.background}];
    for (int f : fidelity_flags) result.fidelity_failures += f;
    return result;
}

std::vector<SampleRecord> import_semantic(const std::string& images_dir,
                                          const std::string& truths_file) {
    std::ifstream in(truths_file);
    if (!in) throw Error("cannot open truths file: " + truths_file);

    struct Truth {
        std::string truth, hidden_type, scale;
    };
    std::map<std::string, Truth> truths;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            Truth t;
            t.truth = j.at("truth").get<std::string>();
            t.hidden_type = j.value("hidden_type", "pattern");
            t.scale = j.value("scale", "unclassified");
            truths[j.at("image").get<std::string>()] = t;
        } catch (const nlohmann::json::exception& e) {
            throw Error("truths file line " + std::to_string(lineno) + ": " + e.what());
        }
    }

    std::vector<std::string> images;
    for (const auto& entry : fs::directory_iterator(images_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            images.push_back(entry.path().filename().string());
    }
    std::sort(images.begin(), images.end());

    std::vector<SampleRecord> records;
    for (const std::string& name : images) {
        auto it = truths.find(name);
        if (it == truths.end())
            throw MissingTruth("no truth entry for image: " + name);
        const std::string full = (fs::path(images_dir) / name).string();
        RasterImage img = read_png(full); // validates readability
        (void)img;
        SampleRecord rec;
        rec.id = "semantic-" + fs::path(name).stem().string();
        rec.truth = it->second.truth;
        rec.hidden_type = it->second.hidden_type;
        rec.background = "semantic_import";
        rec.scale = it->second.scale;
        rec.seed = 0;
        rec.image_path = full;
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace illu
