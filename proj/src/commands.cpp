#include "illu/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "illu/errors.hpp"
#include "illu/spectral.hpp"

namespace fs = std::filesystem;

namespace illu {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const UnknownSample*>(&e) ||
        dynamic_cast<const MissingTruth*>(&e) ||
        dynamic_cast<const UnreadableImage*>(&e))
        return 3;
    if (dynamic_cast<const EndpointError*>(&e) || dynamic_cast<const AuthFailed*>(&e) ||
        dynamic_cast<const RateLimited*>(&e) ||
        dynamic_cast<const RequestTimeout*>(&e) ||
        dynamic_cast<const ProtocolError*>(&e) ||
        dynamic_cast<const JudgeUnavailable*>(&e))
        return 4;
    return 1;
}

std::string cmd_generate(const RunConfig& cfg) {
    validate_generate(cfg);
    BuildResult result = build_dataset(cfg.dataset, cfg.dataset_out_dir);

    // counts table, one row per scale, one column per background
    std::set<std::string> backgrounds;
    std::set<std::string> scales;
    for (const auto& [key, n] : result.counts) {
        scales.insert(key.first);
        backgrounds.insert(key.second);
    }
    std::printf("%-14s", "scale");
    for (const auto& b : backgrounds) std::printf("%-18s", b.c_str());
    std::printf("\n");
    for (const auto& s : scales) {
        std::printf("%-14s", s.c_str());
        for (const auto& b : backgrounds) {
            auto it = result.counts.find({s, b});
            std::printf("%-18d", it == result.counts.end() ? 0 : it->second);
        }
        std::printf("\n");
    }
    std::printf("%zu samples -> %s\n", result.records.size(),
                result.manifest_path.c_str());
    if (result.fidelity_failures > 0)
        std::printf("warning: %d illusion(s) under the 95%% region-contrast check\n",
                    result.fidelity_failures);
    return result.manifest_path;
}

namespace {

std::vector<fs::path> collect_pngs(const std::string& input) {
    std::vector<fs::path> files;
    if (fs::is_directory(input)) {
        for (const auto& entry : fs::directory_iterator(input))
            if (entry.is_regular_file() && entry.path().extension() == ".png")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
    } else if (fs::is_regular_file(input)) {
        files.emplace_back(input);
    }
    return files;
}

} // namespace

int cmd_process(const std::string& input, const std::string& method,
                const std::string& out_dir, const RunConfig& cfg) {
    const std::vector<fs::path> files = collect_pngs(input);
    if (files.empty()) throw ConfigError("process: no input images at " + input);
    fs::create_directories(out_dir);

    const SmspSchedule schedule = cfg.schedule.build();
    int written = 0;
    for (const fs::path& file : files) {
        const RasterImage img = read_png(file.string());
        const std::string stem = file.stem().string();
        std::vector<RasterImage> outputs;
        if (method == "filtered" || method == "blur_hist") {
            outputs = method_images(img, method, schedule, cfg.filtered, cfg.blur_hist);
        } else if (method == "smsp" || method.rfind("ablation:", 0) == 0) {
            outputs = method_images(img, method, schedule, cfg.filtered, cfg.blur_hist);
        } else {
            throw ConfigError("process: unknown mode " + method);
        }
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            // multi-image modes write v0 = copy of the original
            const std::size_t index = outputs.size() == 1 ? i + 1 : i;
            const fs::path out = fs::path(out_dir) /
                                 (stem + "_v" + std::to_string(index) + ".png");
            write_png(out.string(), outputs[i]);
            ++written;
        }
    }
    return written;
}

namespace {

BandReport band_report_for_image(const RasterImage& img) {
    const FloatPlane gray = to_gray(img);
    const Spectrum spec = fft2d_centered(gray);
    return band_report(energy_curve(spec), gray.height, gray.width);
}

} // namespace

int cmd_analyze(const std::string& input, const std::string& out_csv,
                const RunConfig& cfg) {
    (void)cfg;
    std::ofstream csv(out_csv, std::ios::trunc);
    if (!csv) throw ConfigError("analyze: cannot write " + out_csv);

    int rows = 0;
    if (fs::is_regular_file(input) && fs::path(input).extension() == ".jsonl") {
        const std::vector<SampleRecord> manifest = read_manifest(input);
        if (manifest.empty()) throw ConfigError("analyze: empty manifest " + input);
        const fs::path root = fs::path(input).parent_path();

        std::map<std::string, BandReport> cache;
        auto report_for = [&](const SampleRecord& r) {
            auto it = cache.find(r.id);
            if (it != cache.end()) return it->second;
            fs::path p(r.image_path);
            if (p.is_relative()) p = root / p;
            BandReport rep = band_report_for_image(read_png(p.string()));
            cache[r.id] = rep;
            return rep;
        };
        // originals indexed by id prefix: "<base>-origin" pairs "<base>-<bg>"
        std::map<std::string, const SampleRecord*> origins;
        for (const SampleRecord& r : manifest) {
            if (r.background == "origin")
                origins[r.id.substr(0, r.id.size() - std::string("-origin").size())] =
                    &r;
        }
        csv << "id,background,scale,midhigh_share,origin_midhigh_share,"
               "exceeds_origin\n";
        for (const SampleRecord& r : manifest) {
            if (r.background == "origin") continue;
            const BandReport rep = report_for(r);
            const double mh = rep.mid_share + rep.high_share;
            const SampleRecord* origin = nullptr;
            const auto dash = r.id.rfind('-');
            if (dash != std::string::npos) {
                auto it = origins.find(r.id.substr(0, dash));
                if (it != origins.end()) origin = it->second;
            }
            csv << r.id << ',' << r.background << ',' << r.scale << ',' << mh << ',';
            if (origin) {
                const BandReport orep = report_for(*origin);
                const double omh = orep.mid_share + orep.high_share;
                csv << omh << ',' << (mh > omh ? 1 : 0) << '\n';
            } else {
                csv << ",\n";
            }
            ++rows;
        }
        return rows;
    }

    const std::vector<fs::path> files = collect_pngs(input);
    if (files.empty()) throw ConfigError("analyze: no input at " + input);
    csv << "path," << band_report_csv_header() << '\n';
    for (const fs::path& file : files) {
        const BandReport rep = band_report_for_image(read_png(file.string()));
        csv << file.string() << ',' << band_report_csv_row(rep) << '\n';
        ++rows;
    }
    return rows;
}

int cmd_bench(const RunConfig& cfg) {
    if (!cfg.endpoint) throw ConfigError("bench: endpoint not configured");
    if (cfg.bench.manifest.empty()) throw ConfigError("bench: manifest not configured");
    const std::vector<SampleRecord> manifest = read_manifest(cfg.bench.manifest);

    BenchOptions options;
    options.method = cfg.bench.method;
    options.records_path = cfg.bench.records;
    options.image_root = fs::path(cfg.bench.manifest).parent_path().string();
    options.schedule = cfg.schedule.build();
    options.filtered = cfg.filtered;
    options.blur_hist = cfg.blur_hist;
    options.stoplist = cfg.stoplist();
    options.judge = cfg.judge;

    const int issued = run_bench(manifest, options, *cfg.endpoint);
    std::printf("%d request(s) issued, records at %s\n", issued,
                cfg.bench.records.c_str());
    return issued;
}

std::string cmd_report(const std::string& records_path, const std::string& manifest_path,
                       const std::string& out_dir) {
    const std::vector<EvalRecord> records = read_records(records_path);
    const std::vector<SampleRecord> manifest = read_manifest(manifest_path);
    const BenchReport report = aggregate(records, manifest);

    fs::create_directories(out_dir);
    {
        std::ofstream js((fs::path(out_dir) / "report.json").string());
        js << report_json(report).dump(2) << '\n';
    }
    const std::string table = report_table(report);
    {
        std::ofstream txt((fs::path(out_dir) / "report.txt").string());
        txt << table;
    }
    std::fputs(table.c_str(), stdout);
    return table;
}

int cmd_judge_only(const std::string& records_path, const std::string& manifest_path,
                   const RunConfig& cfg) {
    if (!cfg.judge) throw ConfigError("judge-only: judge endpoint not configured");
    std::vector<EvalRecord> records = read_records(records_path);
    const std::vector<SampleRecord> manifest = read_manifest(manifest_path);
    std::map<std::string, const SampleRecord*> by_id;
    for (const SampleRecord& s : manifest) by_id[s.id] = &s;

    HttpJudgeClient judge_client(*cfg.judge);
    const Stoplist stoplist = cfg.stoplist();

    int rescored = 0;
    for (EvalRecord& r : records) {
        const bool pending =
            std::find(r.flags.begin(), r.flags.end(), "judge_unavailable") !=
                r.flags.end() ||
            r.verdict == Verdict::NeedsJudge;
        if (!pending) continue;
        auto it = by_id.find(r.sample_id);
        if (it == by_id.end())
            throw UnknownSample("judge-only: unknown sample " + r.sample_id);
        ScoreResult score =
            score_response(it->second->truth, r.response, stoplist, &judge_client);
        r.verdict = score.verdict;
        r.judge_used = score.judge_used;
        r.flags.erase(std::remove(r.flags.begin(), r.flags.end(), "judge_unavailable"),
                      r.flags.end());
        r.flags.insert(r.flags.end(), score.flags.begin(), score.flags.end());
        ++rescored;
    }

    const std::string tmp = records_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("judge-only: cannot write " + tmp);
        for (const EvalRecord& r : records) out << nlohmann::json(r).dump() << '\n';
    }
    fs::rename(tmp, records_path);
    return rescored;
}

} // namespace illu
