#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "illu/commands.hpp"
#include "illu/errors.hpp"

using namespace illu;

int main(int argc, char** argv) {
    CLI::App app{"hidden-character illusion toolkit: dataset generation, SMSP "
                 "preprocessing, spectral analysis, and MLLM benchmarking"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file")->required();

    // flag overrides; empty string / sentinel means "use the config value"
    std::string out_dir, input, mode, out_csv, records, manifest, report_dir, method;
    long seed = -1;
    int k = -1;

    auto* generate = app.add_subcommand("generate", "build the illusion corpus");
    generate->add_option("--out-dir", out_dir, "output directory override");
    generate->add_option("--seed", seed, "master seed override");

    auto* process = app.add_subcommand("process", "write perception variants");
    process->add_option("--input", input, "image file or directory")->required();
    process
        ->add_option("--mode", mode,
                     "smsp | filtered | blur_hist | ablation:no_filter | "
                     "ablation:no_rescale | ablation:single_variant:N")
        ->required();
    process->add_option("--out-dir", out_dir, "output directory")->required();
    process->add_option("--k", k, "variant count override");

    auto* analyze = app.add_subcommand("analyze", "spectral band-share CSV");
    analyze->add_option("--input", input, "manifest.jsonl, image, or directory")
        ->required();
    analyze->add_option("--out", out_csv, "CSV output path")->required();

    auto* bench = app.add_subcommand("bench", "run the endpoint benchmark");
    bench->add_option("--method", method, "method override");
    bench->add_option("--records", records, "records path override");
    bench->add_option("--manifest", manifest, "manifest path override");

    auto* report = app.add_subcommand("report", "aggregate records into a report");
    report->add_option("--records", records, "records JSONL")->required();
    report->add_option("--manifest", manifest, "manifest JSONL")->required();
    report->add_option("--out-dir", report_dir, "report output directory");

    auto* judge_only =
        app.add_subcommand("judge-only", "re-judge records scored without a judge");
    judge_only->add_option("--records", records, "records JSONL")->required();
    judge_only->add_option("--manifest", manifest, "manifest JSONL")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (!out_dir.empty() && generate->parsed()) cfg.dataset_out_dir = out_dir;
        if (seed >= 0) cfg.dataset.seed = static_cast<std::uint64_t>(seed);
        if (k >= 2) cfg.schedule.k = k;
        if (!method.empty()) cfg.bench.method = method;
        if (!records.empty()) cfg.bench.records = records;
        if (!manifest.empty()) cfg.bench.manifest = manifest;
        if (!report_dir.empty()) cfg.report_out_dir = report_dir;

        if (generate->parsed()) {
            cmd_generate(cfg);
        } else if (process->parsed()) {
            const int n = cmd_process(input, mode, out_dir, cfg);
            std::printf("%d file(s) written to %s\n", n, out_dir.c_str());
        } else if (analyze->parsed()) {
            const int n = cmd_analyze(input, out_csv, cfg);
            std::printf("%d row(s) -> %s\n", n, out_csv.c_str());
        } else if (bench->parsed()) {
            cmd_bench(cfg);
        } else if (report->parsed()) {
            cmd_report(cfg.bench.records, cfg.bench.manifest, cfg.report_out_dir);
        } else if (judge_only->parsed()) {
            const int n = cmd_judge_only(cfg.bench.records, cfg.bench.manifest, cfg);
            std::printf("%d record(s) re-scored\n", n);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    }
    return 0;
}
