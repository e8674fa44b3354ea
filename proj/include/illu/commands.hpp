#pragma once

#include <string>

#include "illu/config.hpp"

namespace illu {

/// Subcommand bodies shared by the CLI binary and the test suites. Each
/// throws ConfigError / DataError / EndpointError (or a more specific error)
/// on failure; exit_code_for maps exceptions onto process exit codes.

/// Validates, generates the corpus, prints the per-category counts table.
/// Returns the manifest path.
std::string cmd_generate(const RunConfig& cfg);

/// Processes one image or a directory of PNGs with the given method,
/// writing variants with _v{i} suffixes into out_dir. Returns the number of
/// files written.
int cmd_process(const std::string& input, const std::string& method,
                const std::string& out_dir, const RunConfig& cfg);

/// Band-share analysis. `input` is a manifest (paired origin-vs-illusion
/// CSV) or an image file / directory (one band-report row per image).
/// Returns the number of CSV data rows.
int cmd_analyze(const std::string& input, const std::string& out_csv,
                const RunConfig& cfg);

/// Runs the benchmark against cfg.endpoint. Returns newly issued requests.
int cmd_bench(const RunConfig& cfg);

/// Aggregates records against the manifest; writes report.json/report.txt
/// under out_dir and returns the rendered table.
std::string cmd_report(const std::string& records_path, const std::string& manifest_path,
                       const std::string& out_dir);

/// Re-scores records whose judge stage was skipped or failed, using the
/// configured judge endpoint. Returns the number of records re-scored.
int cmd_judge_only(const std::string& records_path, const std::string& manifest_path,
                   const RunConfig& cfg);

/// 0 success, 2 config/validation, 3 data, 4 endpoint, 1 anything else.
int exit_code_for(const std::exception& e);

} // namespace illu
