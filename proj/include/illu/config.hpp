#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "illu/client.hpp"
#include "illu/dataset.hpp"
#include "illu/perception.hpp"

namespace illu {

struct ScheduleSpec {
    int k = 3;
    PerceptionParams strong{0.012, 0.1};
    PerceptionParams weak{0.05, 0.4};

    SmspSchedule build() const { return build_schedule(k, strong, weak); }
};

struct BenchSpec {
    std::string method = "vanilla";
    std::string manifest;
    std::string records = "records.jsonl";
};

/// One JSON config file drives every subcommand; flags override file values.
struct RunConfig {
    DatasetSpec dataset;
    std::string dataset_out_dir = "corpus";
    ScheduleSpec schedule;
    FilteredConfig filtered;
    BlurHistConfig blur_hist;
    std::optional<EndpointConfig> endpoint;
    std::optional<EndpointConfig> judge;
    BenchSpec bench;
    std::string report_out_dir = "report";
    std::string stoplist_path;

    Stoplist stoplist() const {
        return stoplist_path.empty() ? default_stoplist() : load_stoplist(stoplist_path);
    }
};

/// Parses the config file. Structural problems throw ConfigError.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);

/// Validate-first contract for generation: font resolvable, schedule
/// monotone, charsets non-empty. Throws ConfigError before any output
/// exists.
void validate_generate(const RunConfig& cfg);

} // namespace illu
