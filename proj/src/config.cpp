#include "illu/config.hpp"

#include <fstream>

#include "illu/errors.hpp"
#include "illu/font.hpp"
#include "illu/util.hpp"

namespace illu {

namespace {

EndpointConfig endpoint_from_json(const nlohmann::json& j) {
    EndpointConfig e;
    e.base_url = j.at("base_url").get<std::string>();
    e.api_key_env = j.value("api_key_env", e.api_key_env);
    e.model = j.value("model", e.model);
    e.timeout_s = j.value("timeout_s", e.timeout_s);
    e.max_retries = j.value("max_retries", e.max_retries);
    e.retry_backoff_s = j.value("retry_backoff_s", e.retry_backoff_s);
    e.max_concurrent_requests =
        j.value("max_concurrent_requests", e.max_concurrent_requests);
    e.requests_per_minute = j.value("requests_per_minute", e.requests_per_minute);
    e.temperature = j.value("temperature", e.temperature);
    e.max_tokens = j.value("max_tokens", e.max_tokens);
    if (e.timeout_s <= 0) throw ConfigError("endpoint: timeout_s must be positive");
    if (e.max_concurrent_requests < 1)
        throw ConfigError("endpoint: max_concurrent_requests must be >= 1");
    return e;
}

PerceptionParams params_from_json(const nlohmann::json& j) {
    return {j.at("lambda").get<double>(), j.at("s").get<double>()};
}

} // namespace

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    if (j.contains("dataset")) {
        const auto& d = j["dataset"];
        cfg.dataset_out_dir = d.value("out_dir", cfg.dataset_out_dir);
        cfg.dataset.canvas = d.value("canvas", cfg.dataset.canvas);
        cfg.dataset.seed = d.value("seed", cfg.dataset.seed);
        cfg.dataset.font_path = d.value("font", std::string{});
        if (d.contains("charsets")) {
            for (const auto& c : d["charsets"]) {
                CharsetSpec cs;
                cs.hidden_type = c.at("hidden_type").get<std::string>();
                if (c.contains("entries"))
                    cs.entries = c["entries"].get<std::vector<std::string>>();
                else
                    cs.entries = load_charset(c.at("file").get<std::string>());
                cfg.dataset.charsets.push_back(std::move(cs));
            }
        }
        if (d.contains("backgrounds")) {
            cfg.dataset.backgrounds.clear();
            for (const auto& b : d["backgrounds"])
                cfg.dataset.backgrounds.push_back(
                    texture_from_name(b.get<std::string>()));
        }
        if (d.contains("scales")) {
            cfg.dataset.scales.clear();
            for (const auto& s : d["scales"])
                cfg.dataset.scales.push_back(scale_from_name(s.get<std::string>()));
        }
        if (d.contains("textures")) {
            for (const auto& [name, pair] : d["textures"].items()) {
                cfg.dataset.texture_pairs[texture_from_name(name)] = {
                    texture_params_from_json(pair.at("p_c")),
                    texture_params_from_json(pair.at("p_b"))};
            }
        }
        if (d.contains("semantic_import")) {
            SemanticImportSpec s;
            s.images_dir = d["semantic_import"].at("images_dir").get<std::string>();
            s.truths_file = d["semantic_import"].at("truths").get<std::string>();
            cfg.dataset.semantic = s;
        }
    }
    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        cfg.schedule.k = s.value("k", cfg.schedule.k);
        if (s.contains("strong")) cfg.schedule.strong = params_from_json(s["strong"]);
        if (s.contains("weak")) cfg.schedule.weak = params_from_json(s["weak"]);
    }
    if (j.contains("baselines")) {
        const auto& b = j["baselines"];
        if (b.contains("filtered")) {
            cfg.filtered.sigma = b["filtered"].value("sigma", cfg.filtered.sigma);
            cfg.filtered.passes = b["filtered"].value("passes", cfg.filtered.passes);
            cfg.filtered.amount = b["filtered"].value("amount", cfg.filtered.amount);
        }
        if (b.contains("blur_hist"))
            cfg.blur_hist.sigma = b["blur_hist"].value("sigma", cfg.blur_hist.sigma);
    }
    if (j.contains("endpoint")) cfg.endpoint = endpoint_from_json(j["endpoint"]);
    if (j.contains("judge")) cfg.judge = endpoint_from_json(j["judge"]);
    if (j.contains("bench")) {
        const auto& b = j["bench"];
        cfg.bench.method = b.value("method", cfg.bench.method);
        cfg.bench.manifest = b.value("manifest", cfg.bench.manifest);
        cfg.bench.records = b.value("records", cfg.bench.records);
    }
    if (j.contains("report"))
        cfg.report_out_dir = j["report"].value("out_dir", cfg.report_out_dir);
    cfg.stoplist_path = j.value("stoplist", std::string{});
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
}

void validate_generate(const RunConfig& cfg) {
    if (cfg.dataset.charsets.empty())
        throw ConfigError("generate: no charsets configured");
    for (const auto& cs : cfg.dataset.charsets)
        if (cs.entries.empty())
            throw ConfigError("generate: charset " + cs.hidden_type + " is empty");
    if (cfg.dataset.font_path.empty())
        throw ConfigError("generate: dataset.font is required");
    try {
        Font font = Font::load(cfg.dataset.font_path);
        for (const auto& cs : cfg.dataset.charsets)
            for (const std::string& entry : cs.entries)
                for (char32_t cp : utf8_decode(entry))
                    if (!font.has_glyph(cp))
                        throw ConfigError("generate: font lacks a glyph for \"" + entry +
                                          "\"");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("generate: cannot load font: ") + e.what());
    }
    try {
        (void)cfg.schedule.build();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("generate: invalid schedule: ") + e.what());
    }
    if (cfg.dataset.canvas < 16) throw ConfigError("generate: canvas too small");
}

} // namespace illu
