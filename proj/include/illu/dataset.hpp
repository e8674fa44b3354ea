#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "illu/noise.hpp"

namespace illu {

/// One dataset entry. Serialized as a JSON-lines manifest with exactly these
/// field names.
struct SampleRecord {
    std::string id;
    std::string truth;
    std::string hidden_type; // digit | letter | chinese | word | pattern
    std::string background;  // origin | vg | gn | hd | ln | mn | semantic_import
    std::string scale;       // large | medium | small | unclassified
    std::uint64_t seed = 0;
    nlohmann::json gen_params = nlohmann::json::object();
    std::string image_path;

    bool operator==(const SampleRecord&) const = default;
};

void to_json(nlohmann::json& j, const SampleRecord& r);
void from_json(const nlohmann::json& j, SampleRecord& r);

nlohmann::json texture_params_json(const TextureParams& p);
TextureParams texture_params_from_json(const nlohmann::json& j);

std::vector<SampleRecord> read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<SampleRecord>& records);

/// Charset file: UTF-8, one entry per line; blank lines and lines starting
/// with '#' are skipped.
std::vector<std::string> load_charset(const std::string& path);

struct CharsetSpec {
    std::string hidden_type;
    std::vector<std::string> entries;
};

struct SemanticImportSpec {
    std::string images_dir;
    std::string truths_file;
};

struct DatasetSpec {
    std::vector<CharsetSpec> charsets;
    std::vector<TextureKind> backgrounds = {TextureKind::VG, TextureKind::GN,
                                            TextureKind::HD, TextureKind::LN,
                                            TextureKind::MN};
    std::vector<ScaleClass> scales = {ScaleClass::Large, ScaleClass::Medium,
                                      ScaleClass::Small};
    int canvas = 1000;
    std::uint64_t seed = 0;
    std::string font_path;
    // per-kind (p_c, p_b) overrides; defaults from default_texture_pair
    std::map<TextureKind, std::pair<TextureParams, TextureParams>> texture_pairs;
    std::optional<SemanticImportSpec> semantic;
};

struct BuildResult {
    std::string manifest_path;
    std::vector<SampleRecord> records;
    // (scale, background) -> sample count
    std::map<std::pair<std::string, std::string>, int> counts;
    int fidelity_failures = 0; // samples under the 95% contrast check
};

/// Generates originals and illusions plus the JSON-lines manifest under
/// out_dir. Sample seeds derive from (spec.seed, sample id), so the corpus
/// is byte-identical across runs and thread counts. Partial outputs are
/// removed if generation fails.
BuildResult build_dataset(const DatasetSpec& spec, const std::string& out_dir);

/// Builds manifest entries for externally generated semantic-background
/// images. truths_file is JSON lines with fields: image, truth, hidden_type,
/// and optional scale. Images are referenced, never modified.
std::vector<SampleRecord> import_semantic(const std::string& images_dir,
                                          const std::string& truths_file);

} // namespace illu
