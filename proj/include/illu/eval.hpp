#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "illu/dataset.hpp"

namespace illu {

enum class PromptKind { Vanilla, Cot, Smsp };

PromptKind prompt_kind_from_name(const std::string& name);

/// Returns the template body with every [hidden_type] placeholder replaced.
/// hidden_type here is the prompt noun ("number", "letter", "word",
/// "Chinese character", "pattern").
std::string render_prompt(PromptKind kind, const std::string& hidden_type);

/// Maps a manifest hidden_type tag onto the noun used in prompts.
std::string hidden_type_noun(const std::string& hidden_type);

enum class Verdict { Correct, Incorrect, NeedsJudge };

const char* verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& name);

using Stoplist = std::unordered_set<std::string>;

/// ~200 frequent English words and response fragments; truths on this list
/// always route to the judge.
Stoplist default_stoplist();
Stoplist load_stoplist(const std::string& path);

/// Strict containment rules:
///   truth not contained          -> Incorrect
///   contained, >= 3 code points,
///   not a common string          -> Correct
///   otherwise                    -> NeedsJudge
/// Containment is case-insensitive for ASCII and exact for everything else.
Verdict string_match(const std::string& truth, const std::string& response,
                     const Stoplist& stoplist);

struct JudgeClient {
    virtual ~JudgeClient() = default;
    // Throws JudgeUnavailable when the evaluator cannot be reached.
    virtual std::string evaluate(const std::string& prompt) = 0;
};

/// The evaluator prompt with [GROUND_TRUTH]/[RESPONSE] substituted.
std::string judge_prompt(const std::string& truth, const std::string& response);

/// Sends the evaluator prompt and maps the reply: the first occurrence of
/// "Correct" or "Incorrect" wins. Throws MalformedJudgeOutput when neither
/// token appears.
Verdict judge(const std::string& truth, const std::string& response,
              JudgeClient& client);

struct ScoreResult {
    Verdict verdict = Verdict::Incorrect;
    bool judge_used = false;
    std::vector<std::string> flags;
};

/// Full hybrid pipeline: string matching first, the judge for ambiguous
/// cases. A missing or failing judge scores Incorrect with a
/// "judge_unavailable" flag, so offline runs stay conservative.
ScoreResult score_response(const std::string& truth, const std::string& response,
                           const Stoplist& stoplist, JudgeClient* client);

struct Usage {
    long input_tokens = -1;  // -1 = not reported
    long output_tokens = -1;
    double latency_s = 0;

    bool operator==(const Usage&) const = default;
};

struct EvalRecord {
    std::string sample_id;
    std::string method; // vanilla | cot | filtered | blur_hist | smsp | ablation tag
    std::string response;
    Verdict verdict = Verdict::Incorrect;
    bool judge_used = false;
    std::vector<std::string> flags;
    Usage usage;

    bool operator==(const EvalRecord&) const = default;
};

void to_json(nlohmann::json& j, const EvalRecord& r);
void from_json(const nlohmann::json& j, EvalRecord& r);

std::vector<EvalRecord> read_records(const std::string& path);
void append_record(const std::string& path, const EvalRecord& record);

struct CellStats {
    int correct = 0;
    int total = 0;
    double accuracy() const { return 100.0 * correct / total; }
};

struct GroupStats {
    std::array<CellStats, 3> cells{}; // Large, Medium, Small

    CellStats avg() const {
        CellStats a;
        for (const CellStats& c : cells) {
            a.correct += c.correct;
            a.total += c.total;
        }
        return a;
    }
};

struct CostStats {
    int n = 0;
    int with_tokens = 0;
    double mean_input_tokens = 0;
    double mean_output_tokens = 0;
    double mean_latency_s = 0;
};

/// Accuracy matrix over (background group x scale) plus per-method costs.
/// Groups pool sub-backgrounds sample-weighted; empty cells stay absent.
struct BenchReport {
    std::map<std::string, std::map<std::string, GroupStats>> accuracy;
    std::map<std::string, CostStats> cost;
};

BenchReport aggregate(const std::vector<EvalRecord>& records,
                      const std::vector<SampleRecord>& manifest);

/// Fixed-width text table with columns ordered
/// Origin/Noise/Semantic x L/M/S/Avg.
std::string report_table(const BenchReport& report);
nlohmann::json report_json(const BenchReport& report);

/// Projected input tokens for a K-variant tuple: text_tokens plus one image
/// payload per tuple entry (the original plus k variants).
long cost_model(int k, long per_image_tokens, long text_tokens);

} // namespace illu
