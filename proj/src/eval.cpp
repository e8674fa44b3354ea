#include "illu/eval.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "illu/errors.hpp"
#include "illu/util.hpp"

namespace illu {

namespace {

const char* kVanillaTemplate = "There is a [hidden_type] in the image, what is it ?";

const char* kCotTemplate =
    "You are an expert in solving visual puzzles and optical illusions. Your task "
    "is to identify the hidden [hidden_type] embedded in the image.\n"
    "\n"
    "The image is designed as an optical illusion, where the character is subtly "
    "integrated into the semantic background or noise patterns.\n"
    "To identify the hidden content, you can simulate human visual behaviors:\n"
    "1. Imagine squinting your eyes or slightly blurring your vision. Ignore the "
    "sharp, high frequency details, textures and noise in the image.\n"
    "2. Imagine viewing the image from a long distance. You can resize the image "
    "smaller in your mind to get a global view of the image.\n"
    "You can combine the two strategies to enhance your perception of the hidden "
    "character.\n"
    "\n"
    "Now, please analyze the image carefully, and identify the hidden "
    "[hidden_type].";

const char* kSmspTemplate =
    "I provide four views of the SAME image, the original view and the global "
    "views. There is a SAME [hidden_type] embedded in these images, with the help "
    "of the views, what is it ?";

const char* kJudgeTemplate =
    "You are a strict evaluator. Your task is to determine whether the model's "
    "response correctly identifies the hidden number(s), letter(s), word(s), or "
    "Chinese character(s) in the image.\n"
    "\n"
    "You will be given a ground truth answer, which is the correct hidden "
    "content, and a model response, which is the content identified by a specific "
    "model. You should compare the model response with the ground truth answer "
    "and decide if the model's identification is correct.\n"
    "- [Correct]: If the model response exactly matches the ground truth answer.\n"
    "- [Incorrect]: If the model response does not match the ground truth "
    "answer.\n"
    "Your output should only contain your evaluation result, either \"Correct\" "
    "or \"Incorrect\".\n"
    "\n"
    "# Example 1\n"
    "Ground Truth Answer: 5\n"
    "Model Response: Looking at the image carefully, I can identify the hidden "
    "number: 5.\n"
    "Evaluation: Correct\n"
    "# Example 2\n"
    "Ground Truth Answer: animal\n"
    "Model Response: The hidden word in the image is \"ANIMAL\".\n"
    "Evaluation: Correct\n"
    "# Example 3\n"
    "Ground Truth Answer: A\n"
    "Model Response: The hidden letter in the image is B.\n"
    "Evaluation: Incorrect\n"
    "# Example 4\n"
    "Ground Truth Answer: \xE6\x88\x91\n"
    "Model Response: The hidden Chinese character in the image is \xE6\x88\x91.\n"
    "Evaluation: Correct\n"
    "# Example 5\n"
    "Ground Truth Answer: \xE4\xBD\xA0\xE5\xA5\xBD\xE5\x90\x97\n"
    "Model Response: The hidden Chinese characters in the image are "
    "\xE6\x88\x91\xE5\xA5\xBD\xE5\x98\x9B.\n"
    "Evaluation: Incorrect\n"
    "\n"
    "Now it's your turn to evaluate.\n"
    "\n"
    "Ground Truth Answer: [GROUND_TRUTH]\n"
    "Model Response: [RESPONSE]\n"
    "Evaluation:";

std::string substitute(std::string body, const std::string& key,
                       const std::string& value) {
    std::size_t pos = 0;
    while ((pos = body.find(key, pos)) != std::string::npos) {
        body.replace(pos, key.size(), value);
        pos += value.size();
    }
    return body;
}

} // namespace

PromptKind prompt_kind_from_name(const std::string& name) {
    if (name == "vanilla") return PromptKind::Vanilla;
    if (name == "cot") return PromptKind::Cot;
    if (name == "smsp") return PromptKind::Smsp;
    throw UnknownKind("unknown prompt kind: " + name);
}

std::string render_prompt(PromptKind kind, const std::string& hidden_type) {
    if (hidden_type.empty()) throw Error("render_prompt: empty hidden type");
    const char* body = nullptr;
    switch (kind) {
        case PromptKind::Vanilla: body = kVanillaTemplate; break;
        case PromptKind::Cot: body = kCotTemplate; break;
        case PromptKind::Smsp: body = kSmspTemplate; break;
    }
    if (!body) throw UnknownKind("render_prompt: unknown kind");
    return substitute(body, "[hidden_type]", hidden_type);
}

std::string hidden_type_noun(const std::string& hidden_type) {
    if (hidden_type == "digit") return "number";
    if (hidden_type == "letter") return "letter";
    if (hidden_type == "chinese") return "Chinese character";
    if (hidden_type == "word") return "word";
    if (hidden_type == "pattern") return "pattern";
    return hidden_type;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Correct: return "Correct";
        case Verdict::Incorrect: return "Incorrect";
        default: return "NeedsJudge";
    }
}

Verdict verdict_from_name(const std::string& name) {
    if (name == "Correct") return Verdict::Correct;
    if (name == "Incorrect") return Verdict::Incorrect;
    if (name == "NeedsJudge") return Verdict::NeedsJudge;
    throw Error("unknown verdict: " + name);
}

Stoplist default_stoplist() {
    // frequent English words plus fragments that commonly appear in model
    // responses; a hidden truth equal to one of these goes to the judge
    static const char* kWords[] = {
        "the", "and", "for", "are", "but", "not", "you", "all", "any", "can",
        "had", "her", "was", "one", "our", "out", "day", "get", "has", "him",
        "his", "how", "man", "new", "now", "old", "see", "two", "way", "who",
        "boy", "did", "its", "let", "put", "say", "she", "too", "use", "that",
        "with", "have", "this", "will", "your", "from", "they", "know", "want",
        "been", "good", "much", "some", "time", "very", "when", "come", "here",
        "just", "like", "long", "make", "many", "more", "most", "only", "over",
        "such", "take", "than", "them", "well", "were", "what", "into", "also",
        "back", "down", "each", "even", "find", "give", "look", "made", "may",
        "part", "then", "upon", "image", "images", "picture", "pictures",
        "photo", "hidden", "answer", "response", "model", "character",
        "characters", "letter", "letters", "number", "numbers", "word",
        "words", "digit", "digits", "text", "view", "views", "background",
        "pattern", "patterns", "visible", "appears", "appear", "shows",
        "shown", "show", "there", "where", "which", "while", "would", "could",
        "should", "about", "after", "again", "against", "because", "before",
        "being", "below", "between", "both", "under", "until", "these",
        "those", "through", "above", "carefully", "clearly", "likely",
        "possibly", "perhaps", "certain", "certainly", "identify",
        "identified", "identifies", "looking", "seems", "seem", "seen",
        "content", "contents", "contains", "contain", "embedded", "noise",
        "illusion", "illusions", "visual", "white", "black", "gray", "grey",
        "color", "colors", "large", "medium", "small", "scale", "first",
        "second", "third", "left", "right", "top", "bottom", "center",
        "middle", "area", "areas", "region", "regions", "inside", "outside",
        "closely", "appear", "reading", "read", "reads", "written", "writing",
        "style", "font", "shape", "shapes", "line", "lines", "stroke",
        "strokes", "detail", "details", "result", "say", "says", "said",
        "see", "sees", "its", "it", "is", "in", "on", "of", "to", "as", "at",
        "be", "by", "or", "an", "if", "do", "no", "so", "up", "we", "he",
        "me", "my",
    };
    Stoplist set;
    for (const char* w : kWords) set.insert(w);
    return set;
}

Stoplist load_stoplist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stoplist: " + path);
    Stoplist set;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (!line.empty()) set.insert(ascii_lower(line));
    }
    return set;
}

Verdict string_match(const std::string& truth, const std::string& response,
                     const Stoplist& stoplist) {
    if (truth.empty()) throw Error("string_match: empty truth");
    const std::string t = ascii_lower(truth);
    const std::string r = ascii_lower(response);
    if (r.find(t) == std::string::npos) return Verdict::Incorrect;
    const std::size_t cp = utf8_decode(truth).size();
    if (cp >= 3 && !stoplist.count(t)) return Verdict::Correct;
    return Verdict::NeedsJudge;
}

std::string judge_prompt(const std::string& truth, const std::string& response) {
    std::string body = kJudgeTemplate;
    body = substitute(body, "[GROUND_TRUTH]", truth);
    body = substitute(body, "[RESPONSE]", response);
    return body;
}

Verdict judge(const std::string& truth, const std::string& response,
              JudgeClient& client) {
    const std::string reply = client.evaluate(judge_prompt(truth, response));
    const std::size_t c = reply.find("Correct");
    const std::size_t ic = reply.find("Incorrect");
    if (c == std::string::npos && ic == std::string::npos)
        throw MalformedJudgeOutput("judge reply carries no verdict: " + reply);
    if (ic != std::string::npos && (c == std::string::npos || ic < c))
        return Verdict::Incorrect;
    return Verdict::Correct;
}

ScoreResult score_response(const std::string& truth, const std::string& response,
                           const Stoplist& stoplist, JudgeClient* client) {
    ScoreResult result;
    result.verdict = string_match(truth, response, stoplist);
    if (result.verdict != Verdict::NeedsJudge) return result;

    if (!client) {
        result.verdict = Verdict::Incorrect;
        result.flags.push_back("judge_unavailable");
        return result;
    }
    try {
        result.verdict = judge(truth, response, *client);
        result.judge_used = true;
    } catch (const JudgeUnavailable&) {
        result.verdict = Verdict::Incorrect;
        result.flags.push_back("judge_unavailable");
    } catch (const MalformedJudgeOutput&) {
        result.verdict = Verdict::Incorrect;
        result.judge_used = true;
        result.flags.push_back("judge_malformed");
    }
    return result;
}

void to_json(nlohmann::json& j, const EvalRecord& r) {
    j = nlohmann::json{{"sample_id", r.sample_id},
                       {"method", r.method},
                       {"response", r.response},
                       {"verdict", verdict_name(r.verdict)},
                       {"judge_used", r.judge_used},
                       {"flags", r.flags},
                       {"usage",
                        {{"input_tokens", r.usage.input_tokens},
                         {"output_tokens", r.usage.output_tokens},
                         {"latency_s", r.usage.latency_s}}}};
}

void from_json(const nlohmann::json& j, EvalRecord& r) {
    j.at("sample_id").get_to(r.sample_id);
    j.at("method").get_to(r.method);
    j.at("response").get_to(r.response);
    r.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    r.judge_used = j.value("judge_used", false);
    r.flags = j.value("flags", std::vector<std::string>{});
    if (j.contains("usage")) {
        const auto& u = j.at("usage");
        r.usage.input_tokens = u.value("input_tokens", -1L);
        r.usage.output_tokens = u.value("output_tokens", -1L);
        r.usage.latency_s = u.value("latency_s", 0.0);
    }
}

std::vector<EvalRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open records: " + path);
    std::vector<EvalRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(nlohmann::json::parse(line).get<EvalRecord>());
        } catch (const nlohmann::json::exception& e) {
            throw Error("records " + path + " line " + std::to_string(lineno) + ": " +
                        e.what());
        }
    }
    return records;
}

void append_record(const std::string& path, const EvalRecord& record) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error("cannot append to records: " + path);
    out << nlohmann::json(record).dump() << '\n';
    out.flush();
}

namespace {

std::string background_group(const std::string& background) {
    if (background == "origin") return "origin";
    if (background == "semantic_import") return "semantic";
    return "noise";
}

int scale_slot(const std::string& scale) {
    if (scale == "large") return 0;
    if (scale == "medium") return 1;
    if (scale == "small") return 2;
    return -1;
}

} // namespace

BenchReport aggregate(const std::vector<EvalRecord>& records,
                      const std::vector<SampleRecord>& manifest) {
    std::map<std::string, const SampleRecord*> by_id;
    for (const SampleRecord& s : manifest) by_id[s.id] = &s;

    BenchReport report;
    for (const EvalRecord& r : records) {
        auto it = by_id.find(r.sample_id);
        if (it == by_id.end())
            throw UnknownSample("record references unknown sample: " + r.sample_id);
        const SampleRecord& s = *it->second;

        CostStats& cost = report.cost[r.method];
        ++cost.n;
        cost.mean_latency_s += r.usage.latency_s;
        if (r.usage.input_tokens >= 0) {
            ++cost.with_tokens;
            cost.mean_input_tokens += static_cast<double>(r.usage.input_tokens);
            cost.mean_output_tokens +=
                static_cast<double>(std::max(0L, r.usage.output_tokens));
        }

        const int slot = scale_slot(s.scale);
        if (slot < 0) continue; // unclassified samples stay out of the table
        CellStats& cell =
            report.accuracy[r.method][background_group(s.background)].cells[slot];
        ++cell.total;
        if (r.verdict == Verdict::Correct) ++cell.correct;
    }
    for (auto& [method, cost] : report.cost) {
        if (cost.n) cost.mean_latency_s /= cost.n;
        if (cost.with_tokens) {
            cost.mean_input_tokens /= cost.with_tokens;
            cost.mean_output_tokens /= cost.with_tokens;
        }
    }
    return report;
}

namespace {

std::string cell_text(const CellStats& c) {
    if (c.total == 0) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", c.accuracy());
    return buf;
}

} // namespace

std::string report_table(const BenchReport& report) {
    static const char* kGroups[] = {"origin", "noise", "semantic"};
    std::ostringstream out;
    out << "Method            ";
    for (const char* g : kGroups) {
        std::string title(g);
        title[0] = static_cast<char>(std::toupper(title[0]));
        out << "| " << title << std::string(27 - title.size(), ' ');
    }
    out << "\n                  ";
    for (int i = 0; i < 3; ++i) {
        out << "| ";
        for (const char* h : {"L", "M", "S", "Avg"}) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%-6s", h);
            out << buf;
        }
        out << "  ";
    }
    out << '\n';
    for (const auto& [method, groups] : report.accuracy) {
        char mb[32];
        std::snprintf(mb, sizeof mb, "%-18s", method.c_str());
        out << mb;
        for (const char* g : kGroups) {
            out << "| ";
            auto it = groups.find(g);
            GroupStats gs = it != groups.end() ? it->second : GroupStats{};
            for (int slot = 0; slot < 3; ++slot) {
                char buf[16];
                std::snprintf(buf, sizeof buf, "%-6s", cell_text(gs.cells[slot]).c_str());
                out << buf;
            }
            char buf[16];
            std::snprintf(buf, sizeof buf, "%-6s", cell_text(gs.avg()).c_str());
            out << buf << "  ";
        }
        out << '\n';
    }
    if (!report.cost.empty()) {
        out << "\nPer-sample cost (means)\n";
        out << "Method             n      input_tok  output_tok  latency_s\n";
        for (const auto& [method, c] : report.cost) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%-18s %-6d %-10.1f %-11.1f %.3f\n",
                          method.c_str(), c.n,
                          c.with_tokens ? c.mean_input_tokens : -1.0,
                          c.with_tokens ? c.mean_output_tokens : -1.0,
                          c.mean_latency_s);
            out << buf;
        }
    }
    return out.str();
}

nlohmann::json report_json(const BenchReport& report) {
    nlohmann::json j;
    static const char* kGroups[] = {"origin", "noise", "semantic"};
    static const char* kScales[] = {"large", "medium", "small"};
    for (const auto& [method, groups] : report.accuracy) {
        nlohmann::json jm;
        for (const char* g : kGroups) {
            auto it = groups.find(g);
            const GroupStats gs = it != groups.end() ? it->second : GroupStats{};
            nlohmann::json jg;
            for (int slot = 0; slot < 3; ++slot) {
                const CellStats& c = gs.cells[slot];
                jg[kScales[slot]] =
                    c.total ? nlohmann::json(c.accuracy()) : nlohmann::json(nullptr);
                jg[std::string(kScales[slot]) + "_n"] = c.total;
            }
            const CellStats avg = gs.avg();
            jg["avg"] = avg.total ? nlohmann::json(avg.accuracy()) : nlohmann::json(nullptr);
            jg["avg_n"] = avg.total;
            jm[g] = jg;
        }
        j["accuracy"][method] = jm;
    }
    for (const auto& [method, c] : report.cost) {
        j["cost"][method] = {
            {"n", c.n},
            {"mean_input_tokens", c.with_tokens ? nlohmann::json(c.mean_input_tokens)
                                                : nlohmann::json(nullptr)},
            {"mean_output_tokens", c.with_tokens ? nlohmann::json(c.mean_output_tokens)
                                                 : nlohmann::json(nullptr)},
            {"mean_latency_s", c.mean_latency_s}};
    }
    return j;
}

long cost_model(int k, long per_image_tokens, long text_tokens) {
    if (k < 0) throw Error("cost_model: negative variant count");
    return text_tokens + static_cast<long>(k + 1) * per_image_tokens;
}

} // namespace illu
