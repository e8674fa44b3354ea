#include "illu/client.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "illu/errors.hpp"
#include "illu/util.hpp"

namespace illu {

namespace {

double mono_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct ParsedUrl {
    std::string host_port; // scheme://host[:port]
    std::string prefix;    // path prefix, possibly empty
};

ParsedUrl parse_base_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ProtocolError("base_url needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    ParsedUrl p;
    if (path_start == std::string::npos) {
        p.host_port = url;
    } else {
        p.host_port = url.substr(0, path_start);
        p.prefix = url.substr(path_start);
        while (!p.prefix.empty() && p.prefix.back() == '/') p.prefix.pop_back();
    }
    return p;
}

} // namespace

std::string assemble_body(const VisionRequest& req, const std::string& model) {
    nlohmann::json content = nlohmann::json::array();
    content.push_back({{"type", "text"}, {"text", req.prompt}});
    for (const RasterImage& img : req.images) {
        const std::string uri =
            "data:image/png;base64," + base64_encode(encode_png(img));
        content.push_back({{"type", "image_url"}, {"image_url", {{"url", uri}}}});
    }
    nlohmann::json body = {
        {"model", model},
        {"temperature", req.temperature},
        {"max_tokens", req.max_tokens},
        {"messages",
         nlohmann::json::array({{{"role", "user"}, {"content", content}}})}};
    return body.dump();
}

namespace {

VisionResponse send_once(httplib::Client& cli, const std::string& path,
                         const httplib::Headers& headers, const std::string& body) {
    const double t0 = mono_seconds();
    httplib::Result res = cli.Post(path, headers, body, "application/json");
    const double latency = mono_seconds() - t0;

    if (!res) {
        switch (res.error()) {
            case httplib::Error::ConnectionTimeout:
            case httplib::Error::Read:
            case httplib::Error::Write:
                throw RequestTimeout("request timed out");
            default:
                throw ProtocolError("transport error: " + httplib::to_string(res.error()));
        }
    }
    VisionResponse out;
    out.raw_status = res->status;
    out.latency_s = latency;
    if (res->status != 200) {
        out.text = res->body;
        return out;
    }
    try {
        auto j = nlohmann::json::parse(res->body);
        out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (j.contains("usage")) {
            out.input_tokens = j["usage"].value("prompt_tokens", -1L);
            out.output_tokens = j["usage"].value("completion_tokens", -1L);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("malformed completion payload: ") + e.what());
    }
    return out;
}

VisionResponse send_with_limiter(const VisionRequest& req, const EndpointConfig& cfg,
                                 RateLimiter* limiter) {
    if (req.prompt.empty()) throw ProtocolError("send: empty prompt");
    const ParsedUrl url = parse_base_url(cfg.base_url);

    httplib::Client cli(url.host_port);
    const auto timeout_s = static_cast<time_t>(cfg.timeout_s);
    const auto timeout_us =
        static_cast<time_t>((cfg.timeout_s - static_cast<double>(timeout_s)) * 1e6);
    cli.set_connection_timeout(timeout_s, timeout_us);
    cli.set_read_timeout(timeout_s, timeout_us);
    cli.set_write_timeout(timeout_s, timeout_us);

    httplib::Headers headers;
    if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    const std::string body = assemble_body(req, cfg.model);
    const std::string path = url.prefix + "/chat/completions";

    for (int attempt = 0;; ++attempt) {
        if (limiter) limiter->acquire();
        VisionResponse res = send_once(cli, path, headers, body);
        if (res.raw_status == 200) {
            res.retry_count = attempt;
            return res;
        }
        if (res.raw_status == 401 || res.raw_status == 403)
            throw AuthFailed("authentication rejected (status " +
                             std::to_string(res.raw_status) + ")");
        const bool transient = res.raw_status == 429 || res.raw_status >= 500;
        if (!transient)
            throw ProtocolError("client error status " + std::to_string(res.raw_status) +
                                ": " + res.text);
        if (attempt >= cfg.max_retries) {
            if (res.raw_status == 429)
                throw RateLimited("rate limited after " + std::to_string(attempt) +
                                  " retries");
            throw ProtocolError("server error status " + std::to_string(res.raw_status) +
                                " after " + std::to_string(attempt) + " retries");
        }
        const double delay = cfg.retry_backoff_s * static_cast<double>(1 << attempt);
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
}

} // namespace

VisionResponse send(const VisionRequest& req, const EndpointConfig& cfg) {
    return send_with_limiter(req, cfg, nullptr);
}

RateLimiter::RateLimiter(int max_events, double window_s)
    : max_events_(std::max(1, max_events)), window_s_(window_s) {}

void RateLimiter::acquire() {
    while (true) {
        double wait = 0;
        {
            std::lock_guard lock(mu_);
            const double now = mono_seconds();
            while (!issued_.empty() && issued_.front() <= now - window_s_)
                issued_.pop_front();
            if (static_cast<int>(issued_.size()) < max_events_) {
                issued_.push_back(now);
                return;
            }
            wait = issued_.front() + window_s_ - now;
        }
        std::this_thread::sleep_for(std::chrono::duration<double>(std::max(wait, 1e-3)));
    }
}

Semaphore::Semaphore(int count) : count_(std::max(1, count)) {}

void Semaphore::acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return count_ > 0; });
    --count_;
}

void Semaphore::release() {
    {
        std::lock_guard lock(mu_);
        ++count_;
    }
    cv_.notify_one();
}

std::string HttpJudgeClient::evaluate(const std::string& prompt) {
    VisionRequest req;
    req.prompt = prompt;
    req.temperature = cfg_.temperature;
    req.max_tokens = cfg_.max_tokens;
    try {
        return send(req, cfg_).text;
    } catch (const Error& e) {
        throw JudgeUnavailable(std::string("judge endpoint failed: ") + e.what());
    }
}

std::vector<RasterImage> method_images(const RasterImage& original,
                                       const std::string& method,
                                       const SmspSchedule& schedule,
                                       const FilteredConfig& filtered,
                                       const BlurHistConfig& blur_hist) {
    if (method == "vanilla" || method == "cot") return {original};
    if (method == "filtered") return {baseline_filtered(original, filtered)};
    if (method == "blur_hist") return {baseline_blur_histogram(original, blur_hist)};
    if (method == "smsp") return build_smsp_input(original, schedule).images;
    if (method.rfind("ablation:", 0) == 0) {
        const std::string rest = method.substr(9);
        if (rest == "no_filter")
            return ablate(original, AblationMode::no_filter(), schedule).images;
        if (rest == "no_rescale")
            return ablate(original, AblationMode::no_rescale(), schedule).images;
        if (rest.rfind("single_variant:", 0) == 0) {
            const int i = std::stoi(rest.substr(15));
            return ablate(original, AblationMode::single_variant(i), schedule).images;
        }
    }
    throw UnknownKind("unknown method: " + method);
}

PromptKind method_prompt_kind(const std::string& method) {
    if (method == "cot") return PromptKind::Cot;
    if (method == "smsp" || method.rfind("ablation:", 0) == 0) return PromptKind::Smsp;
    return PromptKind::Vanilla;
}

int run_bench(const std::vector<SampleRecord>& manifest, const BenchOptions& options,
              const EndpointConfig& cfg) {
    if (options.records_path.empty()) throw Error("run_bench: records path required");

    std::set<std::string> done;
    if (std::filesystem::exists(options.records_path)) {
        for (const EvalRecord& r : read_records(options.records_path))
            if (r.method == options.method) done.insert(r.sample_id);
    }

    std::vector<const SampleRecord*> todo;
    for (const SampleRecord& s : manifest)
        if (!done.count(s.id)) todo.push_back(&s);
    if (todo.empty()) return 0;

    RateLimiter limiter(cfg.requests_per_minute);
    std::optional<RateLimiter> judge_limiter;
    std::unique_ptr<HttpJudgeClient> judge_client;
    if (options.judge) {
        judge_limiter.emplace(options.judge->requests_per_minute);
        judge_client = std::make_unique<HttpJudgeClient>(*options.judge);
    }

    struct LimitedJudge : JudgeClient {
        JudgeClient& inner;
        RateLimiter& limiter;
        LimitedJudge(JudgeClient& j, RateLimiter& l) : inner(j), limiter(l) {}
        std::string evaluate(const std::string& prompt) override {
            limiter.acquire();
            return inner.evaluate(prompt);
        }
    };

    std::atomic<std::size_t> next{0};
    std::atomic<int> issued{0};
    std::mutex sink_mu;

    auto worker = [&] {
        std::optional<LimitedJudge> judge;
        if (judge_client) judge.emplace(*judge_client, *judge_limiter);
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) break;
            const SampleRecord& s = *todo[i];

            EvalRecord rec;
            rec.sample_id = s.id;
            rec.method = options.method;
            try {
                std::filesystem::path img_path(s.image_path);
                if (img_path.is_relative() && !options.image_root.empty())
                    img_path = std::filesystem::path(options.image_root) / img_path;
                const RasterImage original = read_png(img_path.string());

                VisionRequest req;
                req.images = method_images(original, options.method, options.schedule,
                                           options.filtered, options.blur_hist);
                req.prompt = render_prompt(method_prompt_kind(options.method),
                                           hidden_type_noun(s.hidden_type));
                req.temperature = cfg.temperature;
                req.max_tokens = cfg.max_tokens;

                VisionResponse res = send_with_limiter(req, cfg, &limiter);
                ++issued;
                rec.response = res.text;
                rec.usage.input_tokens = res.input_tokens;
                rec.usage.output_tokens = res.output_tokens;
                rec.usage.latency_s = res.latency_s;
                if (res.retry_count > 0)
                    rec.flags.push_back("retries:" + std::to_string(res.retry_count));

                ScoreResult score = score_response(s.truth, res.text, options.stoplist,
                                                   judge ? &*judge : nullptr);
                rec.verdict = score.verdict;
                rec.judge_used = score.judge_used;
                rec.flags.insert(rec.flags.end(), score.flags.begin(), score.flags.end());
            } catch (const std::exception& e) {
                rec.verdict = Verdict::Incorrect;
                rec.flags.push_back(std::string("client_error:") + e.what());
            }
            {
                std::lock_guard lock(sink_mu);
                append_record(options.records_path, rec);
            }
        }
    };

    const int nworkers =
        std::max(1, std::min<int>(cfg.max_concurrent_requests,
                                  static_cast<int>(todo.size())));
    std::vector<std::thread> threads;
    threads.reserve(nworkers);
    for (int i = 0; i < nworkers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return issued.load();
}

} // namespace illu
