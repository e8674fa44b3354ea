#pragma once

#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "illu/eval.hpp"
#include "illu/image.hpp"
#include "illu/perception.hpp"

namespace illu {

struct EndpointConfig {
    std::string base_url;                    // e.g. http://127.0.0.1:8080/v1
    std::string api_key_env = "ILLU_API_KEY"; // key read from this env var
    std::string model;
    double timeout_s = 60.0;
    int max_retries = 3;
    double retry_backoff_s = 0.5;
    int max_concurrent_requests = 4;
    int requests_per_minute = 60;
    double temperature = 0.0;
    int max_tokens = 512;
};

struct VisionRequest {
    std::string prompt;
    std::vector<RasterImage> images; // wire order preserved, original first
    double temperature = 0.0;
    int max_tokens = 512;
};

struct VisionResponse {
    std::string text;
    long input_tokens = -1; // -1 = endpoint did not report usage
    long output_tokens = -1;
    double latency_s = 0;
    int raw_status = 0;
    int retry_count = 0;
};

/// Deterministic chat-completions body: one user message whose parts are the
/// prompt text followed by the images as base64 PNG data URIs, in order.
std::string assemble_body(const VisionRequest& req, const std::string& model);

/// POSTs the request with exponential backoff on 429/5xx (never on other
/// 4xx). Throws AuthFailed, RateLimited, RequestTimeout, or ProtocolError.
VisionResponse send(const VisionRequest& req, const EndpointConfig& cfg);

/// Sliding-window limiter: at most max_events acquisitions in any window.
class RateLimiter {
public:
    RateLimiter(int max_events, double window_s = 60.0);
    void acquire();

private:
    int max_events_;
    double window_s_;
    std::mutex mu_;
    std::deque<double> issued_; // monotonic seconds
};

class Semaphore {
public:
    explicit Semaphore(int count);
    void acquire();
    void release();

private:
    int count_;
    std::mutex mu_;
    std::condition_variable cv_;
};

/// Judge backend over a chat-completions endpoint (text-only requests).
/// Transport failures surface as JudgeUnavailable.
class HttpJudgeClient : public JudgeClient {
public:
    explicit HttpJudgeClient(EndpointConfig cfg) : cfg_(std::move(cfg)) {}
    std::string evaluate(const std::string& prompt) override;

private:
    EndpointConfig cfg_;
};

struct BenchOptions {
    std::string method = "vanilla"; // vanilla|cot|filtered|blur_hist|smsp|ablation:...
    std::string records_path;
    std::string image_root; // directory manifest image paths are relative to
    SmspSchedule schedule;
    FilteredConfig filtered;
    BlurHistConfig blur_hist;
    Stoplist stoplist;
    std::optional<EndpointConfig> judge;
};

/// Builds the image tuple a method sends for one sample.
std::vector<RasterImage> method_images(const RasterImage& original,
                                       const std::string& method,
                                       const SmspSchedule& schedule,
                                       const FilteredConfig& filtered,
                                       const BlurHistConfig& blur_hist);

PromptKind method_prompt_kind(const std::string& method);

/// Runs every manifest sample through preprocess -> prompt -> send -> score,
/// appending EvalRecords incrementally. Sample ids already present in the
/// records file for this method are skipped, so interrupted runs resume.
/// Unrecoverable per-sample client errors are recorded with a flag and the
/// run continues. Returns the number of newly issued requests.
int run_bench(const std::vector<SampleRecord>& manifest, const BenchOptions& options,
              const EndpointConfig& cfg);

} // namespace illu
