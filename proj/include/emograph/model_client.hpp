// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <condition_variable>
#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace emograph {

struct LabelSet;  // prompting.hpp

struct ModelParams {
    double temperature = 0.0;  // pinned to 0 for evaluation runs
    int max_output_tokens = 256;
    std::string model_id;
};

struct ModelRequest {
    std::optional<std::string> audio_path;  // resolved [I] slot
    std::string text;                       // flattened prompt
    ModelParams params;
    std::string idempotency_key;            // content-addressed, see make_request
};

struct ModelResponse {
    std::string text;
    long latency_ms = 0;
    std::string model_id;
    bool cached = false;
};

/// Builds a request with a deterministic idempotency key derived from the
/// audio content hash (not the path), the prompt text, and the params.
ModelRequest make_request(std::optional<std::string> audio_path, std::string text,
                          ModelParams params);

/// Caps concurrent in-flight remote requests and enforces a
/// requests-per-minute ceiling. Shared across clients and worker threads.
class RateLimiter {
public:
    RateLimiter(int max_inflight = 4, int requests_per_minute = 0);

    class Ticket {
    public:
        explicit Ticket(RateLimiter* limiter) : limiter_(limiter) {}
        ~Ticket();
        Ticket(Ticket&& other) noexcept : limiter_(other.limiter_) { other.limiter_ = nullptr; }
        Ticket(const Ticket&) = delete;
        Ticket& operator=(const Ticket&) = delete;
        Ticket& operator=(Ticket&&) = delete;

    private:
        RateLimiter* limiter_;
    };

    Ticket acquire();

private:
    friend class Ticket;
    void release();

    std::mutex mu_;
    std::condition_variable cv_;
    int max_inflight_;
    int inflight_ = 0;
    int rpm_;
    std::deque<std::chrono::steady_clock::time_point> recent_;
};

/// Uniform contract for chat/audio model access. query() consults subclass
/// transport; the base class counts calls so tests (and --offline dry runs)
/// can assert exactly how many times a client was hit.
class ModelClient {
public:
    virtual ~ModelClient() = default;

    ModelResponse query(const ModelRequest& req) {
        ++queries_;
        return do_query(req);
    }
    long query_count() const { return queries_.load(); }
    virtual std::string id() const = 0;

protected:
    virtual ModelResponse do_query(const ModelRequest& req) = 0;

private:
    std::atomic<long> queries_{0};
};

/// Test/scripting client backed by a reply function.
class MockClient : public ModelClient {
public:
    using ReplyFn = std::function<std::string(const ModelRequest&)>;
    explicit MockClient(ReplyFn fn, std::string id = "mock") : fn_(std::move(fn)), id_(std::move(id)) {}
    std::string id() const override { return id_; }

protected:
    ModelResponse do_query(const ModelRequest& req) override;

private:
    ReplyFn fn_;
    std::string id_;
};

/// Serves recorded responses from a directory keyed by idempotency_key.
/// A miss is a hard RemoteFailureError; replay runs never touch the network.
class ReplayClient : public ModelClient {
public:
    explicit ReplayClient(std::string store_dir) : dir_(std::move(store_dir)) {}
    std::string id() const override { return "replay:" + dir_; }

protected:
    ModelResponse do_query(const ModelRequest& req) override;

private:
    std::string dir_;
};

/// Transparent content-addressed cache in front of another client. Stored
/// entries double as a replay store. Credentials never reach the files.
class CachingClient : public ModelClient {
public:
    CachingClient(std::shared_ptr<ModelClient> inner, std::string cache_dir);
    std::string id() const override { return inner_->id(); }
    ModelClient& inner() { return *inner_; }

protected:
    ModelResponse do_query(const ModelRequest& req) override;

private:
    std::shared_ptr<ModelClient> inner_;
    std::string dir_;
    std::mutex mu_;
};

struct RetryPolicy {
    int attempts = 3;
    int backoff_base_ms = 250;  // doubles per attempt
};

/// Minimal JSON-over-HTTP chat transport with bounded retries. The request
/// body is {"model","temperature","max_output_tokens","messages":[{"role",
/// "text","audio_b64"?}]}; the reply may be {"text": ...} or an OpenAI-style
/// choices array. API key is read from api_key_env at construction.
class HttpChatClient : public ModelClient {
public:
    HttpChatClient(std::string endpoint_url, std::string api_key_env = "EMOGRAPH_API_KEY",
                   std::shared_ptr<RateLimiter> limiter = nullptr, RetryPolicy retry = {});
    std::string id() const override { return "http:" + endpoint_; }

protected:
    ModelResponse do_query(const ModelRequest& req) override;

private:
    std::string endpoint_;
    std::string api_key_;
    std::shared_ptr<RateLimiter> limiter_;
    RetryPolicy retry_;
};

/// First match wins: (1) "(X)" with a valid option letter, (2) a standalone
/// uppercase option letter token, (3) a case-insensitive unique emotion-name
/// substring. nullopt = ParseFailure (counted separately from wrong answers).
std::optional<std::string> parse_option_letter(const std::string& text, const LabelSet& labels);

}  // namespace emograph
