// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/model_client.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "emograph/errors.hpp"
#include "emograph/prompting.hpp"
#include "emograph/sha256.hpp"

namespace emograph {

namespace fs = std::filesystem;

ModelRequest make_request(std::optional<std::string> audio_path, std::string text,
                          ModelParams params) {
    ModelRequest req;
    req.audio_path = std::move(audio_path);
    req.text = std::move(text);
    req.params = std::move(params);
    std::string audio_hash = req.audio_path ? sha256_file_hex(*req.audio_path) : "no-audio";
    char params_buf[96];
    std::snprintf(params_buf, sizeof(params_buf), "%.17g\n%d", req.params.temperature,
                  req.params.max_output_tokens);
    req.idempotency_key = sha256_hex(audio_hash + "\n" + req.text + "\n" + req.params.model_id +
                                     "\n" + params_buf);
    return req;
}

RateLimiter::RateLimiter(int max_inflight, int requests_per_minute)
    : max_inflight_(max_inflight > 0 ? max_inflight : 1), rpm_(requests_per_minute) {}

RateLimiter::Ticket RateLimiter::acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    for (;;) {
        auto now = std::chrono::steady_clock::now();
        while (!recent_.empty() && now - recent_.front() > std::chrono::minutes(1)) {
            recent_.pop_front();
        }
        if (inflight_ < max_inflight_ && (rpm_ <= 0 || int(recent_.size()) < rpm_)) {
            ++inflight_;
            recent_.push_back(now);
            return Ticket(this);
        }
        if (inflight_ >= max_inflight_) {
            cv_.wait(lock);
        } else {
            auto wake = recent_.front() + std::chrono::minutes(1);
            cv_.wait_until(lock, wake);
        }
    }
}

void RateLimiter::release() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        --inflight_;
    }
    cv_.notify_all();
}

RateLimiter::Ticket::~Ticket() {
    if (limiter_) limiter_->release();
}

ModelResponse MockClient::do_query(const ModelRequest& req) {
    ModelResponse resp;
    resp.text = fn_(req);
    resp.model_id = id_;
    resp.latency_ms = 0;
    resp.cached = false;
    if (resp.text.empty()) throw RemoteFailureError("mock produced an empty completion");
    return resp;
}

namespace {

std::string cache_path(const std::string& dir, const std::string& key) {
    return dir + "/" + key + ".json";
}

ModelResponse load_stored(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RemoteFailureError("cannot read stored response: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    ModelResponse resp;
    resp.text = j.at("text").get<std::string>();
    resp.model_id = j.value("model_id", "");
    resp.latency_ms = 0;
    resp.cached = true;
    if (resp.text.empty()) throw RemoteFailureError("stored response has empty text: " + path);
    return resp;
}

void store_response(const std::string& path, const ModelRequest& req, const ModelResponse& resp) {
    nlohmann::ordered_json j;
    j["idempotency_key"] = req.idempotency_key;
    j["model_id"] = resp.model_id;
    j["text"] = resp.text;
    j["latency_ms"] = resp.latency_ms;
    j["request_text"] = req.text;  // captured for audit; credentials never enter this file
    j["audio_path"] = req.audio_path ? *req.audio_path : "";
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write cache entry: " + tmp);
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp, path);
}

}  // namespace

ModelResponse ReplayClient::do_query(const ModelRequest& req) {
    std::string path = cache_path(dir_, req.idempotency_key);
    if (!fs::exists(path)) {
        throw RemoteFailureError("replay store miss for key " + req.idempotency_key +
                                 " (store: " + dir_ + ")");
    }
    return load_stored(path);
}

CachingClient::CachingClient(std::shared_ptr<ModelClient> inner, std::string cache_dir)
    : inner_(std::move(inner)), dir_(std::move(cache_dir)) {
    fs::create_directories(dir_);
}

ModelResponse CachingClient::do_query(const ModelRequest& req) {
    std::string path = cache_path(dir_, req.idempotency_key);
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (fs::exists(path)) return load_stored(path);
    }
    ModelResponse resp = inner_->query(req);
    std::lock_guard<std::mutex> lock(mu_);
    if (!fs::exists(path)) store_response(path, req, resp);
    return resp;
}

HttpChatClient::HttpChatClient(std::string endpoint_url, std::string api_key_env,
                               std::shared_ptr<RateLimiter> limiter, RetryPolicy retry)
    : endpoint_(std::move(endpoint_url)), limiter_(std::move(limiter)), retry_(retry) {
    if (const char* key = std::getenv(api_key_env.c_str())) api_key_ = key;
}

ModelResponse HttpChatClient::do_query(const ModelRequest& req) {
    // Split scheme://host[:port]/path
    size_t scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("bad endpoint URL: " + endpoint_);
    size_t path_start = endpoint_.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? endpoint_ : endpoint_.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : endpoint_.substr(path_start);

    nlohmann::ordered_json message;
    message["role"] = "user";
    message["text"] = req.text;
    if (req.audio_path) {
        std::ifstream in(*req.audio_path, std::ios::binary);
        if (!in) throw RemoteFailureError("cannot read audio file: " + *req.audio_path);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        static const char* b64 = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
        std::string encoded;
        encoded.reserve((bytes.size() + 2) / 3 * 4);
        for (size_t i = 0; i < bytes.size(); i += 3) {
            uint32_t v = uint32_t(uint8_t(bytes[i])) << 16;
            if (i + 1 < bytes.size()) v |= uint32_t(uint8_t(bytes[i + 1])) << 8;
            if (i + 2 < bytes.size()) v |= uint32_t(uint8_t(bytes[i + 2]));
            encoded.push_back(b64[(v >> 18) & 63]);
            encoded.push_back(b64[(v >> 12) & 63]);
            encoded.push_back(i + 1 < bytes.size() ? b64[(v >> 6) & 63] : '=');
            encoded.push_back(i + 2 < bytes.size() ? b64[v & 63] : '=');
        }
        message["audio_b64"] = encoded;
    }
    nlohmann::ordered_json body;
    body["model"] = req.params.model_id;
    body["temperature"] = req.params.temperature;
    body["max_output_tokens"] = req.params.max_output_tokens;
    body["messages"] = nlohmann::ordered_json::array({message});
    std::string payload = body.dump();

    std::string last_error = "no attempts made";
    for (int attempt = 0; attempt < retry_.attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(retry_.backoff_base_ms << (attempt - 1)));
        }
        std::optional<RateLimiter::Ticket> ticket;
        if (limiter_) ticket.emplace(limiter_->acquire());

        httplib::Client cli(base);
        cli.set_connection_timeout(10, 0);
        cli.set_read_timeout(120, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto t0 = std::chrono::steady_clock::now();
        httplib::Result result = cli.Post(path, headers, payload, "application/json");
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();

        if (!result) {
            if (result.error() == httplib::Error::ConnectionTimeout ||
                result.error() == httplib::Error::Read) {
                last_error = "timeout talking to " + endpoint_;
            } else {
                last_error = "transport error " + httplib::to_string(result.error());
            }
            continue;
        }
        if (result->status == 401 || result->status == 403) {
            throw AuthError("endpoint rejected credentials (HTTP " +
                            std::to_string(result->status) + ")");
        }
        if (result->status == 429 || result->status >= 500) {
            last_error = "HTTP " + std::to_string(result->status);
            continue;
        }
        if (result->status != 200) {
            throw RemoteFailureError("HTTP " + std::to_string(result->status) + " from " +
                                     endpoint_ + ": " + result->body);
        }
        nlohmann::json j = nlohmann::json::parse(result->body, nullptr, false);
        if (j.is_discarded()) {
            last_error = "unparseable response body";
            continue;
        }
        ModelResponse resp;
        if (j.contains("text")) {
            resp.text = j.at("text").get<std::string>();
        } else if (j.contains("choices") && !j["choices"].empty()) {
            resp.text = j["choices"][0].at("message").at("content").get<std::string>();
        } else {
            last_error = "response carries neither 'text' nor 'choices'";
            continue;
        }
        if (resp.text.empty()) throw RemoteFailureError("endpoint returned an empty completion");
        resp.model_id = req.params.model_id;
        resp.latency_ms = long(elapsed);
        resp.cached = false;
        return resp;
    }
    if (last_error.rfind("timeout", 0) == 0) throw TimeoutError(last_error);
    throw RemoteFailureError("remote failed after " + std::to_string(retry_.attempts) +
                             " attempts: " + last_error);
}

std::optional<std::string> parse_option_letter(const std::string& text, const LabelSet& labels) {
    // Rule 1: "(X)" with a valid option letter.
    for (size_t i = 0; i + 2 < text.size(); ++i) {
        if (text[i] == '(' && text[i + 2] == ')') {
            if (const std::string* name = labels.name_for_letter(text[i + 1])) return *name;
        }
    }
    // Rule 2: a standalone uppercase option letter token.
    for (size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (!std::isupper(c)) continue;
        bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
        bool right_ok = i + 1 >= text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1]));
        if (left_ok && right_ok) {
            if (const std::string* name = labels.name_for_letter(char(c))) return *name;
        }
    }
    // Rule 3: unique case-insensitive emotion-name substring.
    std::string lower = text;
    for (char& c : lower) c = char(std::tolower(static_cast<unsigned char>(c)));
    const std::string* hit = nullptr;
    size_t hits = 0;
    for (const LabelSet::Option& opt : labels.options) {
        if (lower.find(opt.name) != std::string::npos) {
            ++hits;
            hit = &opt.name;
        }
    }
    if (hits == 1) return *hit;
    return std::nullopt;
}

}  // namespace emograph
