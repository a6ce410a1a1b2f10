// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "emograph/model_client.hpp"

namespace emograph {

enum class Sentiment { positive = 0, negative, neutral };
const std::string& sentiment_name(Sentiment s);
Sentiment sentiment_from_name(const std::string& name);

/// Sentence-level sentiment plus emotionally salient keywords.
struct TextAttributes {
    Sentiment sentiment = Sentiment::neutral;
    std::vector<std::string> keywords;  // unique, lowercase, rank order, <= k
    std::string backend_id;
    std::string transcript_hash;
};

/// Word lists backing the offline analyzers. Shipped as editable data
/// (data/lexicon.json); English only.
struct Lexicon {
    std::set<std::string> positive;
    std::set<std::string> negative;
    std::set<std::string> emotion;  // keyword-boost terms
    std::set<std::string> stopwords;

    static Lexicon load(const std::string& path);
};

class SentimentBackend {
public:
    virtual ~SentimentBackend() = default;
    virtual Sentiment analyze(const std::string& transcript) = 0;
    virtual std::string id() const = 0;
};

class KeywordBackend {
public:
    virtual ~KeywordBackend() = default;
    virtual std::vector<std::string> extract(const std::string& transcript, size_t k) = 0;
    virtual std::string id() const = 0;
};

/// Deterministic lexicon majority vote; empty or tied input is neutral.
class OfflineSentimentBackend : public SentimentBackend {
public:
    explicit OfflineSentimentBackend(std::shared_ptr<const Lexicon> lexicon)
        : lexicon_(std::move(lexicon)) {}
    Sentiment analyze(const std::string& transcript) override;
    std::string id() const override { return "offline-lexicon-v1"; }

private:
    std::shared_ptr<const Lexicon> lexicon_;
};

/// Term weight = tf x 2 for emotion-lexicon hits, stopwords removed, ties
/// broken lexicographically.
class OfflineKeywordBackend : public KeywordBackend {
public:
    explicit OfflineKeywordBackend(std::shared_ptr<const Lexicon> lexicon)
        : lexicon_(std::move(lexicon)) {}
    std::vector<std::string> extract(const std::string& transcript, size_t k) override;
    std::string id() const override { return "offline-tf-v1"; }

private:
    std::shared_ptr<const Lexicon> lexicon_;
};

/// Prompts a chat model for exactly one of the three labels; one retry on
/// malformed output, then neutral fallback. Transport failures surface as
/// BackendUnavailableError.
class RemoteSentimentBackend : public SentimentBackend {
public:
    RemoteSentimentBackend(std::shared_ptr<ModelClient> client, ModelParams params,
                           std::string prompt_template);
    Sentiment analyze(const std::string& transcript) override;
    std::string id() const override { return "remote-sentiment:" + params_.model_id; }

private:
    std::shared_ptr<ModelClient> client_;
    ModelParams params_;
    std::string template_;
};

class RemoteKeywordBackend : public KeywordBackend {
public:
    RemoteKeywordBackend(std::shared_ptr<ModelClient> client, ModelParams params,
                         std::string prompt_template);
    std::vector<std::string> extract(const std::string& transcript, size_t k) override;
    std::string id() const override { return "remote-keywords:" + params_.model_id; }

private:
    std::shared_ptr<ModelClient> client_;
    ModelParams params_;
    std::string template_;
};

/// Empty transcripts are neutral without consulting the backend.
Sentiment analyze_sentiment(const std::string& transcript, SentimentBackend& backend);

/// Up to k backend-ranked keywords; k >= 1.
std::vector<std::string> extract_keywords(const std::string& transcript, KeywordBackend& backend,
                                          size_t k);

/// Convenience: runs both analyzers and stamps backend id + transcript hash.
TextAttributes build_text_attributes(const std::string& transcript, SentimentBackend& sentiment,
                                     KeywordBackend& keywords, size_t k = 5);

/// Lowercased word tokens (ASCII); exposed for the offline backends' tests.
std::vector<std::string> tokenize_words(const std::string& text);

}  // namespace emograph
