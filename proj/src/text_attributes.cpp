// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/text_attributes.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "emograph/errors.hpp"
#include "emograph/sha256.hpp"

namespace emograph {

namespace {

const std::array<std::string, 3> kSentimentNames = {"positive", "negative", "neutral"};

std::string substitute(std::string tpl, const std::string& key, const std::string& value) {
    std::string needle = "{" + key + "}";
    size_t pos = tpl.find(needle);
    while (pos != std::string::npos) {
        tpl.replace(pos, needle.size(), value);
        pos = tpl.find(needle, pos + value.size());
    }
    return tpl;
}

std::string lower_ascii(std::string s) {
    for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

const std::string& sentiment_name(Sentiment s) { return kSentimentNames[size_t(s)]; }

Sentiment sentiment_from_name(const std::string& name) {
    for (size_t i = 0; i < kSentimentNames.size(); ++i) {
        if (kSentimentNames[i] == name) return Sentiment(i);
    }
    throw Error("unknown sentiment: " + name);
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read lexicon file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    Lexicon lex;
    for (const auto& [field, target] :
         std::initializer_list<std::pair<const char*, std::set<std::string>*>>{
             {"positive", &lex.positive},
             {"negative", &lex.negative},
             {"emotion", &lex.emotion},
             {"stopwords", &lex.stopwords}}) {
        if (!j.contains(field)) throw ConfigError("lexicon missing field '" + std::string(field) + "'");
        for (const auto& w : j.at(field)) target->insert(lower_ascii(w.get<std::string>()));
    }
    return lex;
}

std::vector<std::string> tokenize_words(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char raw : text) {
        unsigned char c = static_cast<unsigned char>(raw);
        if (std::isalnum(c) || raw == '\'') {
            cur.push_back(char(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    for (std::string& t : tokens) {
        while (!t.empty() && t.front() == '\'') t.erase(t.begin());
        while (!t.empty() && t.back() == '\'') t.pop_back();
    }
    std::erase_if(tokens, [](const std::string& t) { return t.empty(); });
    return tokens;
}

Sentiment OfflineSentimentBackend::analyze(const std::string& transcript) {
    size_t pos = 0, neg = 0;
    for (const std::string& tok : tokenize_words(transcript)) {
        if (lexicon_->positive.count(tok)) ++pos;
        if (lexicon_->negative.count(tok)) ++neg;
    }
    if (pos > neg) return Sentiment::positive;
    if (neg > pos) return Sentiment::negative;
    return Sentiment::neutral;
}

std::vector<std::string> OfflineKeywordBackend::extract(const std::string& transcript, size_t k) {
    std::map<std::string, size_t> tf;
    for (const std::string& tok : tokenize_words(transcript)) {
        if (lexicon_->stopwords.count(tok)) continue;
        ++tf[tok];
    }
    std::vector<std::pair<std::string, size_t>> weighted;
    weighted.reserve(tf.size());
    for (const auto& [term, count] : tf) {
        size_t boost = lexicon_->emotion.count(term) ? 2 : 1;
        weighted.emplace_back(term, count * boost);
    }
    std::sort(weighted.begin(), weighted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> out;
    for (const auto& [term, weight] : weighted) {
        if (out.size() >= k) break;
        out.push_back(term);
    }
    return out;
}

RemoteSentimentBackend::RemoteSentimentBackend(std::shared_ptr<ModelClient> client,
                                               ModelParams params, std::string prompt_template)
    : client_(std::move(client)), params_(std::move(params)), template_(std::move(prompt_template)) {}

Sentiment RemoteSentimentBackend::analyze(const std::string& transcript) {
    std::string prompt = substitute(template_, "transcript", transcript);
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string text = prompt;
        if (attempt == 1) {
            text += "\n\nAnswer with exactly one word: positive, negative, or neutral.";
        }
        ModelResponse resp;
        try {
            resp = client_->query(make_request(std::nullopt, text, params_));
        } catch (const Error& e) {
            throw BackendUnavailableError(std::string("sentiment backend: ") + e.what());
        }
        std::string reply = lower_ascii(resp.text);
        size_t hits = 0;
        Sentiment found = Sentiment::neutral;
        for (size_t i = 0; i < kSentimentNames.size(); ++i) {
            if (reply.find(kSentimentNames[i]) != std::string::npos) {
                ++hits;
                found = Sentiment(i);
            }
        }
        if (hits == 1) return found;
    }
    return Sentiment::neutral;  // documented fallback after one retry
}

RemoteKeywordBackend::RemoteKeywordBackend(std::shared_ptr<ModelClient> client, ModelParams params,
                                           std::string prompt_template)
    : client_(std::move(client)), params_(std::move(params)), template_(std::move(prompt_template)) {}

std::vector<std::string> RemoteKeywordBackend::extract(const std::string& transcript, size_t k) {
    std::string prompt = substitute(template_, "k", std::to_string(k));
    prompt = substitute(prompt, "transcript", transcript);
    ModelResponse resp;
    try {
        resp = client_->query(make_request(std::nullopt, prompt, params_));
    } catch (const Error& e) {
        throw BackendUnavailableError(std::string("keyword backend: ") + e.what());
    }
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        // trim
        size_t a = cur.find_first_not_of(" \t\r\n");
        size_t b = cur.find_last_not_of(" \t\r\n");
        if (a != std::string::npos) {
            std::string term = lower_ascii(cur.substr(a, b - a + 1));
            if (!term.empty() && std::find(out.begin(), out.end(), term) == out.end() &&
                out.size() < k) {
                out.push_back(term);
            }
        }
        cur.clear();
    };
    for (char c : resp.text) {
        if (c == ',' || c == '\n' || c == ';') {
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return out;
}

Sentiment analyze_sentiment(const std::string& transcript, SentimentBackend& backend) {
    if (tokenize_words(transcript).empty()) return Sentiment::neutral;
    return backend.analyze(transcript);
}

std::vector<std::string> extract_keywords(const std::string& transcript, KeywordBackend& backend,
                                          size_t k) {
    if (k == 0) throw ConfigError("keyword count k must be >= 1");
    if (tokenize_words(transcript).empty()) return {};
    std::vector<std::string> kws = backend.extract(transcript, k);
    if (kws.size() > k) kws.resize(k);
    return kws;
}

TextAttributes build_text_attributes(const std::string& transcript, SentimentBackend& sentiment,
                                     KeywordBackend& keywords, size_t k) {
    TextAttributes attrs;
    attrs.sentiment = analyze_sentiment(transcript, sentiment);
    attrs.keywords = extract_keywords(transcript, keywords, k);
    attrs.backend_id = sentiment.id() + "+" + keywords.id();
    attrs.transcript_hash = sha256_hex(transcript);
    return attrs;
}

}  // namespace emograph
