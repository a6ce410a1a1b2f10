// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/relations.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emograph/errors.hpp"

namespace emograph {

namespace {

const std::array<std::string, 3> kRelationNames = {"supports", "contradicts", "neutral"};

bool is_high_arousal(Feature f) {
    return f == Feature::pitch || f == Feature::volume || f == Feature::intensity ||
           f == Feature::speech_rate || f == Feature::articulation_rate;
}

bool is_voice_quality(Feature f) { return f == Feature::jitter || f == Feature::shimmer; }

std::string substitute(std::string tpl, const std::string& key, const std::string& value) {
    std::string needle = "{" + key + "}";
    size_t pos = tpl.find(needle);
    while (pos != std::string::npos) {
        tpl.replace(pos, needle.size(), value);
        pos = tpl.find(needle, pos + value.size());
    }
    return tpl;
}

}  // namespace

const std::string& relation_name(Relation r) { return kRelationNames[size_t(r)]; }

Relation relation_from_name(const std::string& name) {
    for (size_t i = 0; i < kRelationNames.size(); ++i) {
        if (kRelationNames[i] == name) return Relation(i);
    }
    throw Error("unknown relation: " + name);
}

RelationTable RelationTable::default_table() {
    RelationTable t;
    for (Feature f : all_features()) {
        for (Level l : {Level::low, Level::normal, Level::high}) {
            for (Sentiment s : {Sentiment::positive, Sentiment::negative, Sentiment::neutral}) {
                Relation r = Relation::neutral;
                if (l != Level::normal && s != Sentiment::neutral) {
                    if (is_high_arousal(f)) {
                        if (l == Level::high) {
                            r = Relation::supports;
                        } else if (s == Sentiment::positive) {  // low-arousal cue vs positive
                            r = Relation::contradicts;
                        }
                    } else if (is_voice_quality(f) && l == Level::high) {
                        r = s == Sentiment::negative ? Relation::supports : Relation::contradicts;
                    }
                }
                t.set(f, l, s, r);
            }
        }
    }
    return t;
}

RelationTable RelationTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read relation table: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    const nlohmann::json& rules = j.at("rules");
    RelationTable t;
    for (Feature f : all_features()) {
        const nlohmann::json& by_level = rules.at(feature_name(f));
        for (Level l : {Level::low, Level::normal, Level::high}) {
            const nlohmann::json& by_sent = by_level.at(level_name(l));
            for (Sentiment s : {Sentiment::positive, Sentiment::negative, Sentiment::neutral}) {
                t.set(f, l, s, relation_from_name(by_sent.at(sentiment_name(s)).get<std::string>()));
            }
        }
    }
    return t;
}

void RelationTable::save(const std::string& path, const std::string& version) const {
    nlohmann::ordered_json rules;
    for (Feature f : all_features()) {
        nlohmann::ordered_json by_level;
        for (Level l : {Level::low, Level::normal, Level::high}) {
            nlohmann::ordered_json by_sent;
            for (Sentiment s : {Sentiment::positive, Sentiment::negative, Sentiment::neutral}) {
                by_sent[sentiment_name(s)] = relation_name(at(f, l, s));
            }
            by_level[level_name(l)] = by_sent;
        }
        rules[feature_name(f)] = by_level;
    }
    nlohmann::ordered_json j;
    j["version"] = version;
    j["rules"] = rules;
    std::ofstream out(path);
    if (!out) throw Error("cannot write relation table: " + path);
    out << j.dump(2) << "\n";
}

Relation rule_table_relation(const RelationTable& table, Feature feature, Level level,
                             Sentiment sentiment) {
    return table.at(feature, level, sentiment);
}

std::vector<CrossModalRelation> OfflineRelationBackend::infer(const AcousticAttributes& attrs,
                                                              Sentiment sentiment) {
    std::vector<CrossModalRelation> out;
    out.reserve(kNumFeatures);
    for (Feature f : all_features()) {
        CrossModalRelation rel;
        rel.feature = f;
        rel.level = attrs.level(f);
        rel.sentiment = sentiment;
        rel.relation = rule_table_relation(table_, f, rel.level, sentiment);
        out.push_back(rel);
    }
    return out;
}

RemoteRelationBackend::RemoteRelationBackend(std::shared_ptr<ModelClient> client,
                                             ModelParams params, std::string prompt_template,
                                             bool fallback_to_rules, RelationTable fallback)
    : client_(std::move(client)),
      params_(std::move(params)),
      template_(std::move(prompt_template)),
      fallback_to_rules_(fallback_to_rules),
      fallback_(std::move(fallback)) {}

std::vector<CrossModalRelation> RemoteRelationBackend::infer(const AcousticAttributes& attrs,
                                                             Sentiment sentiment) {
    std::string cues;
    for (Feature f : all_features()) {
        if (!cues.empty()) cues += ", ";
        cues += feature_name(f) + ": " + level_name(attrs.level(f));
    }
    std::string prompt = substitute(template_, "cues", cues);
    prompt = substitute(prompt, "sentiment", sentiment_name(sentiment));

    auto parse_reply = [&](const std::string& reply) -> std::vector<CrossModalRelation> {
        // Expected grammar: seven lines, each "<feature>: <relation>[ - rationale]".
        std::vector<std::optional<CrossModalRelation>> found(kNumFeatures);
        std::istringstream lines(reply);
        std::string line;
        while (std::getline(lines, line)) {
            size_t colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string head = line.substr(0, colon);
            std::string tail = line.substr(colon + 1);
            for (char& c : head) c = char(std::tolower(static_cast<unsigned char>(c)));
            std::string lowered_tail = tail;
            for (char& c : lowered_tail) c = char(std::tolower(static_cast<unsigned char>(c)));
            head.erase(0, head.find_first_not_of(" \t-*"));
            size_t tail_end = head.find_last_not_of(" \t");
            if (tail_end != std::string::npos) head.resize(tail_end + 1);
            Feature f;
            try {
                f = feature_from_name(head);
            } catch (const MissingFeatureError&) {
                continue;
            }
            std::optional<Relation> rel;
            for (size_t i = 0; i < kRelationNames.size(); ++i) {
                if (lowered_tail.find(kRelationNames[i]) != std::string::npos) {
                    if (rel) {
                        rel.reset();  // ambiguous line
                        break;
                    }
                    rel = Relation(i);
                }
            }
            if (!rel) continue;
            CrossModalRelation r;
            r.feature = f;
            r.level = attrs.level(f);
            r.sentiment = sentiment;
            r.relation = *rel;
            size_t dash = tail.find(" - ");
            if (dash != std::string::npos) {
                r.rationale = tail.substr(dash + 3);
                while (!r.rationale.empty() &&
                       (r.rationale.back() == '\r' || r.rationale.back() == '\n')) {
                    r.rationale.pop_back();
                }
            }
            found[size_t(f)] = r;
        }
        std::vector<CrossModalRelation> out;
        for (Feature f : all_features()) {
            if (!found[size_t(f)]) {
                throw MalformedRelationResponseError("relation reply missing feature " +
                                                     feature_name(f));
            }
            out.push_back(*found[size_t(f)]);
        }
        return out;
    };

    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string text = prompt;
        if (attempt == 1) {
            text +=
                "\n\nReply with exactly seven lines, one per cue, formatted as "
                "'<cue>: supports|contradicts|neutral'.";
        }
        ModelResponse resp;
        try {
            resp = client_->query(make_request(std::nullopt, text, params_));
        } catch (const Error& e) {
            if (fallback_to_rules_ && attempt == 1) break;
            if (!fallback_to_rules_) {
                throw BackendUnavailableError(std::string("relation backend: ") + e.what());
            }
            continue;
        }
        try {
            return parse_reply(resp.text);
        } catch (const MalformedRelationResponseError&) {
            if (attempt == 1 && !fallback_to_rules_) throw;
        }
    }
    OfflineRelationBackend rules(fallback_);
    return rules.infer(attrs, sentiment);
}

std::vector<CrossModalRelation> infer_relations(const AcousticAttributes& attrs,
                                                Sentiment sentiment, RelationBackend& backend) {
    std::vector<CrossModalRelation> rels = backend.infer(attrs, sentiment);
    if (rels.size() != kNumFeatures) {
        throw MalformedRelationResponseError("backend returned " + std::to_string(rels.size()) +
                                             " relations, want 7");
    }
    return rels;
}

}  // namespace emograph
