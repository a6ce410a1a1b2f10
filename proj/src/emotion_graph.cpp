// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/emotion_graph.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "emograph/errors.hpp"

namespace emograph {

namespace {

std::string display_name(Feature f) {
    std::string name = feature_name(f);
    std::replace(name.begin(), name.end(), '_', ' ');
    return name;
}

std::vector<CrossModalRelation> canonical_relations(const std::vector<CrossModalRelation>& rels) {
    std::vector<CrossModalRelation> sorted = rels;
    std::sort(sorted.begin(), sorted.end(), [](const CrossModalRelation& a, const CrossModalRelation& b) {
        return size_t(a.feature) < size_t(b.feature);
    });
    return sorted;
}

}  // namespace

EmotionGraph assemble_graph(const AcousticAttributes& attrs, const TextAttributes& text,
                            const std::vector<CrossModalRelation>& relations,
                            const Provenance& provenance) {
    if (relations.size() != kNumFeatures) {
        throw InconsistentComponentsError("expected 7 relations, got " +
                                          std::to_string(relations.size()));
    }
    std::array<bool, kNumFeatures> seen{};
    for (const CrossModalRelation& rel : relations) {
        size_t idx = size_t(rel.feature);
        if (seen[idx]) {
            throw InconsistentComponentsError("duplicate relation for feature " +
                                              feature_name(rel.feature));
        }
        seen[idx] = true;
        if (rel.level != attrs.level(rel.feature)) {
            throw InconsistentComponentsError("relation level disagrees with attributes for " +
                                              feature_name(rel.feature));
        }
        if (rel.sentiment != text.sentiment) {
            throw InconsistentComponentsError("relation sentiment disagrees with text sentiment");
        }
    }
    for (size_t i = 0; i < kNumFeatures; ++i) {
        if (!seen[i]) {
            throw InconsistentComponentsError("missing relation for feature " +
                                              feature_name(Feature(i)));
        }
    }
    std::set<std::string> unique_kw;
    for (const std::string& kw : text.keywords) {
        if (kw.empty()) throw InconsistentComponentsError("empty keyword");
        if (!unique_kw.insert(kw).second) {
            throw InconsistentComponentsError("duplicate keyword: " + kw);
        }
    }
    for (const auto& [field, value] :
         std::initializer_list<std::pair<const char*, const std::string&>>{
             {"corpus_id", provenance.corpus_id},
             {"calibration_id", provenance.calibration_id},
             {"text_backend_id", provenance.text_backend_id},
             {"relation_backend_id", provenance.relation_backend_id},
             {"transcript_hash", provenance.transcript_hash},
             {"pipeline_version", provenance.pipeline_version}}) {
        if (value.empty()) {
            throw InconsistentComponentsError(std::string("provenance field empty: ") + field);
        }
    }

    EmotionGraph graph;
    graph.acoustic = attrs;
    graph.sentiment = text.sentiment;
    graph.keywords = text.keywords;
    graph.relations = canonical_relations(relations);
    graph.provenance = provenance;
    return graph;
}

std::string serialize_canonical(const EmotionGraph& graph) {
    nlohmann::ordered_json j;
    if (graph.acoustic) {
        nlohmann::ordered_json feats;
        for (Feature f : all_features()) feats[feature_name(f)] = level_name(graph.acoustic->level(f));
        j["acoustic_features"] = feats;
    } else if (graph.acoustic_description) {
        j["acoustic_features"] = *graph.acoustic_description;
    }
    if (graph.sentiment) j["textual_sentiment"] = sentiment_name(*graph.sentiment);
    if (graph.keywords) j["keywords"] = *graph.keywords;
    if (graph.relations) {
        nlohmann::ordered_json rels = nlohmann::ordered_json::array();
        for (const CrossModalRelation& rel : canonical_relations(*graph.relations)) {
            nlohmann::ordered_json r;
            r["feature"] = feature_name(rel.feature);
            r["level"] = level_name(rel.level);
            r["relation"] = relation_name(rel.relation);
            if (!rel.rationale.empty()) r["rationale"] = rel.rationale;
            rels.push_back(r);
        }
        j["cross_modal_relations"] = rels;
    }
    if (graph.provenance) {
        const Provenance& p = *graph.provenance;
        j["provenance"] = {{"corpus_id", p.corpus_id},
                           {"calibration_id", p.calibration_id},
                           {"text_backend_id", p.text_backend_id},
                           {"relation_backend_id", p.relation_backend_id},
                           {"transcript_hash", p.transcript_hash},
                           {"pipeline_version", p.pipeline_version}};
    }
    return j.dump(2);
}

EmotionGraph parse_canonical(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    EmotionGraph graph;
    if (j.contains("acoustic_features")) {
        const nlohmann::json& feats = j.at("acoustic_features");
        if (feats.is_string()) {
            graph.acoustic_description = feats.get<std::string>();
        } else {
            AcousticAttributes attrs;
            size_t count = 0;
            for (const auto& [key, value] : feats.items()) {
                attrs.set(feature_from_name(key), level_from_name(value.get<std::string>()));
                ++count;
            }
            if (count != kNumFeatures) {
                throw InconsistentComponentsError("acoustic_features must carry all 7 features");
            }
            graph.acoustic = attrs;
        }
    }
    if (j.contains("textual_sentiment")) {
        graph.sentiment = sentiment_from_name(j.at("textual_sentiment").get<std::string>());
    }
    if (j.contains("keywords")) {
        graph.keywords = j.at("keywords").get<std::vector<std::string>>();
    }
    if (j.contains("cross_modal_relations")) {
        std::vector<CrossModalRelation> rels;
        for (const nlohmann::json& r : j.at("cross_modal_relations")) {
            CrossModalRelation rel;
            rel.feature = feature_from_name(r.at("feature").get<std::string>());
            rel.level = level_from_name(r.at("level").get<std::string>());
            rel.relation = relation_from_name(r.at("relation").get<std::string>());
            rel.sentiment = graph.sentiment.value_or(Sentiment::neutral);
            rel.rationale = r.value("rationale", "");
            rels.push_back(rel);
        }
        graph.relations = std::move(rels);
    }
    if (j.contains("provenance")) {
        const nlohmann::json& p = j.at("provenance");
        Provenance prov;
        prov.corpus_id = p.value("corpus_id", "");
        prov.calibration_id = p.value("calibration_id", "");
        prov.text_backend_id = p.value("text_backend_id", "");
        prov.relation_backend_id = p.value("relation_backend_id", "");
        prov.transcript_hash = p.value("transcript_hash", "");
        prov.pipeline_version = p.value("pipeline_version", "");
        graph.provenance = prov;
    }
    return graph;
}

size_t estimate_tokens(const std::string& text) { return (text.size() + 3) / 4; }

namespace {

// Applies one drop step; returns false once nothing is left to drop.
// The step order is the documented truncation priority.
bool drop_one(EmotionGraph& g) {
    if (g.provenance) {
        g.provenance.reset();
        return true;
    }
    if (g.relations) {
        for (CrossModalRelation& rel : *g.relations) {
            if (!rel.rationale.empty()) {
                for (CrossModalRelation& r2 : *g.relations) r2.rationale.clear();
                return true;
            }
        }
    }
    if (g.keywords && g.keywords->size() > 3) {
        g.keywords->pop_back();
        return true;
    }
    if (g.relations) {
        std::vector<CrossModalRelation>& rels = *g.relations;
        for (auto it = rels.rbegin(); it != rels.rend(); ++it) {
            if (it->relation == Relation::neutral) {
                rels.erase(std::next(it).base());
                return true;
            }
        }
    }
    if (g.keywords) {
        if (!g.keywords->empty()) {
            g.keywords->pop_back();
            if (g.keywords->empty()) g.keywords.reset();
            return true;
        }
        g.keywords.reset();
        return true;
    }
    if (g.relations) {
        if (!g.relations->empty()) {
            g.relations->pop_back();
            if (g.relations->empty()) g.relations.reset();
            return true;
        }
        g.relations.reset();
        return true;
    }
    return false;
}

}  // namespace

EmotionGraph truncate_to_budget_rendered(
    const EmotionGraph& graph, size_t budget_tokens,
    const std::function<std::string(const EmotionGraph&)>& render) {
    EmotionGraph g = graph;
    if (g.relations) g.relations = canonical_relations(*g.relations);
    while (estimate_tokens(render(g)) > budget_tokens) {
        if (!drop_one(g)) {
            throw BudgetInfeasibleError(
                "graph core (acoustic attributes + sentiment) exceeds budget of " +
                std::to_string(budget_tokens) + " tokens");
        }
    }
    return g;
}

EmotionGraph truncate_to_budget(const EmotionGraph& graph, size_t budget_tokens) {
    return truncate_to_budget_rendered(graph, budget_tokens, serialize_canonical);
}

std::string render_freeform(const EmotionGraph& graph) {
    std::vector<std::string> sentences;
    if (graph.acoustic) {
        std::string s = "Acoustic attributes: ";
        bool first = true;
        for (Feature f : all_features()) {
            if (!first) s += ", ";
            s += display_name(f) + " is " + level_name(graph.acoustic->level(f));
            first = false;
        }
        s += ".";
        sentences.push_back(s);
    } else if (graph.acoustic_description) {
        sentences.push_back("Acoustic description: " + *graph.acoustic_description);
    }
    if (graph.sentiment) {
        sentences.push_back("The transcript sentiment is " + sentiment_name(*graph.sentiment) + ".");
    }
    if (graph.keywords) {
        if (graph.keywords->empty()) {
            sentences.push_back("Salient keywords: none.");
        } else {
            std::string s = "Salient keywords: ";
            for (size_t i = 0; i < graph.keywords->size(); ++i) {
                if (i) s += ", ";
                s += (*graph.keywords)[i];
            }
            s += ".";
            sentences.push_back(s);
        }
    }
    if (graph.relations) {
        std::string s = "Cross-modal relations: ";
        const std::vector<CrossModalRelation> rels = canonical_relations(*graph.relations);
        for (size_t i = 0; i < rels.size(); ++i) {
            const CrossModalRelation& rel = rels[i];
            if (i) s += "; ";
            switch (rel.relation) {
                case Relation::supports:
                    s += display_name(rel.feature) + " supports the sentiment";
                    break;
                case Relation::contradicts:
                    s += display_name(rel.feature) + " contradicts the sentiment";
                    break;
                case Relation::neutral:
                    s += display_name(rel.feature) + " is neutral with respect to the sentiment";
                    break;
            }
            if (!rel.rationale.empty()) s += " (" + rel.rationale + ")";
        }
        s += ".";
        sentences.push_back(s);
    }
    if (graph.provenance) {
        const Provenance& p = *graph.provenance;
        sentences.push_back("Provenance: corpus " + p.corpus_id + ", calibration " +
                            p.calibration_id + ", text backend " + p.text_backend_id +
                            ", relation backend " + p.relation_backend_id + ", transcript " +
                            p.transcript_hash + ", pipeline " + p.pipeline_version + ".");
    }
    std::string out;
    for (size_t i = 0; i < sentences.size(); ++i) {
        if (i) out += "\n";
        out += sentences[i];
    }
    return out;
}

std::string render_flat(const EmotionGraph& graph) {
    std::vector<std::string> lines;
    if (graph.acoustic) {
        for (Feature f : all_features()) {
            lines.push_back(feature_name(f) + ": " + level_name(graph.acoustic->level(f)));
        }
    } else if (graph.acoustic_description) {
        lines.push_back("acoustic_description: " + *graph.acoustic_description);
    }
    if (graph.sentiment) lines.push_back("textual_sentiment: " + sentiment_name(*graph.sentiment));
    if (graph.keywords) {
        std::string kw;
        for (size_t i = 0; i < graph.keywords->size(); ++i) {
            if (i) kw += ", ";
            kw += (*graph.keywords)[i];
        }
        lines.push_back("keywords: " + (kw.empty() ? std::string("none") : kw));
    }
    if (graph.relations) {
        for (const CrossModalRelation& rel : canonical_relations(*graph.relations)) {
            lines.push_back("relation_" + feature_name(rel.feature) + ": " +
                            relation_name(rel.relation));
        }
    }
    if (graph.provenance) {
        const Provenance& p = *graph.provenance;
        lines.push_back("corpus_id: " + p.corpus_id);
        lines.push_back("calibration_id: " + p.calibration_id);
        lines.push_back("text_backend_id: " + p.text_backend_id);
        lines.push_back("relation_backend_id: " + p.relation_backend_id);
        lines.push_back("transcript_hash: " + p.transcript_hash);
        lines.push_back("pipeline_version: " + p.pipeline_version);
    }
    std::string out;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i) out += "\n";
        out += lines[i];
    }
    return out;
}

}  // namespace emograph
