// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "emograph/calibration.hpp"
#include "emograph/model_client.hpp"
#include "emograph/text_attributes.hpp"

namespace emograph {

enum class Relation { supports = 0, contradicts, neutral };
const std::string& relation_name(Relation r);
Relation relation_from_name(const std::string& name);

/// One acoustic cue judged against the textual sentiment.
struct CrossModalRelation {
    Feature feature = Feature::pitch;
    Level level = Level::normal;
    Sentiment sentiment = Sentiment::neutral;
    Relation relation = Relation::neutral;
    std::string rationale;  // remote backend only
};

/// Total 7x3x3 feature/level/sentiment -> relation lookup, shipped as a
/// versioned data file so experiments can swap the heuristic.
class RelationTable {
public:
    Relation at(Feature f, Level l, Sentiment s) const {
        return cells_[size_t(f)][size_t(l)][size_t(s)];
    }
    void set(Feature f, Level l, Sentiment s, Relation r) {
        cells_[size_t(f)][size_t(l)][size_t(s)] = r;
    }

    /// Built-in default: normal levels and neutral sentiment are neutral;
    /// high-arousal cues (pitch/volume/intensity/rates) at high level support
    /// non-neutral sentiment and contradict positive sentiment at low level;
    /// high jitter/shimmer supports negative and contradicts positive.
    static RelationTable default_table();

    static RelationTable load(const std::string& path);
    void save(const std::string& path, const std::string& version = "1") const;

private:
    std::array<std::array<std::array<Relation, 3>, 3>, kNumFeatures> cells_{};
};

/// Single total lookup; never fails.
Relation rule_table_relation(const RelationTable& table, Feature feature, Level level,
                             Sentiment sentiment);

class RelationBackend {
public:
    virtual ~RelationBackend() = default;
    virtual std::vector<CrossModalRelation> infer(const AcousticAttributes& attrs,
                                                  Sentiment sentiment) = 0;
    virtual std::string id() const = 0;
};

class OfflineRelationBackend : public RelationBackend {
public:
    explicit OfflineRelationBackend(RelationTable table) : table_(std::move(table)) {}
    std::vector<CrossModalRelation> infer(const AcousticAttributes& attrs,
                                          Sentiment sentiment) override;
    std::string id() const override { return "offline-rule-table-v1"; }

private:
    RelationTable table_;
};

/// One batched call per utterance listing all seven cue:level pairs; expects
/// a 7-line "feature: relation" reply. A malformed reply is retried once and
/// then either falls back to the rule table (if enabled) or raises
/// MalformedRelationResponseError; partial relation sets are never produced.
class RemoteRelationBackend : public RelationBackend {
public:
    RemoteRelationBackend(std::shared_ptr<ModelClient> client, ModelParams params,
                          std::string prompt_template, bool fallback_to_rules = true,
                          RelationTable fallback = RelationTable::default_table());
    std::vector<CrossModalRelation> infer(const AcousticAttributes& attrs,
                                          Sentiment sentiment) override;
    std::string id() const override { return "remote-relations:" + params_.model_id; }

private:
    std::shared_ptr<ModelClient> client_;
    ModelParams params_;
    std::string template_;
    bool fallback_to_rules_;
    RelationTable fallback_;
};

/// One relation per feature, canonical order. attrs must cover all seven
/// features (AcousticAttributes is complete by construction).
std::vector<CrossModalRelation> infer_relations(const AcousticAttributes& attrs,
                                                Sentiment sentiment, RelationBackend& backend);

}  // namespace emograph
