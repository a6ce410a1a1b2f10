// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emograph/calibration.hpp"
#include "emograph/relations.hpp"
#include "emograph/text_attributes.hpp"

namespace emograph {

struct Provenance {
    std::string corpus_id;
    std::string calibration_id;
    std::string text_backend_id;
    std::string relation_backend_id;
    std::string transcript_hash;
    std::string pipeline_version;
};

/// The assembled emotion graph. Sections are optional because ablation and
/// budget truncation remove them; assemble_graph() always yields a complete
/// graph with every invariant checked.
struct EmotionGraph {
    std::optional<AcousticAttributes> acoustic;
    std::optional<std::string> acoustic_description;  // model-described ablation variant
    std::optional<Sentiment> sentiment;
    std::optional<std::vector<std::string>> keywords;
    std::optional<std::vector<CrossModalRelation>> relations;
    std::optional<Provenance> provenance;
};

/// Validates component consistency (7 relations matching the attribute
/// levels and the sentiment) and assembles the graph.
/// Throws InconsistentComponentsError.
EmotionGraph assemble_graph(const AcousticAttributes& attrs, const TextAttributes& text,
                            const std::vector<CrossModalRelation>& relations,
                            const Provenance& provenance);

/// Canonical serialization: UTF-8, fixed top-level key order
/// (acoustic_features, textual_sentiment, keywords, cross_modal_relations,
/// provenance), relations in canonical feature order, two-space indent, no
/// trailing whitespace. Byte-identical across runs for equal graphs.
std::string serialize_canonical(const EmotionGraph& graph);

/// Inverse of serialize_canonical; accepts graphs with sections removed.
EmotionGraph parse_canonical(const std::string& text);

/// Deterministic, model-independent token estimate: ceil(utf8_bytes / 4).
size_t estimate_tokens(const std::string& text);

/// Drops content in fixed priority (provenance, rationales, keywords beyond
/// the top 3, neutral relations, remaining keywords, non-neutral relations)
/// until the rendered size fits the budget. Acoustic attributes and the
/// sentiment are never dropped. Throws BudgetInfeasibleError when the core
/// alone exceeds the budget.
EmotionGraph truncate_to_budget(const EmotionGraph& graph, size_t budget_tokens);

/// Same machinery against an arbitrary rendering (used by the non-JSON
/// ablation formats, which budget what actually enters the prompt).
EmotionGraph truncate_to_budget_rendered(
    const EmotionGraph& graph, size_t budget_tokens,
    const std::function<std::string(const EmotionGraph&)>& render);

/// Fixed-order template prose carrying every attribute level, the sentiment,
/// every keyword, and every relation label; content-complete but without
/// compositional structure.
std::string render_freeform(const EmotionGraph& graph);

/// Flat "key: value" lines with the same content but no JSON syntax.
std::string render_flat(const EmotionGraph& graph);

}  // namespace emograph
