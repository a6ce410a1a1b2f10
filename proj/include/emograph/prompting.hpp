// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "emograph/emotion_graph.hpp"

namespace emograph {

/// Ordered answer options for one dataset. Letters run consecutively from A;
/// names are unique lowercase emotion labels.
struct LabelSet {
    struct Option {
        char letter = 'A';
        std::string name;  // lowercase
    };
    std::string dataset_id;
    std::vector<Option> options;
    std::string mapping_notes;

    const std::string* name_for_letter(char letter) const;
    static LabelSet load(const std::string& path);
    static LabelSet make(std::string dataset_id, std::vector<std::string> names,
                         std::string notes = "");
};

enum class Strategy { ccot = 0, direct, zscot_stage1, zscot_stage2 };
const std::string& strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

enum class SegmentTag { I = 0, Eg, C, Pin, S };
const std::string& segment_tag_name(SegmentTag t);

enum class GraphFormat { json = 0, freeform, unstructured_no_json };
const std::string& graph_format_name(GraphFormat f);
GraphFormat graph_format_from_name(const std::string& name);

enum class AttributeSource { dsp = 0, model_described };
const std::string& attribute_source_name(AttributeSource s);
AttributeSource attribute_source_from_name(const std::string& name);

/// One ablation cell. Defaults reproduce the unablated configuration.
struct AblationConfig {
    bool drop_acoustic = false;
    bool drop_text = false;
    bool drop_relations = false;
    GraphFormat format = GraphFormat::json;
    size_t token_budget = 256;
    AttributeSource attribute_source = AttributeSource::dsp;

    /// Compact deterministic fingerprint recorded per prediction.
    std::string fingerprint() const;
    /// Throws ConfigError on undocumented combinations (for example dropping
    /// both the acoustic and text sections, which would empty the graph).
    void validate() const;
};

/// Prompt parts in transmission order. Construction enforces the per-strategy
/// segment layout; a ccot bundle is always exactly I, Eg, C, Pin, S.
struct PromptBundle {
    struct Segment {
        SegmentTag tag;
        std::string text;
    };
    std::string audio_ref;
    std::vector<Segment> segments;
    Strategy strategy = Strategy::direct;
    AblationConfig ablation;

    /// Prompt text sent to the model: non-I segments joined by blank lines
    /// (the I slot is resolved to the audio attachment by the model client).
    std::string flatten_text() const;

    static PromptBundle make(Strategy strategy, std::string audio_ref,
                             std::vector<Segment> segments, AblationConfig ablation = {});
};

/// The fixed prompt strings. Defaults are compiled in; prompts/ ships the
/// same text for per-experiment overrides.
struct PromptTemplates {
    std::string context_instruction;   // the C slot
    std::string task_template;         // Pin with an {options} placeholder
    std::string output_instruction;    // the S slot
    std::string zscot_trigger;
    std::string sentiment_template;    // {transcript}
    std::string keyword_template;      // {k}, {transcript}
    std::string relation_template;     // {cues}, {sentiment}
    std::string describe_acoustics_prompt;

    static const PromptTemplates& defaults();
    static PromptTemplates load_dir(const std::string& dir);
};

/// "(A) Neutral (B) Happy ..." rendering of a label set.
std::string render_options(const LabelSet& labels);

/// Pin instantiated for a label set (byte-stable for a fixed set).
std::string render_task_prompt(const LabelSet& labels,
                               const PromptTemplates& tpl = PromptTemplates::defaults());

/// [I][Eg][C][Pin][S]; eg_text must be non-empty.
PromptBundle build_ccot_prompt(const std::string& audio_ref, const std::string& eg_text,
                               const LabelSet& labels,
                               const PromptTemplates& tpl = PromptTemplates::defaults(),
                               AblationConfig ablation = {});

/// [I][Pin][S]; Pin is byte-identical to the ccot Pin for the same label set.
PromptBundle build_direct_prompt(const std::string& audio_ref, const LabelSet& labels,
                                 const PromptTemplates& tpl = PromptTemplates::defaults());

struct ZsCotPrompts {
    PromptBundle stage1;  // [I][trigger]
    std::function<PromptBundle(const std::string& rationale)> stage2;
};

/// Two-stage protocol: stage1 elicits a rationale with the reasoning trigger;
/// stage2 embeds that rationale verbatim between I and Pin.
ZsCotPrompts build_zscot_prompts(const std::string& audio_ref, const LabelSet& labels,
                                 const PromptTemplates& tpl = PromptTemplates::defaults());

/// Applies section drops, renders in the configured format, and truncates to
/// the token budget. Dropped sections leave no trace in the emitted text.
std::string apply_ablation(const EmotionGraph& graph, const AblationConfig& cfg);

}  // namespace emograph
