// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/prompting.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "emograph/errors.hpp"

namespace emograph {

namespace {

const std::array<std::string, 4> kStrategyNames = {"ccot", "direct", "zscot_stage1",
                                                   "zscot_stage2"};
const std::array<std::string, 5> kSegmentTagNames = {"I", "Eg", "C", "Pin", "S"};
const std::array<std::string, 3> kFormatNames = {"json", "freeform", "unstructured_no_json"};
const std::array<std::string, 2> kSourceNames = {"dsp", "model_described"};

std::string substitute(std::string tpl, const std::string& key, const std::string& value) {
    std::string needle = "{" + key + "}";
    size_t pos = tpl.find(needle);
    while (pos != std::string::npos) {
        tpl.replace(pos, needle.size(), value);
        pos = tpl.find(needle, pos + value.size());
    }
    return tpl;
}

std::string capitalized(std::string word) {
    if (!word.empty()) word[0] = char(std::toupper(static_cast<unsigned char>(word[0])));
    return word;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read prompt file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!text.empty() && text.back() == '\n') text.pop_back();
    if (!text.empty() && text.back() == '\r') text.pop_back();
    return text;
}

const std::vector<SegmentTag>& expected_tags(Strategy s) {
    static const std::vector<SegmentTag> ccot = {SegmentTag::I, SegmentTag::Eg, SegmentTag::C,
                                                 SegmentTag::Pin, SegmentTag::S};
    static const std::vector<SegmentTag> direct = {SegmentTag::I, SegmentTag::Pin, SegmentTag::S};
    static const std::vector<SegmentTag> stage1 = {SegmentTag::I, SegmentTag::C};
    static const std::vector<SegmentTag> stage2 = {SegmentTag::I, SegmentTag::Eg, SegmentTag::Pin,
                                                   SegmentTag::S};
    switch (s) {
        case Strategy::ccot: return ccot;
        case Strategy::direct: return direct;
        case Strategy::zscot_stage1: return stage1;
        case Strategy::zscot_stage2: return stage2;
    }
    return direct;
}

}  // namespace

const std::string& strategy_name(Strategy s) { return kStrategyNames[size_t(s)]; }

Strategy strategy_from_name(const std::string& name) {
    for (size_t i = 0; i < kStrategyNames.size(); ++i) {
        if (kStrategyNames[i] == name) return Strategy(i);
    }
    if (name == "zscot") return Strategy::zscot_stage1;  // protocol alias in configs
    throw ConfigError("unknown strategy: " + name);
}

const std::string& segment_tag_name(SegmentTag t) { return kSegmentTagNames[size_t(t)]; }

const std::string& graph_format_name(GraphFormat f) { return kFormatNames[size_t(f)]; }

GraphFormat graph_format_from_name(const std::string& name) {
    for (size_t i = 0; i < kFormatNames.size(); ++i) {
        if (kFormatNames[i] == name) return GraphFormat(i);
    }
    throw ConfigError("unknown graph format: " + name);
}

const std::string& attribute_source_name(AttributeSource s) { return kSourceNames[size_t(s)]; }

AttributeSource attribute_source_from_name(const std::string& name) {
    for (size_t i = 0; i < kSourceNames.size(); ++i) {
        if (kSourceNames[i] == name) return AttributeSource(i);
    }
    throw ConfigError("unknown attribute source: " + name);
}

const std::string* LabelSet::name_for_letter(char letter) const {
    char upper = char(std::toupper(static_cast<unsigned char>(letter)));
    for (const Option& opt : options) {
        if (opt.letter == upper) return &opt.name;
    }
    return nullptr;
}

LabelSet LabelSet::make(std::string dataset_id, std::vector<std::string> names,
                        std::string notes) {
    if (names.empty() || names.size() > 26) {
        throw ConfigError("label set needs 1..26 labels");
    }
    LabelSet set;
    set.dataset_id = std::move(dataset_id);
    set.mapping_notes = std::move(notes);
    std::set<std::string> seen;
    for (size_t i = 0; i < names.size(); ++i) {
        std::string name = names[i];
        for (char& c : name) c = char(std::tolower(static_cast<unsigned char>(c)));
        if (!seen.insert(name).second) throw ConfigError("duplicate label: " + name);
        set.options.push_back({char('A' + i), name});
    }
    return set;
}

LabelSet LabelSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read label set: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    return make(j.at("dataset_id").get<std::string>(),
                j.at("labels").get<std::vector<std::string>>(), j.value("notes", ""));
}

std::string AblationConfig::fingerprint() const {
    std::string s = "ac";
    s += drop_acoustic ? '1' : '0';
    s += "-tx";
    s += drop_text ? '1' : '0';
    s += "-rel";
    s += drop_relations ? '1' : '0';
    s += "-" + graph_format_name(format);
    s += "-b" + std::to_string(token_budget);
    s += "-" + attribute_source_name(attribute_source);
    return s;
}

void AblationConfig::validate() const {
    if (token_budget == 0) throw ConfigError("token_budget must be >= 1");
    if (drop_acoustic && drop_text) {
        throw ConfigError(
            "invalid ablation: dropping both acoustic and text sections leaves no graph "
            "content (the sentiment must always be retained)");
    }
}

std::string PromptBundle::flatten_text() const {
    std::string out;
    for (const Segment& seg : segments) {
        if (seg.tag == SegmentTag::I) continue;
        if (!out.empty()) out += "\n\n";
        out += seg.text;
    }
    return out;
}

PromptBundle PromptBundle::make(Strategy strategy, std::string audio_ref,
                                std::vector<Segment> segments, AblationConfig ablation) {
    const std::vector<SegmentTag>& want = expected_tags(strategy);
    bool ok = segments.size() == want.size();
    if (ok) {
        for (size_t i = 0; i < want.size(); ++i) ok = ok && segments[i].tag == want[i];
    }
    if (!ok) {
        std::string layout;
        for (SegmentTag t : want) layout += "[" + segment_tag_name(t) + "]";
        throw Error("a " + strategy_name(strategy) + " bundle must order segments " + layout);
    }
    PromptBundle bundle;
    bundle.strategy = strategy;
    bundle.audio_ref = std::move(audio_ref);
    bundle.segments = std::move(segments);
    bundle.ablation = ablation;
    return bundle;
}

const PromptTemplates& PromptTemplates::defaults() {
    static const PromptTemplates tpl = {
        "Use the audio and emotion graph as context and answer the following question.",
        "Task: Recognize the emotion with keywords in English: {options}.",
        "Select the option letter from the provided choices to answer.",
        "Let’s think step by step",
        "What is the sentence-level sentiment polarity of this transcript? Answer with exactly "
        "one word: positive, negative, or neutral.\n\nTranscript: {transcript}",
        "List up to {k} emotionally salient keywords from this transcript, comma-separated, most "
        "salient first.\n\nTranscript: {transcript}",
        "Given acoustic cues ({cues}), determine whether each one supports, contradicts, or is "
        "neutral with respect to the sentiment: {sentiment}.",
        "Describe the pitch, speech rate, and volume of this audio clip, one short sentence "
        "for each.",
    };
    return tpl;
}

PromptTemplates PromptTemplates::load_dir(const std::string& dir) {
    PromptTemplates tpl;
    tpl.context_instruction = read_text_file(dir + "/context_instruction.txt");
    tpl.task_template = read_text_file(dir + "/task_prompt.txt");
    tpl.output_instruction = read_text_file(dir + "/output_instruction.txt");
    tpl.zscot_trigger = read_text_file(dir + "/zscot_trigger.txt");
    tpl.sentiment_template = read_text_file(dir + "/sentiment_prompt.txt");
    tpl.keyword_template = read_text_file(dir + "/keyword_prompt.txt");
    tpl.relation_template = read_text_file(dir + "/relation_prompt.txt");
    tpl.describe_acoustics_prompt = read_text_file(dir + "/describe_acoustics_prompt.txt");
    return tpl;
}

std::string render_options(const LabelSet& labels) {
    std::string out;
    for (const LabelSet::Option& opt : labels.options) {
        if (!out.empty()) out += " ";
        out += "(";
        out += opt.letter;
        out += ") " + capitalized(opt.name);
    }
    return out;
}

std::string render_task_prompt(const LabelSet& labels, const PromptTemplates& tpl) {
    return substitute(tpl.task_template, "options", render_options(labels));
}

PromptBundle build_ccot_prompt(const std::string& audio_ref, const std::string& eg_text,
                               const LabelSet& labels, const PromptTemplates& tpl,
                               AblationConfig ablation) {
    if (eg_text.empty()) throw ConfigError("ccot prompt requires a non-empty emotion graph text");
    return PromptBundle::make(Strategy::ccot, audio_ref,
                              {{SegmentTag::I, audio_ref},
                               {SegmentTag::Eg, eg_text},
                               {SegmentTag::C, tpl.context_instruction},
                               {SegmentTag::Pin, render_task_prompt(labels, tpl)},
                               {SegmentTag::S, tpl.output_instruction}},
                              ablation);
}

PromptBundle build_direct_prompt(const std::string& audio_ref, const LabelSet& labels,
                                 const PromptTemplates& tpl) {
    return PromptBundle::make(Strategy::direct, audio_ref,
                              {{SegmentTag::I, audio_ref},
                               {SegmentTag::Pin, render_task_prompt(labels, tpl)},
                               {SegmentTag::S, tpl.output_instruction}});
}

ZsCotPrompts build_zscot_prompts(const std::string& audio_ref, const LabelSet& labels,
                                 const PromptTemplates& tpl) {
    ZsCotPrompts prompts;
    prompts.stage1 = PromptBundle::make(
        Strategy::zscot_stage1, audio_ref,
        {{SegmentTag::I, audio_ref}, {SegmentTag::C, tpl.zscot_trigger}});
    std::string pin = render_task_prompt(labels, tpl);
    std::string out_instr = tpl.output_instruction;
    prompts.stage2 = [audio_ref, pin, out_instr](const std::string& rationale) {
        return PromptBundle::make(Strategy::zscot_stage2, audio_ref,
                                  {{SegmentTag::I, audio_ref},
                                   {SegmentTag::Eg, rationale},
                                   {SegmentTag::Pin, pin},
                                   {SegmentTag::S, out_instr}});
    };
    return prompts;
}

std::string apply_ablation(const EmotionGraph& graph, const AblationConfig& cfg) {
    cfg.validate();
    EmotionGraph g = graph;
    if (cfg.drop_acoustic) {
        g.acoustic.reset();
        g.acoustic_description.reset();
        // Relations name acoustic features, so a complete acoustic drop
        // removes them as well.
        g.relations.reset();
    }
    if (cfg.drop_text) {
        g.sentiment.reset();
        g.keywords.reset();
    }
    if (cfg.drop_relations) g.relations.reset();

    std::function<std::string(const EmotionGraph&)> render;
    switch (cfg.format) {
        case GraphFormat::json: render = serialize_canonical; break;
        case GraphFormat::freeform: render = render_freeform; break;
        case GraphFormat::unstructured_no_json: render = render_flat; break;
    }
    EmotionGraph fitted = truncate_to_budget_rendered(g, cfg.token_budget, render);
    return render(fitted);
}

}  // namespace emograph
