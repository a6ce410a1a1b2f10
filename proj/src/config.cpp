// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emograph/errors.hpp"

namespace emograph {

namespace fs = std::filesystem;

DspConfig load_dsp_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read DSP config: " + path);
    DspConfig cfg;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
            }
            continue;
        }
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "sample_rate") cfg.sample_rate = uint32_t(std::stoul(value));
            else if (key == "frame_ms") cfg.frame_ms = std::stod(value);
            else if (key == "hop_ms") cfg.hop_ms = std::stod(value);
            else if (key == "f0_min_hz") cfg.f0_min_hz = std::stod(value);
            else if (key == "f0_max_hz") cfg.f0_max_hz = std::stod(value);
            else if (key == "voicing_threshold") cfg.voicing_threshold = std::stod(value);
            else if (key == "vad_margin_db") cfg.vad_margin_db = std::stod(value);
            else if (key == "vad_floor_db") cfg.vad_floor_db = std::stod(value);
            else if (key == "vad_gap_ms") cfg.vad_gap_ms = std::stod(value);
            else if (key == "syllable_smooth_ms") cfg.syllable_smooth_ms = std::stod(value);
            else if (key == "syllable_dip_db") cfg.syllable_dip_db = std::stod(value);
            else if (key == "syllable_median_margin_db")
                cfg.syllable_median_margin_db = std::stod(value);
            else throw ConfigError(path + ": unknown DSP key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": bad number for " + key);
        }
    }
    if (cfg.f0_min_hz >= cfg.f0_max_hz || cfg.hop_ms <= 0 || cfg.frame_ms < cfg.hop_ms) {
        throw ConfigError(path + ": inconsistent DSP parameters");
    }
    return cfg;
}

std::string dsp_config_to_text(const DspConfig& cfg) {
    std::ostringstream out;
    out << "sample_rate = " << cfg.sample_rate << "\n";
    out << "frame_ms = " << cfg.frame_ms << "\n";
    out << "hop_ms = " << cfg.hop_ms << "\n";
    out << "f0_min_hz = " << cfg.f0_min_hz << "\n";
    out << "f0_max_hz = " << cfg.f0_max_hz << "\n";
    out << "voicing_threshold = " << cfg.voicing_threshold << "\n";
    out << "vad_margin_db = " << cfg.vad_margin_db << "\n";
    out << "vad_floor_db = " << cfg.vad_floor_db << "\n";
    out << "vad_gap_ms = " << cfg.vad_gap_ms << "\n";
    out << "syllable_smooth_ms = " << cfg.syllable_smooth_ms << "\n";
    out << "syllable_dip_db = " << cfg.syllable_dip_db << "\n";
    out << "syllable_median_margin_db = " << cfg.syllable_median_margin_db << "\n";
    return out.str();
}

std::string default_data_dir() {
#ifdef EMOGRAPH_DATA_DIR
    return EMOGRAPH_DATA_DIR;
#else
    return "data";
#endif
}

std::string default_prompt_dir() {
#ifdef EMOGRAPH_PROMPT_DIR
    return EMOGRAPH_PROMPT_DIR;
#else
    return "prompts";
#endif
}

namespace {

AblationConfig parse_ablation(const nlohmann::json& j, const std::string& where) {
    AblationConfig cfg;
    if (j.contains("drop_acoustic")) cfg.drop_acoustic = j["drop_acoustic"].get<bool>();
    if (j.contains("drop_text")) cfg.drop_text = j["drop_text"].get<bool>();
    if (j.contains("drop_relations")) cfg.drop_relations = j["drop_relations"].get<bool>();
    if (j.contains("format")) cfg.format = graph_format_from_name(j["format"].get<std::string>());
    if (j.contains("token_budget")) cfg.token_budget = j["token_budget"].get<size_t>();
    if (j.contains("attribute_source")) {
        cfg.attribute_source = attribute_source_from_name(j["attribute_source"].get<std::string>());
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return cfg;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read experiment config: " + path);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    nlohmann::json j = nlohmann::json::parse(raw, nullptr, false);
    if (j.is_discarded()) throw ConfigError(path + ": not valid JSON");

    ExperimentConfig cfg;
    cfg.raw_json = raw;
    if (!j.contains("datasets") || !j["datasets"].is_array() || j["datasets"].empty()) {
        throw ConfigError(path + ": 'datasets' must be a non-empty array");
    }
    for (const nlohmann::json& d : j["datasets"]) {
        DatasetConfig ds;
        if (!d.contains("id")) throw ConfigError(path + ": dataset entry missing 'id'");
        ds.id = d["id"].get<std::string>();
        if (!d.contains("manifest")) {
            throw ConfigError(path + ": dataset '" + ds.id + "' missing 'manifest'");
        }
        ds.manifest = d["manifest"].get<std::string>();
        if (!fs::exists(ds.manifest)) {
            throw ConfigError(path + ": dataset '" + ds.id + "' manifest not found: " +
                              ds.manifest);
        }
        if (!d.contains("labelset")) {
            throw ConfigError(path + ": dataset '" + ds.id + "' missing 'labelset'");
        }
        ds.labelset = d["labelset"].get<std::string>();
        if (!fs::exists(ds.labelset)) {
            throw ConfigError(path + ": dataset '" + ds.id + "' labelset not found: " +
                              ds.labelset);
        }
        ds.label_map = d.value("label_map", "");
        if (!ds.label_map.empty() && !fs::exists(ds.label_map)) {
            throw ConfigError(path + ": dataset '" + ds.id + "' label_map not found: " +
                              ds.label_map);
        }
        if (d.contains("fold_scheme")) {
            ds.fold_scheme = fold_scheme_from_name(d["fold_scheme"].get<std::string>());
        }
        ds.check_audio = d.value("check_audio", false);
        cfg.datasets.push_back(std::move(ds));
    }

    cfg.strategy = j.value("strategy", "ccot");
    strategy_from_name(cfg.strategy);  // validate early
    if (j.contains("ablation")) cfg.ablation = parse_ablation(j["ablation"], path + ": ablation");
    if (j.contains("matrix")) {
        if (!j["matrix"].is_array()) throw ConfigError(path + ": 'matrix' must be an array");
        for (const nlohmann::json& c : j["matrix"]) {
            MatrixCell cell;
            if (!c.contains("label")) throw ConfigError(path + ": matrix cell missing 'label'");
            cell.label = c["label"].get<std::string>();
            cell.strategy = strategy_from_name(c.value("strategy", "ccot"));
            if (c.contains("ablation")) {
                cell.ablation =
                    parse_ablation(c["ablation"], path + ": matrix cell " + cell.label);
            }
            cfg.matrix.push_back(std::move(cell));
        }
    }
    if (j.contains("dsp_config")) {
        cfg.dsp = load_dsp_config(j["dsp_config"].get<std::string>());
    }
    if (j.contains("backends")) {
        const nlohmann::json& b = j["backends"];
        cfg.backends.text = b.value("text", "offline");
        cfg.backends.relations = b.value("relations", "offline");
        cfg.backends.fallback_to_rules = b.value("fallback_to_rules", true);
        for (const std::string& v : {cfg.backends.text, cfg.backends.relations}) {
            if (v != "offline" && v != "remote") {
                throw ConfigError(path + ": backend must be 'offline' or 'remote', got " + v);
            }
        }
    }
    if (j.contains("client")) {
        const nlohmann::json& c = j["client"];
        cfg.client.kind = c.value("kind", "replay");
        cfg.client.endpoint = c.value("endpoint", "");
        cfg.client.model_id = c.value("model_id", "offline");
        cfg.client.replay_dir = c.value("replay_dir", "");
        cfg.client.cache_dir = c.value("cache_dir", "");
        cfg.client.api_key_env = c.value("api_key_env", "EMOGRAPH_API_KEY");
        cfg.client.fixed_reply = c.value("fixed_reply", "");
        cfg.client.temperature = c.value("temperature", 0.0);
        cfg.client.max_output_tokens = c.value("max_output_tokens", 256);
        cfg.client.max_inflight = c.value("max_inflight", 4);
        cfg.client.requests_per_minute = c.value("requests_per_minute", 0);
        if (cfg.client.kind == "http" && cfg.client.endpoint.empty()) {
            throw ConfigError(path + ": http client needs an 'endpoint'");
        }
        if (cfg.client.kind == "replay" && cfg.client.replay_dir.empty()) {
            throw ConfigError(path + ": replay client needs a 'replay_dir'");
        }
        if (cfg.client.kind != "http" && cfg.client.kind != "replay" &&
            cfg.client.kind != "oracle" && cfg.client.kind != "fixed") {
            throw ConfigError(path + ": unknown client kind '" + cfg.client.kind + "'");
        }
    }
    cfg.output_dir = j.value("output_dir", "out");
    cfg.data_dir = j.value("data_dir", default_data_dir());
    cfg.prompt_dir = j.value("prompt_dir", "");
    cfg.eg_out = j.value("eg_out", "");
    cfg.workers = j.value("workers", 4);
    cfg.keyword_k = j.value("keyword_k", size_t(5));
    cfg.lenient_parse = j.value("lenient_parse", false);
    cfg.seed = j.value("seed", uint64_t(42));
    return cfg;
}

}  // namespace emograph
