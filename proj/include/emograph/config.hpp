// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "emograph/evaluation.hpp"
#include "emograph/prosody.hpp"

namespace emograph {

/// key = value text format for DSP parameters ('#' starts a comment).
DspConfig load_dsp_config(const std::string& path);
std::string dsp_config_to_text(const DspConfig& cfg);

struct DatasetConfig {
    std::string id;
    std::string manifest;
    std::string labelset;   // path to a label set JSON
    std::string label_map;  // optional path
    FoldScheme fold_scheme = FoldScheme::single_test;
    bool check_audio = false;
};

struct ClientConfig {
    std::string kind = "replay";  // http | replay | oracle | fixed
    std::string endpoint;
    std::string model_id = "offline";
    std::string replay_dir;
    std::string cache_dir;
    std::string api_key_env = "EMOGRAPH_API_KEY";
    std::string fixed_reply;
    double temperature = 0.0;
    int max_output_tokens = 256;
    int max_inflight = 4;
    int requests_per_minute = 0;  // 0 = unlimited
};

struct BackendSelection {
    std::string text = "offline";       // offline | remote
    std::string relations = "offline";  // offline | remote
    bool fallback_to_rules = true;      // remote relations fall back to the rule table
};

/// One experiment, fully described by a single JSON file so runs are
/// one-command reproducible.
struct ExperimentConfig {
    std::vector<DatasetConfig> datasets;
    std::string strategy = "ccot";
    AblationConfig ablation;
    std::vector<MatrixCell> matrix;
    DspConfig dsp;
    BackendSelection backends;
    ClientConfig client;
    std::string output_dir = "out";
    std::string data_dir;    // lexicon / rule table / label sets root
    std::string prompt_dir;  // optional override of the compiled-in templates
    std::string eg_out;
    int workers = 4;
    size_t keyword_k = 5;
    bool lenient_parse = false;
    uint64_t seed = 42;
    std::string raw_json;  // verbatim config text, recorded as the run snapshot
};

/// Parses and validates; unknown strategy names, missing manifests, or
/// malformed sections raise ConfigError with a pointer to the offending key.
ExperimentConfig load_experiment_config(const std::string& path);

/// Compiled-in default when the config names no data_dir.
std::string default_data_dir();
std::string default_prompt_dir();

}  // namespace emograph
