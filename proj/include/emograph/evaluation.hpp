// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "emograph/calibration.hpp"
#include "emograph/model_client.hpp"
#include "emograph/prompting.hpp"
#include "emograph/prosody.hpp"
#include "emograph/relations.hpp"
#include "emograph/text_attributes.hpp"

namespace emograph {

struct ManifestEntry {
    std::string utterance_id;
    std::string audio_path;
    std::string transcript;  // may be empty when ASR transcripts ship separately
    std::string gold_label;
    std::string session_key;  // required for leave-one-session-out
    std::string language;
};

struct DatasetManifest {
    std::string dataset_id;
    std::vector<ManifestEntry> entries;
};

/// Label normalization applied at load: renames (for example excited->happy)
/// and dropped labels (for example disgust/fear).
struct LabelMap {
    std::map<std::string, std::string> rename;
    std::vector<std::string> drop;

    static LabelMap load(const std::string& path);
};

/// Loads a JSON Lines manifest, applies the label map, and validates ids and
/// gold labels. Throws DuplicateIdError, UnknownLabelError, and (with
/// check_audio) MissingAudioError.
DatasetManifest load_manifest(const std::string& path, const std::string& dataset_id,
                              const LabelSet* labels = nullptr,
                              const LabelMap* label_map = nullptr, bool check_audio = false);

enum class FoldScheme { single_test = 0, leave_one_session_out };
FoldScheme fold_scheme_from_name(const std::string& name);
const std::string& fold_scheme_name(FoldScheme s);

struct Fold {
    std::string fold_id;
    std::vector<size_t> calibration;  // entry indices used to fit thresholds
    std::vector<size_t> test;         // entry indices scored
};

/// single_test: one fold calibrated on the whole set. leave_one_session_out:
/// one fold per session key; fold i tests session i and calibrates on the
/// others (never on fold-i utterances).
std::vector<Fold> make_folds(const DatasetManifest& manifest, FoldScheme scheme);

struct PredictionRecord {
    std::string utterance_id;
    std::string fold_id;
    std::string strategy;
    std::string ablation;  // AblationConfig fingerprint
    std::string gold_label;
    std::optional<std::string> parsed_label;  // nullopt = ParseFailure
    bool correct = false;
    std::string raw_response;
    long latency_ms = 0;
    std::string error;  // per-utterance pipeline error, if any
};

struct Metrics {
    size_t total = 0;
    size_t correct_count = 0;
    size_t parse_failure_count = 0;
    size_t error_count = 0;
    double accuracy = 0.0;
    double parse_failure_rate = 0.0;
    double macro_recall = 0.0;
    std::map<std::string, std::map<std::string, size_t>> confusion;  // gold -> predicted -> n
    bool empty = true;
};

/// Accuracy, macro per-label recall, confusion counts, parse-failure rate.
/// ParseFailure records score as incorrect (strict mode) and land in the
/// "<parse_failure>" confusion bucket.
Metrics compute_accuracy(const std::vector<PredictionRecord>& records);

struct ResultSet {
    std::string dataset_id;
    std::vector<PredictionRecord> records;  // sorted by utterance_id
    Metrics metrics;
    std::vector<std::pair<std::string, Metrics>> per_fold;
    std::string config_snapshot;  // JSON text recorded with the run

    std::string predictions_jsonl() const;
    std::string to_json() const;
};

struct PipelineBackends {
    std::shared_ptr<SentimentBackend> sentiment;
    std::shared_ptr<KeywordBackend> keywords;
    std::shared_ptr<RelationBackend> relations;
};

/// Offline deterministic backends over a lexicon + rule table.
PipelineBackends offline_backends(std::shared_ptr<const Lexicon> lexicon,
                                  RelationTable table = RelationTable::default_table());

struct EvalOptions {
    DspConfig dsp;
    PromptTemplates templates = PromptTemplates::defaults();
    ModelParams model;  // temperature stays 0 for evaluation runs
    size_t keyword_k = 5;
    FoldScheme fold_scheme = FoldScheme::single_test;
    int workers = 4;
    bool lenient_parse = false;  // one clarifying re-ask on ParseFailure; off by default
    bool include_degenerate_calibration = false;
    std::string output_dir;         // "" = no files written
    std::string eg_out_dir;         // "" = skip per-utterance EG files
    std::string profile_cache_dir;  // "" = no profile cache
    std::string eg_cache_dir;       // "" = no graph cache
    std::string config_snapshot;    // JSON text written alongside outputs
};

/// Builds one utterance's emotion graph (profile -> discretize -> text ->
/// relations -> assemble). Exposed for the build-graph CLI path; run_eval
/// uses the same code.
EmotionGraph build_graph_for_entry(const ManifestEntry& entry, const CalibrationStats& stats,
                                   const PipelineBackends& backends, const EvalOptions& options);

/// Full evaluation of one strategy/ablation cell over a manifest. Per-
/// utterance failures are recorded, not fatal; configuration errors throw.
ResultSet run_eval(const DatasetManifest& manifest, Strategy strategy,
                   const AblationConfig& ablation, const LabelSet& labels,
                   std::shared_ptr<ModelClient> client, const PipelineBackends& backends,
                   const EvalOptions& options);

/// Mock client that answers every SER prompt with the gold option letter of
/// the utterance whose audio it was shown. CI/testing utility.
std::shared_ptr<ModelClient> make_oracle_client(const DatasetManifest& manifest,
                                                const LabelSet& labels);

/// Mock client that always replies with the same text.
std::shared_ptr<ModelClient> make_fixed_client(std::string reply);

struct MatrixCell {
    std::string label;
    Strategy strategy = Strategy::ccot;
    AblationConfig ablation;
};

struct DatasetBundle {
    DatasetManifest manifest;
    LabelSet labels;
};

/// Table-2-shaped report: rows = configurations, columns = datasets,
/// Overall = unweighted mean across datasets.
struct AblationReport {
    std::vector<std::string> datasets;
    struct Row {
        std::string label;
        std::map<std::string, double> accuracy_pct;  // dataset -> accuracy %
        std::optional<double> overall_pct;
        std::string error;  // non-empty when the whole row failed
    };
    std::vector<Row> rows;

    std::string to_markdown() const;
    std::string to_json() const;
};

/// Computes the Overall column (plain mean over the datasets present in the
/// row) for externally supplied accuracy numbers.
AblationReport report_from_accuracies(
    const std::vector<std::string>& datasets,
    const std::vector<std::pair<std::string, std::map<std::string, double>>>& rows);

/// One ResultSet per (cell, dataset); per-cell failures are isolated into
/// the report row instead of aborting the run. An empty matrix yields an
/// empty report.
AblationReport run_ablation_matrix(const std::vector<DatasetBundle>& datasets,
                                   const std::vector<MatrixCell>& cells,
                                   std::shared_ptr<ModelClient> client,
                                   const PipelineBackends& backends, const EvalOptions& options);

}  // namespace emograph
