// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "emograph/audio.hpp"
#include "emograph/calibration.hpp"
#include "emograph/config.hpp"
#include "emograph/emotion_graph.hpp"
#include "emograph/errors.hpp"
#include "emograph/evaluation.hpp"
#include "emograph/model_client.hpp"
#include "emograph/prompting.hpp"
#include "emograph/prosody.hpp"
#include "emograph/synth.hpp"
#include "emograph/version.hpp"

namespace fs = std::filesystem;
using namespace emograph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitPartialFailure = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << "\n";
        return;
    }
    fs::path p(out_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write " + out_path);
    out << text;
    if (text.empty() || text.back() != '\n') out << "\n";
}

PipelineBackends make_backends(const ExperimentConfig& cfg, std::shared_ptr<ModelClient> client,
                               bool force_offline, const PromptTemplates& tpl) {
    auto lexicon = std::make_shared<Lexicon>(Lexicon::load(cfg.data_dir + "/lexicon.json"));
    RelationTable table = RelationTable::load(cfg.data_dir + "/relation_rules.json");
    PipelineBackends backends = offline_backends(lexicon, table);
    if (force_offline) return backends;

    ModelParams params;
    params.model_id = cfg.client.model_id;
    params.temperature = cfg.client.temperature;
    params.max_output_tokens = cfg.client.max_output_tokens;
    if (cfg.backends.text == "remote") {
        backends.sentiment =
            std::make_shared<RemoteSentimentBackend>(client, params, tpl.sentiment_template);
        backends.keywords =
            std::make_shared<RemoteKeywordBackend>(client, params, tpl.keyword_template);
    }
    if (cfg.backends.relations == "remote") {
        backends.relations = std::make_shared<RemoteRelationBackend>(
            client, params, tpl.relation_template, cfg.backends.fallback_to_rules, table);
    }
    return backends;
}

std::shared_ptr<ModelClient> make_client(const ExperimentConfig& cfg,
                                         const std::vector<DatasetBundle>& datasets,
                                         bool force_offline) {
    const ClientConfig& c = cfg.client;
    std::string kind = c.kind;
    if (force_offline && kind == "http") {
        if (c.replay_dir.empty()) {
            throw ConfigError("--offline with an http client requires client.replay_dir");
        }
        kind = "replay";
    }
    if (kind == "replay") return std::make_shared<ReplayClient>(c.replay_dir);
    if (kind == "fixed") {
        if (c.fixed_reply.empty()) throw ConfigError("fixed client needs client.fixed_reply");
        return make_fixed_client(c.fixed_reply);
    }
    if (kind == "oracle") {
        std::map<std::string, std::string> reply_by_audio;
        for (const DatasetBundle& ds : datasets) {
            for (const ManifestEntry& e : ds.manifest.entries) {
                for (const LabelSet::Option& opt : ds.labels.options) {
                    if (opt.name == e.gold_label) {
                        reply_by_audio[e.audio_path] =
                            std::string("The answer is (") + opt.letter + ").";
                    }
                }
            }
        }
        return std::make_shared<MockClient>(
            [reply_by_audio](const ModelRequest& req) -> std::string {
                if (req.audio_path) {
                    auto it = reply_by_audio.find(*req.audio_path);
                    if (it != reply_by_audio.end()) return it->second;
                }
                return "The audio reference is unknown to the oracle.";
            },
            "oracle-mock");
    }
    // http
    auto limiter = std::make_shared<RateLimiter>(c.max_inflight, c.requests_per_minute);
    auto http = std::make_shared<HttpChatClient>(c.endpoint, c.api_key_env, limiter);
    std::string cache = c.cache_dir.empty() ? cfg.output_dir + "/cache/responses" : c.cache_dir;
    return std::make_shared<CachingClient>(http, cache);
}

std::vector<DatasetBundle> load_datasets(const ExperimentConfig& cfg) {
    std::vector<DatasetBundle> out;
    for (const DatasetConfig& ds : cfg.datasets) {
        DatasetBundle bundle;
        bundle.labels = LabelSet::load(ds.labelset);
        LabelMap map;
        bool have_map = !ds.label_map.empty();
        if (have_map) map = LabelMap::load(ds.label_map);
        bundle.manifest = load_manifest(ds.manifest, ds.id, &bundle.labels,
                                        have_map ? &map : nullptr, ds.check_audio);
        out.push_back(std::move(bundle));
    }
    return out;
}

EvalOptions make_eval_options(const ExperimentConfig& cfg, const DatasetConfig& ds,
                              const PromptTemplates& tpl) {
    EvalOptions opt;
    opt.dsp = cfg.dsp;
    opt.templates = tpl;
    opt.model.model_id = cfg.client.model_id;
    opt.model.temperature = cfg.client.temperature;
    opt.model.max_output_tokens = cfg.client.max_output_tokens;
    opt.keyword_k = cfg.keyword_k;
    opt.fold_scheme = ds.fold_scheme;
    opt.workers = cfg.workers;
    opt.lenient_parse = cfg.lenient_parse;
    opt.output_dir = cfg.output_dir + "/" + ds.id;
    opt.eg_out_dir = cfg.eg_out.empty() ? "" : cfg.eg_out + "/" + ds.id;
    opt.profile_cache_dir = cfg.output_dir + "/cache/profiles";
    opt.eg_cache_dir = cfg.output_dir + "/cache/graphs";
    opt.config_snapshot = cfg.raw_json;
    return opt;
}

int cmd_extract(const std::string& in, const std::string& out, const std::string& dsp_path,
                uint32_t sample_rate, bool audit) {
    DspConfig dsp;
    if (!dsp_path.empty()) dsp = load_dsp_config(dsp_path);
    if (sample_rate != 0) dsp.sample_rate = sample_rate;
    AudioClip clip = load_audio(in, dsp.sample_rate);
    AcousticProfile profile = extract_acoustic_profile(clip, dsp);
    std::string text = profile.to_json();
    if (audit) {
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
        j["syllable_count"] = profile.syllable_count;
        j["voiced_frame_count"] = profile.voiced_frame_count;
        text = j.dump(2);
    }
    emit(text, out);
    return kExitOk;
}

int cmd_calibrate(const std::string& manifest_path, const std::string& corpus_id,
                  const std::string& out, const std::string& dsp_path, bool include_degenerate) {
    DspConfig dsp;
    if (!dsp_path.empty()) dsp = load_dsp_config(dsp_path);
    std::string id = corpus_id.empty() ? fs::path(manifest_path).stem().string() : corpus_id;
    DatasetManifest manifest = load_manifest(manifest_path, id);
    std::vector<AcousticProfile> profiles;
    profiles.reserve(manifest.entries.size());
    for (const ManifestEntry& e : manifest.entries) {
        profiles.push_back(extract_acoustic_profile(load_audio(e.audio_path, dsp.sample_rate), dsp));
    }
    CalibrationStats stats = fit_calibration(profiles, id, include_degenerate);
    if (out.empty()) {
        emit(stats.to_json(), "");
    } else {
        stats.save(out);
        std::cout << "wrote " << out << " (calibration " << stats.calibration_id() << ")\n";
    }
    return kExitOk;
}

int cmd_build_graph(const std::string& in, const std::string& transcript,
                    const std::string& transcript_file, const std::string& calibration_path,
                    const std::string& out, const std::string& data_dir, size_t k,
                    const std::string& dsp_path) {
    EvalOptions options;
    if (!dsp_path.empty()) options.dsp = load_dsp_config(dsp_path);
    options.keyword_k = k;
    CalibrationStats stats = CalibrationStats::load(calibration_path);
    auto lexicon = std::make_shared<Lexicon>(Lexicon::load(data_dir + "/lexicon.json"));
    PipelineBackends backends =
        offline_backends(lexicon, RelationTable::load(data_dir + "/relation_rules.json"));

    ManifestEntry entry;
    entry.utterance_id = fs::path(in).stem().string();
    entry.audio_path = in;
    entry.transcript = transcript_file.empty() ? transcript : slurp(transcript_file);
    EmotionGraph graph = build_graph_for_entry(entry, stats, backends, options);
    emit(serialize_canonical(graph), out);
    return kExitOk;
}

int cmd_prompt(const std::string& eg_path, const std::string& strategy_str,
               const std::string& labelset_path, const std::string& prompt_dir,
               const std::string& rationale, bool show_flat) {
    PromptTemplates tpl =
        prompt_dir.empty() ? PromptTemplates::defaults() : PromptTemplates::load_dir(prompt_dir);
    LabelSet labels = LabelSet::load(labelset_path);
    Strategy strategy = strategy_from_name(strategy_str);

    PromptBundle bundle;
    std::string audio_ref = "<audio>";
    if (strategy == Strategy::ccot) {
        std::string eg_text = slurp(eg_path);
        EmotionGraph graph = parse_canonical(eg_text);  // validates the file
        bundle = build_ccot_prompt(audio_ref, serialize_canonical(graph), labels, tpl);
    } else if (strategy == Strategy::direct) {
        bundle = build_direct_prompt(audio_ref, labels, tpl);
    } else {
        ZsCotPrompts prompts = build_zscot_prompts(audio_ref, labels, tpl);
        bundle = rationale.empty() ? prompts.stage1 : prompts.stage2(rationale);
    }
    for (const PromptBundle::Segment& seg : bundle.segments) {
        std::cout << "[" << segment_tag_name(seg.tag) << "]\n" << seg.text << "\n\n";
    }
    if (show_flat) std::cout << "--- flattened ---\n" << bundle.flatten_text() << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& config_path, bool offline) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    PromptTemplates tpl =
        cfg.prompt_dir.empty() ? PromptTemplates::defaults() : PromptTemplates::load_dir(cfg.prompt_dir);
    std::vector<DatasetBundle> datasets = load_datasets(cfg);
    std::shared_ptr<ModelClient> client = make_client(cfg, datasets, offline);
    PipelineBackends backends = make_backends(cfg, client, offline, tpl);
    Strategy strategy = strategy_from_name(cfg.strategy);

    bool partial = false;
    for (size_t i = 0; i < datasets.size(); ++i) {
        EvalOptions options = make_eval_options(cfg, cfg.datasets[i], tpl);
        ResultSet rs = run_eval(datasets[i].manifest, strategy, cfg.ablation, datasets[i].labels,
                                client, backends, options);
        partial |= rs.metrics.error_count > 0;
        std::printf("%-12s n=%-5zu accuracy=%6.2f%%  parse_failures=%5.2f%%  errors=%zu\n",
                    rs.dataset_id.c_str(), rs.metrics.total, rs.metrics.accuracy * 100.0,
                    rs.metrics.parse_failure_rate * 100.0, rs.metrics.error_count);
        std::cout << "  outputs: " << options.output_dir << "\n";
    }
    return partial ? kExitPartialFailure : kExitOk;
}

int cmd_ablate(const std::string& config_path, bool offline) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (cfg.matrix.empty()) {
        std::cerr << "[warn] config has no 'matrix'; nothing to ablate\n";
    }
    PromptTemplates tpl =
        cfg.prompt_dir.empty() ? PromptTemplates::defaults() : PromptTemplates::load_dir(cfg.prompt_dir);
    std::vector<DatasetBundle> datasets = load_datasets(cfg);
    std::shared_ptr<ModelClient> client = make_client(cfg, datasets, offline);
    PipelineBackends backends = make_backends(cfg, client, offline, tpl);

    EvalOptions options;
    options.dsp = cfg.dsp;
    options.templates = tpl;
    options.model.model_id = cfg.client.model_id;
    options.model.temperature = cfg.client.temperature;
    options.model.max_output_tokens = cfg.client.max_output_tokens;
    options.keyword_k = cfg.keyword_k;
    options.workers = cfg.workers;
    options.lenient_parse = cfg.lenient_parse;
    options.output_dir = cfg.output_dir;
    options.profile_cache_dir = cfg.output_dir + "/cache/profiles";
    options.eg_cache_dir = cfg.output_dir + "/cache/graphs";
    options.config_snapshot = cfg.raw_json;

    AblationReport report = run_ablation_matrix(datasets, cfg.matrix, client, backends, options);
    std::cout << report.to_markdown();
    bool any_error = false;
    for (const AblationReport::Row& row : report.rows) any_error |= !row.error.empty();
    return any_error ? kExitPartialFailure : kExitOk;
}

int cmd_report(const std::string& results_path, const std::string& out_md,
               const std::string& out_json) {
    nlohmann::json j = nlohmann::json::parse(slurp(results_path));
    std::vector<std::string> datasets = j.at("datasets").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::map<std::string, double>>> rows;
    for (const nlohmann::json& r : j.at("rows")) {
        std::map<std::string, double> acc;
        for (const auto& [ds, v] : r.at("accuracy_pct").items()) {
            if (!v.is_null()) acc[ds] = v.get<double>();
        }
        rows.emplace_back(r.at("label").get<std::string>(), std::move(acc));
    }
    AblationReport report = report_from_accuracies(datasets, rows);
    if (!out_json.empty()) emit(report.to_json(), out_json);
    emit(report.to_markdown(), out_md);
    return kExitOk;
}

int cmd_gen_fixtures(const std::string& out_dir, size_t n, uint64_t seed,
                     const std::string& config_out) {
    FixtureCorpus corpus = generate_fixture_corpus(out_dir, n, seed);
    std::cout << "wrote " << corpus.size << " utterances under " << out_dir << "\n";
    std::cout << "  manifest: " << corpus.manifest_path << "\n";
    std::cout << "  labelset: " << corpus.labelset_path << "\n";
    if (!config_out.empty()) {
        nlohmann::ordered_json j;
        j["datasets"] = nlohmann::ordered_json::array(
            {{{"id", "synth"},
              {"manifest", corpus.manifest_path},
              {"labelset", corpus.labelset_path},
              {"fold_scheme", "single_test"}}});
        j["strategy"] = "ccot";
        j["client"] = {{"kind", "oracle"}, {"model_id", "oracle-mock"}};
        j["backends"] = {{"text", "offline"}, {"relations", "offline"}};
        j["data_dir"] = default_data_dir();
        j["output_dir"] = out_dir + "/out";
        j["matrix"] = nlohmann::ordered_json::array(
            {{{"label", "ccot"}, {"strategy", "ccot"}},
             {{"label", "direct"}, {"strategy", "direct"}},
             {{"label", "zscot"}, {"strategy", "zscot"}},
             {{"label", "without_acoustic"},
              {"strategy", "ccot"},
              {"ablation", {{"drop_acoustic", true}}}},
             {{"label", "without_text"},
              {"strategy", "ccot"},
              {"ablation", {{"drop_text", true}}}},
             {{"label", "without_relations"},
              {"strategy", "ccot"},
              {"ablation", {{"drop_relations", true}}}},
             {{"label", "without_json"},
              {"strategy", "ccot"},
              {"ablation", {{"format", "unstructured_no_json"}}}},
             {{"label", "freeform"},
              {"strategy", "ccot"},
              {"ablation", {{"format", "freeform"}}}},
             {{"label", "budget_128"},
              {"strategy", "ccot"},
              {"ablation", {{"token_budget", 128}}}},
             {{"label", "budget_512"},
              {"strategy", "ccot"},
              {"ablation", {{"token_budget", 512}}}},
             {{"label", "budget_1024"},
              {"strategy", "ccot"},
              {"ablation", {{"token_budget", 1024}}}}});
        emit(j.dump(2), config_out);
        std::cout << "  config:   " << config_out << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"emotion-graph prompting pipeline for zero-shot speech emotion recognition"};
    app.set_version_flag("--version", kPipelineVersion);
    app.require_subcommand(1);

    // extract
    std::string in_path, out_path, dsp_path;
    uint32_t sample_rate = 0;
    bool audit = false;
    CLI::App* extract = app.add_subcommand("extract", "audio file -> acoustic profile JSON");
    extract->add_option("--in", in_path, "input WAV file")->required();
    extract->add_option("--out", out_path, "output JSON path (default stdout)");
    extract->add_option("--dsp", dsp_path, "DSP config file (key = value lines)");
    extract->add_option("--sample-rate", sample_rate, "analysis sample rate (default 16000)");
    extract->add_flag("--audit", audit, "include syllable/voiced-frame counts");

    // calibrate
    std::string manifest_path, corpus_id;
    bool include_degenerate = false;
    CLI::App* calibrate = app.add_subcommand("calibrate", "fit per-corpus tertile thresholds");
    calibrate->add_option("--manifest", manifest_path, "JSONL manifest")->required();
    calibrate->add_option("--out", out_path, "stats JSON output path");
    calibrate->add_option("--corpus-id", corpus_id, "corpus identifier (default manifest stem)");
    calibrate->add_option("--dsp", dsp_path, "DSP config file");
    calibrate->add_flag("--include-degenerate", include_degenerate,
                        "keep silence-sentinel profiles when fitting");

    // build-graph
    std::string transcript, transcript_file, calibration_path, data_dir = default_data_dir();
    size_t keyword_k = 5;
    CLI::App* build_graph = app.add_subcommand("build-graph", "utterance -> emotion graph JSON");
    build_graph->add_option("--in", in_path, "input WAV file")->required();
    build_graph->add_option("--transcript", transcript, "transcript text");
    build_graph->add_option("--transcript-file", transcript_file, "transcript file");
    build_graph->add_option("--calibration", calibration_path, "calibration stats JSON")->required();
    build_graph->add_option("--out", out_path, "output path (default stdout)");
    build_graph->add_option("--data-dir", data_dir, "lexicon / rule table directory");
    build_graph->add_option("--k", keyword_k, "max keywords");
    build_graph->add_option("--dsp", dsp_path, "DSP config file");

    // prompt
    std::string eg_path, strategy_str = "ccot", labelset_path, prompt_dir, rationale;
    bool dry_run = true, show_flat = false;
    CLI::App* prompt = app.add_subcommand("prompt", "render a prompt bundle (no network)");
    prompt->add_option("--eg", eg_path, "emotion graph JSON (ccot)");
    prompt->add_option("--strategy", strategy_str, "ccot | direct | zscot");
    prompt->add_option("--labelset", labelset_path, "label set JSON")->required();
    prompt->add_option("--prompt-dir", prompt_dir, "prompt template directory");
    prompt->add_option("--rationale", rationale, "zscot stage-2 rationale text");
    prompt->add_flag("--dry-run", dry_run, "render only (always on; prompt never queries)");
    prompt->add_flag("--flat", show_flat, "also print the flattened prompt text");

    // eval / ablate
    std::string config_path;
    bool offline = false;
    CLI::App* eval_cmd = app.add_subcommand("eval", "run one strategy over the configured datasets");
    eval_cmd->add_option("--config", config_path, "experiment config JSON")->required();
    eval_cmd->add_flag("--offline", offline, "force offline backends + replay client");

    CLI::App* ablate = app.add_subcommand("ablate", "run the configured ablation matrix");
    ablate->add_option("--config", config_path, "experiment config JSON")->required();
    ablate->add_flag("--offline", offline, "force offline backends + replay client");

    // report
    std::string results_path, out_md, out_json;
    CLI::App* report = app.add_subcommand("report", "re-render a report from ablation JSON");
    report->add_option("--results", results_path, "ablation_report.json from a prior run")->required();
    report->add_option("--out", out_md, "markdown output (default stdout)");
    report->add_option("--json", out_json, "also re-emit JSON");

    // gen-fixtures
    std::string fixtures_dir = "fixtures", config_out;
    size_t n_fixtures = 50;
    uint64_t seed = 42;
    CLI::App* gen = app.add_subcommand("gen-fixtures", "write a synthetic CI corpus");
    gen->add_option("--out", fixtures_dir, "output directory");
    gen->add_option("--n", n_fixtures, "number of utterances");
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--config-out", config_out, "also write a ready-to-run experiment config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed()) return cmd_extract(in_path, out_path, dsp_path, sample_rate, audit);
        if (calibrate->parsed()) {
            return cmd_calibrate(manifest_path, corpus_id, out_path, dsp_path, include_degenerate);
        }
        if (build_graph->parsed()) {
            return cmd_build_graph(in_path, transcript, transcript_file, calibration_path,
                                   out_path, data_dir, keyword_k, dsp_path);
        }
        if (prompt->parsed()) {
            return cmd_prompt(eg_path, strategy_str, labelset_path, prompt_dir, rationale,
                              show_flat);
        }
        if (eval_cmd->parsed()) return cmd_eval(config_path, offline);
        if (ablate->parsed()) return cmd_ablate(config_path, offline);
        if (report->parsed()) return cmd_report(results_path, out_md, out_json);
        if (gen->parsed()) return cmd_gen_fixtures(fixtures_dir, n_fixtures, seed, config_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}
