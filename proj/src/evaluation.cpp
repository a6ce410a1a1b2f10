// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "emograph/audio.hpp"
#include "emograph/emotion_graph.hpp"
#include "emograph/errors.hpp"
#include "emograph/sha256.hpp"
#include "emograph/version.hpp"

namespace emograph {

namespace fs = std::filesystem;

namespace {

const std::array<std::string, 2> kFoldSchemeNames = {"single_test", "leave_one_session_out"};

std::string protocol_name(Strategy s) {
    if (s == Strategy::zscot_stage1 || s == Strategy::zscot_stage2) return "zscot";
    return strategy_name(s);
}

void write_text(const std::string& path, const std::string& text) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

nlohmann::ordered_json metrics_to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["total"] = m.total;
    j["correct"] = m.correct_count;
    j["accuracy"] = m.accuracy;
    j["parse_failures"] = m.parse_failure_count;
    j["parse_failure_rate"] = m.parse_failure_rate;
    j["errors"] = m.error_count;
    j["macro_recall"] = m.macro_recall;
    j["empty"] = m.empty;
    nlohmann::ordered_json confusion;
    for (const auto& [gold, row] : m.confusion) {
        nlohmann::ordered_json r;
        for (const auto& [pred, n] : row) r[pred] = n;
        confusion[gold] = r;
    }
    j["confusion"] = confusion;
    return j;
}

}  // namespace

LabelMap LabelMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read label map: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    LabelMap map;
    if (j.contains("map")) {
        for (const auto& [from, to] : j.at("map").items()) {
            map.rename[from] = to.get<std::string>();
        }
    }
    if (j.contains("drop")) map.drop = j.at("drop").get<std::vector<std::string>>();
    return map;
}

DatasetManifest load_manifest(const std::string& path, const std::string& dataset_id,
                              const LabelSet* labels, const LabelMap* label_map,
                              bool check_audio) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read manifest: " + path);

    DatasetManifest manifest;
    manifest.dataset_id = dataset_id;
    std::set<std::string> seen_ids;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": invalid JSON line");
        }
        ManifestEntry e;
        e.utterance_id = j.at("utterance_id").get<std::string>();
        e.audio_path = j.at("audio_path").get<std::string>();
        e.transcript = j.value("transcript", "");
        e.gold_label = j.at("gold_label").get<std::string>();
        e.session_key = j.value("session", j.value("session_key", ""));
        e.language = j.value("language", "");

        if (label_map) {
            if (std::find(label_map->drop.begin(), label_map->drop.end(), e.gold_label) !=
                label_map->drop.end()) {
                continue;
            }
            auto it = label_map->rename.find(e.gold_label);
            if (it != label_map->rename.end()) e.gold_label = it->second;
        }
        if (!seen_ids.insert(e.utterance_id).second) {
            throw DuplicateIdError("duplicate utterance_id '" + e.utterance_id + "' in " + path);
        }
        if (labels) {
            bool known = false;
            for (const LabelSet::Option& opt : labels->options) known |= opt.name == e.gold_label;
            if (!known) {
                throw UnknownLabelError("gold label '" + e.gold_label + "' for utterance '" +
                                        e.utterance_id + "' is not in label set " +
                                        labels->dataset_id);
            }
        }
        if (check_audio && !fs::exists(e.audio_path)) {
            throw MissingAudioError("audio file missing: " + e.audio_path);
        }
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

FoldScheme fold_scheme_from_name(const std::string& name) {
    for (size_t i = 0; i < kFoldSchemeNames.size(); ++i) {
        if (kFoldSchemeNames[i] == name) return FoldScheme(i);
    }
    throw ConfigError("unknown fold scheme: " + name);
}

const std::string& fold_scheme_name(FoldScheme s) { return kFoldSchemeNames[size_t(s)]; }

std::vector<Fold> make_folds(const DatasetManifest& manifest, FoldScheme scheme) {
    std::vector<Fold> folds;
    if (scheme == FoldScheme::single_test) {
        Fold fold;
        fold.fold_id = "all";
        for (size_t i = 0; i < manifest.entries.size(); ++i) {
            fold.calibration.push_back(i);
            fold.test.push_back(i);
        }
        folds.push_back(std::move(fold));
        return folds;
    }
    std::set<std::string> sessions;
    for (const ManifestEntry& e : manifest.entries) {
        if (e.session_key.empty()) {
            throw MissingSessionKeyError("utterance '" + e.utterance_id +
                                         "' lacks a session key required for LOSO folds");
        }
        sessions.insert(e.session_key);
    }
    for (const std::string& session : sessions) {
        Fold fold;
        fold.fold_id = "loso-" + session;
        for (size_t i = 0; i < manifest.entries.size(); ++i) {
            if (manifest.entries[i].session_key == session) {
                fold.test.push_back(i);
            } else {
                fold.calibration.push_back(i);
            }
        }
        folds.push_back(std::move(fold));
    }
    return folds;
}

Metrics compute_accuracy(const std::vector<PredictionRecord>& records) {
    Metrics m;
    m.total = records.size();
    if (records.empty()) return m;
    m.empty = false;
    for (const PredictionRecord& r : records) {
        if (!r.error.empty()) ++m.error_count;
        std::string pred = r.parsed_label ? *r.parsed_label : "<parse_failure>";
        if (!r.parsed_label) ++m.parse_failure_count;
        if (r.correct) ++m.correct_count;
        ++m.confusion[r.gold_label][pred];
    }
    m.accuracy = double(m.correct_count) / double(m.total);
    m.parse_failure_rate = double(m.parse_failure_count) / double(m.total);
    double recall_sum = 0.0;
    size_t label_count = 0;
    for (const auto& [gold, row] : m.confusion) {
        size_t total = 0, hit = 0;
        for (const auto& [pred, n] : row) {
            total += n;
            if (pred == gold) hit += n;
        }
        if (total > 0) {
            recall_sum += double(hit) / double(total);
            ++label_count;
        }
    }
    m.macro_recall = label_count == 0 ? 0.0 : recall_sum / double(label_count);
    return m;
}

std::string ResultSet::predictions_jsonl() const {
    std::string out;
    for (const PredictionRecord& r : records) {
        nlohmann::ordered_json j;
        j["utterance_id"] = r.utterance_id;
        j["fold"] = r.fold_id;
        j["strategy"] = r.strategy;
        j["ablation"] = r.ablation;
        j["gold"] = r.gold_label;
        if (r.parsed_label) {
            j["parsed"] = *r.parsed_label;
        } else {
            j["parsed"] = nullptr;
        }
        j["parse_failure"] = !r.parsed_label.has_value();
        j["correct"] = r.correct;
        j["raw_response"] = r.raw_response;
        j["latency_ms"] = r.latency_ms;
        j["error"] = r.error;
        out += j.dump();
        out += "\n";
    }
    return out;
}

std::string ResultSet::to_json() const {
    nlohmann::ordered_json j;
    j["dataset_id"] = dataset_id;
    j["pipeline_version"] = kPipelineVersion;
    j["metrics"] = metrics_to_json(metrics);
    nlohmann::ordered_json folds = nlohmann::ordered_json::array();
    for (const auto& [fold_id, m] : per_fold) {
        nlohmann::ordered_json f;
        f["fold"] = fold_id;
        f["metrics"] = metrics_to_json(m);
        folds.push_back(f);
    }
    j["per_fold"] = folds;
    if (!config_snapshot.empty()) {
        nlohmann::json cfg = nlohmann::json::parse(config_snapshot, nullptr, false);
        j["config"] = cfg.is_discarded() ? nlohmann::json(config_snapshot) : cfg;
    }
    return j.dump(2);
}

PipelineBackends offline_backends(std::shared_ptr<const Lexicon> lexicon, RelationTable table) {
    PipelineBackends b;
    b.sentiment = std::make_shared<OfflineSentimentBackend>(lexicon);
    b.keywords = std::make_shared<OfflineKeywordBackend>(lexicon);
    b.relations = std::make_shared<OfflineRelationBackend>(std::move(table));
    return b;
}

namespace {

// Per-run profile memo; disk cache is layered on top when configured.
class ProfileStore {
public:
    ProfileStore(const EvalOptions& options) : options_(options) {}

    AcousticProfile get(const ManifestEntry& entry) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(entry.audio_path);
            if (it != memo_.end()) return it->second;
        }
        AcousticProfile profile = compute(entry);
        std::lock_guard<std::mutex> lock(mu_);
        memo_.emplace(entry.audio_path, profile);
        return profile;
    }

    std::string audio_hash(const std::string& path) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = hashes_.find(path);
        if (it != hashes_.end()) return it->second;
        std::string h = sha256_file_hex(path);
        hashes_.emplace(path, h);
        return h;
    }

private:
    AcousticProfile compute(const ManifestEntry& entry) {
        std::string cache_file;
        if (!options_.profile_cache_dir.empty()) {
            std::string key = sha256_hex(audio_hash(entry.audio_path) + "|" +
                                         options_.dsp.fingerprint() + "|" + kPipelineVersion);
            cache_file = options_.profile_cache_dir + "/" + key + ".json";
            if (fs::exists(cache_file)) return AcousticProfile::from_json(read_text(cache_file));
        }
        AudioClip clip = load_audio(entry.audio_path, options_.dsp.sample_rate);
        AcousticProfile profile = extract_acoustic_profile(clip, options_.dsp);
        if (!cache_file.empty()) {
            nlohmann::ordered_json j = nlohmann::ordered_json::parse(profile.to_json());
            j["syllable_count"] = profile.syllable_count;
            j["voiced_frame_count"] = profile.voiced_frame_count;
            write_text(cache_file, j.dump(2) + "\n");
        }
        return profile;
    }

    const EvalOptions& options_;
    std::mutex mu_;
    std::map<std::string, AcousticProfile> memo_;
    std::map<std::string, std::string> hashes_;
};

EmotionGraph build_graph(const ManifestEntry& entry, const CalibrationStats& stats,
                         const PipelineBackends& backends, const EvalOptions& options,
                         ProfileStore& profiles) {
    std::string eg_cache_file;
    if (!options.eg_cache_dir.empty()) {
        std::string key = sha256_hex(profiles.audio_hash(entry.audio_path) + "|" +
                                     sha256_hex(entry.transcript) + "|" + kPipelineVersion + "|" +
                                     stats.calibration_id() + "|" + backends.sentiment->id() + "+" +
                                     backends.keywords->id() + "|" + backends.relations->id() +
                                     "|k" + std::to_string(options.keyword_k) + "|" +
                                     options.dsp.fingerprint());
        eg_cache_file = options.eg_cache_dir + "/" + key + ".json";
        if (fs::exists(eg_cache_file)) return parse_canonical(read_text(eg_cache_file));
    }

    AcousticProfile profile = profiles.get(entry);
    AcousticAttributes attrs = discretize(profile, stats);
    TextAttributes text = build_text_attributes(entry.transcript, *backends.sentiment,
                                                *backends.keywords, options.keyword_k);
    std::vector<CrossModalRelation> relations =
        infer_relations(attrs, text.sentiment, *backends.relations);

    Provenance prov;
    prov.corpus_id = stats.corpus_id;
    prov.calibration_id = stats.calibration_id();
    prov.text_backend_id = text.backend_id;
    prov.relation_backend_id = backends.relations->id();
    prov.transcript_hash = text.transcript_hash;
    prov.pipeline_version = kPipelineVersion;

    EmotionGraph graph = assemble_graph(attrs, text, relations, prov);
    if (!eg_cache_file.empty()) write_text(eg_cache_file, serialize_canonical(graph) + "\n");
    return graph;
}

}  // namespace

EmotionGraph build_graph_for_entry(const ManifestEntry& entry, const CalibrationStats& stats,
                                   const PipelineBackends& backends, const EvalOptions& options) {
    ProfileStore profiles(options);
    return build_graph(entry, stats, backends, options, profiles);
}

ResultSet run_eval(const DatasetManifest& manifest, Strategy strategy,
                   const AblationConfig& ablation, const LabelSet& labels,
                   std::shared_ptr<ModelClient> client, const PipelineBackends& backends,
                   const EvalOptions& options) {
    ablation.validate();
    if (!client) throw ConfigError("run_eval needs a model client");
    const bool is_ccot = strategy == Strategy::ccot;
    const bool is_zscot = strategy == Strategy::zscot_stage1 || strategy == Strategy::zscot_stage2;
    if (is_ccot && (!backends.sentiment || !backends.keywords || !backends.relations)) {
        throw ConfigError("ccot strategy needs text and relation backends");
    }

    std::vector<Fold> folds = make_folds(manifest, options.fold_scheme);
    ProfileStore profiles(options);
    ResultSet rs;
    rs.dataset_id = manifest.dataset_id;
    rs.config_snapshot = options.config_snapshot;

    for (const Fold& fold : folds) {
        CalibrationStats stats;
        if (is_ccot) {
            std::vector<AcousticProfile> calib_profiles;
            calib_profiles.reserve(fold.calibration.size());
            for (size_t idx : fold.calibration) {
                calib_profiles.push_back(profiles.get(manifest.entries[idx]));
            }
            stats = fit_calibration(calib_profiles, manifest.dataset_id + ":" + fold.fold_id,
                                    options.include_degenerate_calibration);
        }

        auto process = [&](size_t idx) {
            const ManifestEntry& entry = manifest.entries[idx];
            PredictionRecord rec;
            rec.utterance_id = entry.utterance_id;
            rec.fold_id = fold.fold_id;
            rec.strategy = protocol_name(strategy);
            rec.ablation = ablation.fingerprint();
            rec.gold_label = entry.gold_label;
            try {
                PromptBundle bundle;
                if (strategy == Strategy::direct) {
                    bundle = build_direct_prompt(entry.utterance_id, labels, options.templates);
                } else if (is_zscot) {
                    ZsCotPrompts prompts =
                        build_zscot_prompts(entry.utterance_id, labels, options.templates);
                    ModelResponse stage1 = client->query(make_request(
                        entry.audio_path, prompts.stage1.flatten_text(), options.model));
                    rec.latency_ms += stage1.latency_ms;
                    if (stage1.text.find_first_not_of(" \t\r\n") == std::string::npos) {
                        std::cerr << "[warn] empty rationale for utterance " << entry.utterance_id
                                  << "; stage-2 prompt degenerates to the direct prompt\n";
                    }
                    bundle = prompts.stage2(stage1.text);
                } else {
                    EmotionGraph graph = build_graph(entry, stats, backends, options, profiles);
                    if (ablation.attribute_source == AttributeSource::model_described) {
                        ModelResponse described = client->query(make_request(
                            entry.audio_path, options.templates.describe_acoustics_prompt,
                            options.model));
                        rec.latency_ms += described.latency_ms;
                        graph.acoustic.reset();
                        graph.acoustic_description = described.text;
                        // No discrete levels to judge, so the relation section
                        // cannot be produced on this path.
                        graph.relations.reset();
                    }
                    if (!options.eg_out_dir.empty()) {
                        write_text(options.eg_out_dir + "/" + entry.utterance_id + ".json",
                                   serialize_canonical(graph) + "\n");
                    }
                    std::string eg_text = apply_ablation(graph, ablation);
                    bundle = build_ccot_prompt(entry.utterance_id, eg_text, labels,
                                               options.templates, ablation);
                }

                ModelResponse resp = client->query(
                    make_request(entry.audio_path, bundle.flatten_text(), options.model));
                rec.latency_ms += resp.latency_ms;
                rec.raw_response = resp.text;
                rec.parsed_label = parse_option_letter(resp.text, labels);
                if (!rec.parsed_label && options.lenient_parse) {
                    ModelResponse retry = client->query(make_request(
                        entry.audio_path,
                        bundle.flatten_text() + "\n\nAnswer with only the option letter.",
                        options.model));
                    rec.latency_ms += retry.latency_ms;
                    rec.raw_response = retry.text;
                    rec.parsed_label = parse_option_letter(retry.text, labels);
                }
                rec.correct = rec.parsed_label && *rec.parsed_label == entry.gold_label;
            } catch (const std::exception& e) {
                rec.error = e.what();
                rec.parsed_label = std::nullopt;
                rec.correct = false;
            }
            return rec;
        };

        std::vector<PredictionRecord> fold_records(fold.test.size());
        int workers = std::max(1, options.workers);
        if (workers == 1 || fold.test.size() <= 1) {
            for (size_t k = 0; k < fold.test.size(); ++k) fold_records[k] = process(fold.test[k]);
        } else {
            std::atomic<size_t> next{0};
            auto run_worker = [&] {
                for (;;) {
                    size_t k = next.fetch_add(1);
                    if (k >= fold.test.size()) break;
                    fold_records[k] = process(fold.test[k]);
                }
            };
            std::vector<std::thread> pool;
            size_t n_threads = std::min<size_t>(size_t(workers), fold.test.size());
            pool.reserve(n_threads);
            for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(run_worker);
            for (std::thread& t : pool) t.join();
        }

        std::sort(fold_records.begin(), fold_records.end(),
                  [](const PredictionRecord& a, const PredictionRecord& b) {
                      return a.utterance_id < b.utterance_id;
                  });
        rs.per_fold.emplace_back(fold.fold_id, compute_accuracy(fold_records));
        for (PredictionRecord& r : fold_records) rs.records.push_back(std::move(r));
    }

    std::sort(rs.records.begin(), rs.records.end(),
              [](const PredictionRecord& a, const PredictionRecord& b) {
                  return a.utterance_id < b.utterance_id;
              });
    rs.metrics = compute_accuracy(rs.records);

    if (!options.output_dir.empty()) {
        fs::create_directories(options.output_dir);
        write_text(options.output_dir + "/predictions.jsonl", rs.predictions_jsonl());
        write_text(options.output_dir + "/result.json", rs.to_json() + "\n");
        nlohmann::ordered_json snap;
        snap["pipeline_version"] = kPipelineVersion;
        nlohmann::json cfg = nlohmann::json::parse(
            options.config_snapshot.empty() ? "{}" : options.config_snapshot, nullptr, false);
        snap["config"] = cfg.is_discarded() ? nlohmann::json(options.config_snapshot) : cfg;
        write_text(options.output_dir + "/config_snapshot.json", snap.dump(2) + "\n");
    }
    return rs;
}

std::shared_ptr<ModelClient> make_oracle_client(const DatasetManifest& manifest,
                                                const LabelSet& labels) {
    std::map<std::string, char> letter_by_audio;
    for (const ManifestEntry& e : manifest.entries) {
        for (const LabelSet::Option& opt : labels.options) {
            if (opt.name == e.gold_label) letter_by_audio[e.audio_path] = opt.letter;
        }
    }
    return std::make_shared<MockClient>(
        [letter_by_audio](const ModelRequest& req) -> std::string {
            if (req.audio_path) {
                auto it = letter_by_audio.find(*req.audio_path);
                if (it != letter_by_audio.end()) {
                    return std::string("The answer is (") + it->second + ").";
                }
            }
            return "The audio reference is unknown to the oracle.";
        },
        "oracle-mock");
}

std::shared_ptr<ModelClient> make_fixed_client(std::string reply) {
    return std::make_shared<MockClient>(
        [reply](const ModelRequest&) { return reply; }, "fixed-mock");
}

AblationReport report_from_accuracies(
    const std::vector<std::string>& datasets,
    const std::vector<std::pair<std::string, std::map<std::string, double>>>& rows) {
    AblationReport report;
    report.datasets = datasets;
    for (const auto& [label, by_dataset] : rows) {
        AblationReport::Row row;
        row.label = label;
        double sum = 0.0;
        size_t n = 0;
        for (const std::string& ds : datasets) {
            auto it = by_dataset.find(ds);
            if (it == by_dataset.end()) continue;
            row.accuracy_pct[ds] = it->second;
            sum += it->second;
            ++n;
        }
        if (n > 0) row.overall_pct = sum / double(n);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string AblationReport::to_markdown() const {
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", v);
        return std::string(buf);
    };
    std::string out = "| Configuration |";
    for (const std::string& ds : datasets) out += " " + ds + " |";
    out += " Overall |\n|---|";
    for (size_t i = 0; i < datasets.size(); ++i) out += "---|";
    out += "---|\n";
    for (const Row& row : rows) {
        out += "| " + row.label + " |";
        for (const std::string& ds : datasets) {
            auto it = row.accuracy_pct.find(ds);
            out += it == row.accuracy_pct.end() ? " - |" : " " + fmt(it->second) + " |";
        }
        if (row.overall_pct) {
            out += " " + fmt(*row.overall_pct) + " |";
        } else {
            out += row.error.empty() ? " - |" : " error |";
        }
        out += "\n";
    }
    return out;
}

std::string AblationReport::to_json() const {
    nlohmann::ordered_json j;
    j["pipeline_version"] = kPipelineVersion;
    j["datasets"] = datasets;
    nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
    for (const Row& row : rows) {
        nlohmann::ordered_json r;
        r["label"] = row.label;
        nlohmann::ordered_json acc;
        for (const std::string& ds : datasets) {
            auto it = row.accuracy_pct.find(ds);
            acc[ds] = it == row.accuracy_pct.end() ? nlohmann::ordered_json(nullptr)
                                                   : nlohmann::ordered_json(it->second);
        }
        r["accuracy_pct"] = acc;
        r["overall_pct"] = row.overall_pct ? nlohmann::ordered_json(*row.overall_pct)
                                           : nlohmann::ordered_json(nullptr);
        if (!row.error.empty()) r["error"] = row.error;
        rows_json.push_back(r);
    }
    j["rows"] = rows_json;
    return j.dump(2);
}

AblationReport run_ablation_matrix(const std::vector<DatasetBundle>& datasets,
                                   const std::vector<MatrixCell>& cells,
                                   std::shared_ptr<ModelClient> client,
                                   const PipelineBackends& backends, const EvalOptions& options) {
    AblationReport report;
    for (const DatasetBundle& ds : datasets) report.datasets.push_back(ds.manifest.dataset_id);
    if (cells.empty()) {
        std::cerr << "[warn] empty ablation matrix: nothing to run\n";
    }
    for (const MatrixCell& cell : cells) {
        AblationReport::Row row;
        row.label = cell.label;
        double sum = 0.0;
        size_t n = 0;
        for (const DatasetBundle& ds : datasets) {
            try {
                EvalOptions cell_options = options;
                if (!options.output_dir.empty()) {
                    cell_options.output_dir =
                        options.output_dir + "/" + cell.label + "/" + ds.manifest.dataset_id;
                }
                ResultSet rs = run_eval(ds.manifest, cell.strategy, cell.ablation, ds.labels,
                                        client, backends, cell_options);
                double pct = rs.metrics.accuracy * 100.0;
                row.accuracy_pct[ds.manifest.dataset_id] = pct;
                sum += pct;
                ++n;
            } catch (const std::exception& e) {
                row.error = e.what();
                std::cerr << "[warn] cell '" << cell.label << "' failed on dataset '"
                          << ds.manifest.dataset_id << "': " << e.what() << "\n";
            }
        }
        if (n > 0) row.overall_pct = sum / double(n);
        report.rows.push_back(std::move(row));
    }
    if (!options.output_dir.empty()) {
        fs::create_directories(options.output_dir);
        write_text(options.output_dir + "/ablation_report.md", report.to_markdown());
        write_text(options.output_dir + "/ablation_report.json", report.to_json() + "\n");
    }
    return report;
}

}  // namespace emograph
