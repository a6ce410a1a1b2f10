// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/calibration.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

#include "emograph/errors.hpp"
#include "emograph/sha256.hpp"

namespace emograph {

namespace {

const std::array<std::string, 3> kLevelNames = {"low", "normal", "high"};

// Exact nearest-rank index for an integer percentile: ceil(pct*n/100), 1-based.
size_t nearest_rank(size_t pct, size_t n) { return (pct * n + 99) / 100; }

std::string now_iso8601() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

const std::string& level_name(Level level) { return kLevelNames[size_t(level)]; }

Level level_from_name(const std::string& name) {
    for (size_t i = 0; i < kLevelNames.size(); ++i) {
        if (kLevelNames[i] == name) return Level(i);
    }
    throw Error("unknown level: " + name);
}

std::string CalibrationStats::calibration_id() const {
    std::string payload = corpus_id;
    for (const FeatureStats& fs : features) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "|%.17g,%.17g,%zu", fs.p33, fs.p67, fs.n);
        payload += buf;
    }
    return corpus_id + "-" + sha256_hex(payload).substr(0, 12);
}

std::string CalibrationStats::to_json() const {
    nlohmann::ordered_json j;
    j["corpus_id"] = corpus_id;
    j["created_at"] = created_at;
    nlohmann::ordered_json feats;
    for (Feature f : all_features()) {
        const FeatureStats& fs = features[size_t(f)];
        feats[feature_name(f)] = {
            {"p33", fs.p33}, {"p67", fs.p67}, {"n", fs.n}, {"min", fs.min}, {"max", fs.max}};
    }
    j["features"] = feats;
    j["calibration_id"] = calibration_id();
    return j.dump(2);
}

CalibrationStats CalibrationStats::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CalibrationStats stats;
    stats.corpus_id = j.at("corpus_id").get<std::string>();
    stats.created_at = j.value("created_at", "");
    const nlohmann::json& feats = j.at("features");
    for (Feature f : all_features()) {
        const std::string& name = feature_name(f);
        if (!feats.contains(name)) throw MissingFeatureError("stats file lacks feature " + name);
        const nlohmann::json& fs = feats.at(name);
        FeatureStats out;
        out.p33 = fs.at("p33").get<double>();
        out.p67 = fs.at("p67").get<double>();
        out.n = fs.at("n").get<size_t>();
        out.min = fs.value("min", 0.0);
        out.max = fs.value("max", 0.0);
        stats.features[size_t(f)] = out;
    }
    return stats;
}

void CalibrationStats::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write calibration stats: " + path);
    out << to_json() << "\n";
}

CalibrationStats CalibrationStats::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read calibration stats: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

CalibrationStats fit_calibration(const std::vector<AcousticProfile>& profiles,
                                 const std::string& corpus_id, bool include_degenerate) {
    std::vector<const AcousticProfile*> kept;
    kept.reserve(profiles.size());
    for (const AcousticProfile& p : profiles) {
        if (include_degenerate || !p.is_degenerate()) kept.push_back(&p);
    }
    if (kept.empty()) {
        throw EmptyCorpusError("no usable profiles to calibrate corpus '" + corpus_id + "'");
    }

    CalibrationStats stats;
    stats.corpus_id = corpus_id;
    stats.created_at = now_iso8601();
    std::vector<double> values(kept.size());
    for (Feature f : all_features()) {
        for (size_t i = 0; i < kept.size(); ++i) values[i] = kept[i]->value(f);
        std::sort(values.begin(), values.end());
        CalibrationStats::FeatureStats fs;
        fs.n = values.size();
        fs.min = values.front();
        fs.max = values.back();
        fs.p33 = values[nearest_rank(33, values.size()) - 1];
        fs.p67 = values[nearest_rank(67, values.size()) - 1];
        stats.features[size_t(f)] = fs;
    }
    return stats;
}

AcousticAttributes discretize(const AcousticProfile& profile, const CalibrationStats& stats) {
    AcousticAttributes attrs;
    for (Feature f : all_features()) {
        const CalibrationStats::FeatureStats& fs = stats.features[size_t(f)];
        if (fs.n == 0) {
            throw MissingFeatureError("calibration stats lack feature " + feature_name(f));
        }
        double v = profile.value(f);
        Level level = Level::normal;
        if (v <= fs.p33) {
            level = Level::low;
        } else if (v > fs.p67) {
            level = Level::high;
        }
        attrs.set(f, level);
    }
    return attrs;
}

}  // namespace emograph
