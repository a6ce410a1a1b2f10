// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "emograph/prosody.hpp"

namespace emograph {

enum class Level { low = 0, normal, high };
const std::string& level_name(Level level);
Level level_from_name(const std::string& name);

/// Per-corpus empirical tertile thresholds for the seven features.
struct CalibrationStats {
    struct FeatureStats {
        double p33 = 0.0;
        double p67 = 0.0;
        size_t n = 0;
        double min = 0.0;
        double max = 0.0;
    };
    std::array<FeatureStats, kNumFeatures> features{};
    std::string corpus_id;
    std::string created_at;  // informational only; never flows into downstream artifacts

    /// Content-derived identifier (corpus + threshold hash); this is what
    /// graphs reference in provenance, so re-fitting identical data yields
    /// an identical id regardless of wall clock.
    std::string calibration_id() const;

    std::string to_json() const;
    static CalibrationStats from_json(const std::string& text);
    void save(const std::string& path) const;
    static CalibrationStats load(const std::string& path);
};

/// The seven discretized low/normal/high labels.
struct AcousticAttributes {
    std::array<Level, kNumFeatures> levels{};

    Level level(Feature f) const { return levels[size_t(f)]; }
    void set(Feature f, Level l) { levels[size_t(f)] = l; }
};

/// Fits p33/p67 per feature via nearest-rank percentiles (1-based index
/// ceil(q*n) on the sorted values). Degenerate silence profiles are excluded
/// unless include_degenerate is set. Throws EmptyCorpusError when nothing
/// remains to fit.
CalibrationStats fit_calibration(const std::vector<AcousticProfile>& profiles,
                                 const std::string& corpus_id,
                                 bool include_degenerate = false);

/// value <= p33 -> low; value > p67 -> high; otherwise normal.
/// The <= p33 branch wins when p33 == p67.
AcousticAttributes discretize(const AcousticProfile& profile, const CalibrationStats& stats);

}  // namespace emograph
