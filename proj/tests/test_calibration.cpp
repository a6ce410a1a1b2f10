// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>

#include "emograph/calibration.hpp"
#include "emograph/errors.hpp"
#include "support.hpp"

using namespace emograph;

namespace {

AcousticProfile profile_with(Feature f, double value) {
    AcousticProfile p;
    p.syllable_count = 1;      // not a silence sentinel
    p.voiced_frame_count = 1;
    p.pitch_hz = 150.0;
    p.speech_rate_sps = 3.0;
    p.volume_db = -20.0;
    p.jitter_ratio = 0.01;
    p.shimmer_ratio = 0.05;
    p.intensity_db = -18.0;
    p.articulation_rate_sps = 4.0;
    switch (f) {
        case Feature::pitch: p.pitch_hz = value; break;
        case Feature::speech_rate: p.speech_rate_sps = value; break;
        case Feature::volume: p.volume_db = value; break;
        case Feature::jitter: p.jitter_ratio = value; break;
        case Feature::shimmer: p.shimmer_ratio = value; break;
        case Feature::intensity: p.intensity_db = value; break;
        case Feature::articulation_rate: p.articulation_rate_sps = value; break;
    }
    return p;
}

CalibrationStats stats_for_pitch(double p33, double p67) {
    std::vector<AcousticProfile> profiles;
    profiles.push_back(profile_with(Feature::pitch, p33));
    CalibrationStats stats = fit_calibration(profiles, "unit");
    stats.features[size_t(Feature::pitch)].p33 = p33;
    stats.features[size_t(Feature::pitch)].p67 = p67;
    return stats;
}

}  // namespace

TEST_CASE("nearest-rank percentiles on values 1..9") {
    std::vector<AcousticProfile> profiles;
    for (int v = 1; v <= 9; ++v) profiles.push_back(profile_with(Feature::pitch, double(v)));
    CalibrationStats stats = fit_calibration(profiles, "unit");
    CHECK(stats.features[size_t(Feature::pitch)].p33 == 3.0);  // ceil(0.33*9) = 3rd
    CHECK(stats.features[size_t(Feature::pitch)].p67 == 7.0);  // ceil(0.67*9) = 7th
    CHECK(stats.features[size_t(Feature::pitch)].n == 9);
    CHECK(stats.features[size_t(Feature::pitch)].min == 1.0);
    CHECK(stats.features[size_t(Feature::pitch)].max == 9.0);
}

TEST_CASE("single profile pins both thresholds to its value") {
    std::vector<AcousticProfile> profiles = {profile_with(Feature::volume, -12.5)};
    CalibrationStats stats = fit_calibration(profiles, "unit");
    for (Feature f : all_features()) {
        CHECK(stats.features[size_t(f)].p33 == stats.features[size_t(f)].p67);
        CHECK(stats.features[size_t(f)].n == 1);
    }
    CHECK(stats.features[size_t(Feature::volume)].p33 == -12.5);
}

TEST_CASE("identical values collapse the thresholds") {
    std::vector<AcousticProfile> profiles(10, profile_with(Feature::jitter, 0.02));
    CalibrationStats stats = fit_calibration(profiles, "unit");
    CHECK(stats.features[size_t(Feature::jitter)].p33 == 0.02);
    CHECK(stats.features[size_t(Feature::jitter)].p67 == 0.02);
}

TEST_CASE("empty corpus raises EmptyCorpusError") {
    CHECK_THROWS_AS(fit_calibration({}, "unit"), EmptyCorpusError);
}

TEST_CASE("silence sentinels are excluded from fitting unless requested") {
    AcousticProfile silence;  // default profile: degenerate
    REQUIRE(silence.is_degenerate());
    std::vector<AcousticProfile> profiles = {silence, profile_with(Feature::pitch, 200.0)};
    CalibrationStats stats = fit_calibration(profiles, "unit");
    CHECK(stats.features[size_t(Feature::pitch)].n == 1);
    CHECK(stats.features[size_t(Feature::pitch)].p33 == 200.0);

    CalibrationStats with_all = fit_calibration(profiles, "unit", /*include_degenerate=*/true);
    CHECK(with_all.features[size_t(Feature::pitch)].n == 2);

    std::vector<AcousticProfile> only_silence = {silence, silence};
    CHECK_THROWS_AS(fit_calibration(only_silence, "unit"), EmptyCorpusError);
}

TEST_CASE("discretize applies the boundary rules") {
    CalibrationStats stats = stats_for_pitch(100.0, 180.0);
    CHECK(discretize(profile_with(Feature::pitch, 90.0), stats).level(Feature::pitch) ==
          Level::low);
    CHECK(discretize(profile_with(Feature::pitch, 150.0), stats).level(Feature::pitch) ==
          Level::normal);
    CHECK(discretize(profile_with(Feature::pitch, 200.0), stats).level(Feature::pitch) ==
          Level::high);
    // Boundaries: <= p33 is low, > p67 is high.
    CHECK(discretize(profile_with(Feature::pitch, 100.0), stats).level(Feature::pitch) ==
          Level::low);
    CHECK(discretize(profile_with(Feature::pitch, 180.0), stats).level(Feature::pitch) ==
          Level::normal);
}

TEST_CASE("equal thresholds resolve ties toward low") {
    CalibrationStats stats = stats_for_pitch(140.0, 140.0);
    CHECK(discretize(profile_with(Feature::pitch, 140.0), stats).level(Feature::pitch) ==
          Level::low);
    CHECK(discretize(profile_with(Feature::pitch, 140.1), stats).level(Feature::pitch) ==
          Level::high);
}

TEST_CASE("discretize rejects stats that lack a feature") {
    CalibrationStats stats = stats_for_pitch(100.0, 180.0);
    stats.features[size_t(Feature::shimmer)].n = 0;
    CHECK_THROWS_AS(discretize(profile_with(Feature::pitch, 150.0), stats), MissingFeatureError);
}

TEST_CASE("fit matches the independent nearest-rank oracle on random corpora") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<size_t> size_dist(1, 500);
    std::uniform_real_distribution<double> value_dist(-50.0, 400.0);
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = size_dist(rng);
        std::vector<AcousticProfile> profiles;
        std::vector<double> values;
        for (size_t i = 0; i < n; ++i) {
            double v = value_dist(rng);
            values.push_back(v);
            profiles.push_back(profile_with(Feature::intensity, v));
        }
        CalibrationStats stats = fit_calibration(profiles, "oracle");
        std::sort(values.begin(), values.end());
        CHECK(stats.features[size_t(Feature::intensity)].p33 ==
              values[test_support::oracle_nearest_rank_index(33, n) - 1]);
        CHECK(stats.features[size_t(Feature::intensity)].p67 ==
              values[test_support::oracle_nearest_rank_index(67, n) - 1]);
    }
}

TEST_CASE("tertile shares stay within [20%, 47%] for distinct values") {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<size_t> size_dist(30, 400);
    for (int trial = 0; trial < 50; ++trial) {
        size_t n = size_dist(rng);
        std::vector<AcousticProfile> profiles;
        for (size_t i = 0; i < n; ++i) {
            profiles.push_back(profile_with(Feature::pitch, 100.0 + double(i)));  // all distinct
        }
        CalibrationStats stats = fit_calibration(profiles, "tertiles");
        size_t low = 0, normal = 0, high = 0;
        for (const AcousticProfile& p : profiles) {
            switch (discretize(p, stats).level(Feature::pitch)) {
                case Level::low: ++low; break;
                case Level::normal: ++normal; break;
                case Level::high: ++high; break;
            }
        }
        for (size_t share : {low, normal, high}) {
            CHECK(double(share) / double(n) >= 0.20);
            CHECK(double(share) / double(n) <= 0.47);
        }
    }
}

TEST_CASE("discretize is monotone in the feature value") {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> value_dist(-100.0, 500.0);
    for (int trial = 0; trial < 500; ++trial) {
        double a = value_dist(rng), b = value_dist(rng);
        if (a > b) std::swap(a, b);
        double p33 = value_dist(rng), p67 = value_dist(rng);
        if (p33 > p67) std::swap(p33, p67);
        CalibrationStats stats = stats_for_pitch(p33, p67);
        Level la = discretize(profile_with(Feature::pitch, a), stats).level(Feature::pitch);
        Level lb = discretize(profile_with(Feature::pitch, b), stats).level(Feature::pitch);
        CHECK(size_t(la) <= size_t(lb));  // larger value never maps closer to low
    }
}

TEST_CASE("discretize is idempotent for identical inputs") {
    CalibrationStats stats = stats_for_pitch(100.0, 180.0);
    AcousticProfile p = profile_with(Feature::pitch, 151.5);
    AcousticAttributes first = discretize(p, stats);
    AcousticAttributes second = discretize(p, stats);
    for (Feature f : all_features()) CHECK(first.level(f) == second.level(f));
}

TEST_CASE("stats JSON round-trips and the calibration id ignores wall clock") {
    std::vector<AcousticProfile> profiles;
    for (int v = 1; v <= 20; ++v) profiles.push_back(profile_with(Feature::pitch, double(v)));
    CalibrationStats stats = fit_calibration(profiles, "rt-corpus");
    CalibrationStats parsed = CalibrationStats::from_json(stats.to_json());
    for (Feature f : all_features()) {
        CHECK(parsed.features[size_t(f)].p33 == stats.features[size_t(f)].p33);
        CHECK(parsed.features[size_t(f)].p67 == stats.features[size_t(f)].p67);
        CHECK(parsed.features[size_t(f)].n == stats.features[size_t(f)].n);
    }
    CalibrationStats refit = fit_calibration(profiles, "rt-corpus");
    refit.created_at = "2001-01-01T00:00:00Z";  // different wall clock
    CHECK(refit.calibration_id() == stats.calibration_id());
}
