// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "emograph/audio.hpp"

namespace emograph {

/// The seven paralinguistic features, in canonical order.
enum class Feature {
    pitch = 0,
    speech_rate,
    volume,
    jitter,
    shimmer,
    intensity,
    articulation_rate,
};
inline constexpr size_t kNumFeatures = 7;
const std::array<Feature, kNumFeatures>& all_features();
const std::string& feature_name(Feature f);
Feature feature_from_name(const std::string& name);  // throws MissingFeatureError

/// Analysis parameters. Loadable from a key=value file (see config.hpp);
/// thresholds live here, not in code.
struct DspConfig {
    uint32_t sample_rate = 16000;  // canonical analysis rate
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    double f0_min_hz = 60.0;
    double f0_max_hz = 500.0;
    double voicing_threshold = 0.45;   // on normalized autocorrelation peak
    double vad_margin_db = 25.0;       // speech iff frame dB > max - margin
    double vad_floor_db = -60.0;       // absolute dBFS floor for speech
    double vad_gap_ms = 100.0;         // non-speech gaps shorter than this are bridged
    double syllable_smooth_ms = 50.0;  // intensity-contour moving-average window
    double syllable_dip_db = 2.0;      // required dip between counted peaks
    double syllable_median_margin_db = 2.0;  // peak must exceed median speech dB - this

    /// Stable fingerprint of every analysis-affecting value, for cache keys.
    std::string fingerprint() const;
};

constexpr double kSilenceFloorDb = -96.0;

/// Per-frame voicing decisions and fundamental-frequency estimates.
struct F0Track {
    struct Entry {
        bool voiced = false;
        double f0_hz = 0.0;  // meaningful iff voiced
    };
    std::vector<Entry> entries;
    uint32_t sample_rate = 0;
    size_t frame_len = 0;   // samples
    size_t hop = 0;         // samples
    double f0_min_hz = 0.0;
    double f0_max_hz = 0.0;

    size_t voiced_count() const;
    double mean_voiced_f0() const;  // 0 if fully unvoiced
};

/// Glottal-cycle boundaries and per-cycle peak amplitudes, grouped by
/// voiced run so cycle-to-cycle statistics never straddle a pause.
struct PeriodSequence {
    struct Run {
        std::vector<double> boundaries;  // strictly increasing, seconds
        std::vector<double> periods;     // boundaries.size() - 1 entries
        std::vector<double> amplitudes;  // one per period (peak |sample| in cycle)
    };
    std::vector<Run> runs;

    size_t total_periods() const;
    bool empty() const { return runs.empty(); }
};

/// Frame-level speech/non-speech mask.
struct VadMask {
    std::vector<bool> speech;
    double hop_s = 0.0;

    double speech_time_s() const;
    size_t speech_frame_count() const;
};

/// Continuous values of the seven features for one utterance, plus raw
/// counts for audit. Silence sentinels: -96 dBFS floor for volume/intensity,
/// zero pitch/rates with zero counts.
struct AcousticProfile {
    double pitch_hz = 0.0;
    double speech_rate_sps = 0.0;
    double volume_db = kSilenceFloorDb;
    double jitter_ratio = 0.0;
    double shimmer_ratio = 0.0;
    double intensity_db = kSilenceFloorDb;
    double articulation_rate_sps = 0.0;
    size_t syllable_count = 0;
    size_t voiced_frame_count = 0;

    double value(Feature f) const;
    /// Fully unvoiced and syllable-free; excluded from calibration by default.
    bool is_degenerate() const { return syllable_count == 0 && voiced_frame_count == 0; }
    /// One JSON object, keys exactly pitch_hz, speech_rate_sps, volume_db,
    /// jitter_ratio, shimmer_ratio, intensity_db, articulation_rate_sps.
    std::string to_json() const;
    static AcousticProfile from_json(const std::string& text);
};

/// Normalized-autocorrelation pitch tracker with parabolic peak refinement.
/// All-unvoiced tracks are valid results, never errors.
F0Track estimate_f0_track(const FrameSequence& frames, double f0_min_hz, double f0_max_hz,
                          double voicing_threshold = 0.45);

/// Locates glottal-cycle boundaries at positive-going zero crossings spaced
/// near the local f0 prediction; returns an empty sequence when no voiced
/// run spans at least two cycles.
PeriodSequence extract_periods(const AudioClip& clip, const F0Track& track);

/// Praat-style local jitter: mean |T_i - T_{i-1}| over consecutive periods
/// within a voiced run, divided by the mean period. 0 with fewer than 2 periods.
double compute_jitter(const PeriodSequence& periods);

/// Local shimmer: mean |A_i - A_{i-1}| / mean A_i, same run convention.
double compute_shimmer(const PeriodSequence& periods);

/// Energy VAD: speech iff frame dB > (utterance max dB - margin) and above
/// the absolute floor; gaps shorter than vad_gap_ms are then bridged.
VadMask detect_voice_activity(const FrameSequence& frames, const DspConfig& cfg = {});

/// Mean dB over speech frames, each frame floored at -96 dBFS; -96 if no
/// speech frames.
double compute_intensity(const FrameSequence& frames, const VadMask& vad);

/// Whole-utterance RMS in dBFS, pauses included, floored at -96.
double compute_volume(const AudioClip& clip);

/// Counts intensity peaks that sit in speech frames, exceed the median
/// speech intensity minus a margin, and are separated from the previous
/// counted peak by a sufficient dip.
size_t detect_syllable_nuclei(const FrameSequence& frames, const VadMask& vad,
                              const DspConfig& cfg = {});

/// Runs the full stack and assembles the seven-feature profile.
/// Throws EmptyAudioError on an empty clip.
AcousticProfile extract_acoustic_profile(const AudioClip& clip, const DspConfig& cfg = {});

}  // namespace emograph
