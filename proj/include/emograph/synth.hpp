// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emograph/audio.hpp"

namespace emograph {

// Synthetic signal builders. They back the shipped CI fixture corpus and the
// test suites; none of the shipped datasets are redistributed.

AudioClip synth_sine(double freq_hz, double seconds, uint32_t rate = 16000,
                     double amplitude = 0.8);

AudioClip synth_silence(double seconds, uint32_t rate = 16000);

AudioClip synth_white_noise(double seconds, uint32_t rate, uint64_t seed,
                            double amplitude = 0.5);

AudioClip concat_clips(const std::vector<AudioClip>& parts);

/// n_bursts tone bursts separated by silence, with optional lead/tail pads.
AudioClip synth_burst_train(size_t n_bursts, double burst_s, double gap_s, double freq_hz,
                            double amplitude = 0.8, uint32_t rate = 16000, double lead_s = 0.0,
                            double tail_s = 0.0);

/// One full sine cycle per requested period, so every positive-going zero
/// crossing marks a cycle boundary. Returns the clip; the requested periods
/// and amplitudes are the ground truth for cycle-level oracles.
AudioClip synth_cycle_train(const std::vector<double>& periods_s,
                            const std::vector<double>& amplitudes, uint32_t rate = 16000);

/// Alternating-period train (t_a, t_b, t_a, ...) at constant amplitude.
AudioClip synth_alternating_period_train(double period_a_s, double period_b_s, size_t n_cycles,
                                         double amplitude = 0.8, uint32_t rate = 16000);

/// Constant-period train with alternating per-cycle amplitude (a, b, a, ...).
AudioClip synth_alternating_amplitude_train(double period_s, double amp_a, double amp_b,
                                            size_t n_cycles, uint32_t rate = 16000);

struct FixtureCorpus {
    std::string manifest_path;
    std::string labelset_path;
    size_t size = 0;
};

/// Writes a tiny synthetic corpus (tone-burst WAVs + scripted transcripts +
/// JSONL manifest + the five-label set) under dir. Deterministic per seed.
/// Entries carry session keys 1..5 round-robin so LOSO folds are exercised.
FixtureCorpus generate_fixture_corpus(const std::string& dir, size_t n, uint64_t seed);

}  // namespace emograph
