// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>

#include "emograph/errors.hpp"
#include "emograph/prosody.hpp"
#include "emograph/synth.hpp"
#include "support.hpp"

using namespace emograph;

namespace {

PeriodSequence sequence_from(const std::vector<double>& periods,
                             const std::vector<double>& amplitudes) {
    PeriodSequence seq;
    PeriodSequence::Run run;
    run.boundaries.push_back(0.0);
    for (double p : periods) run.boundaries.push_back(run.boundaries.back() + p);
    run.periods = periods;
    run.amplitudes = amplitudes;
    seq.runs.push_back(std::move(run));
    return seq;
}

// Random hop-aligned burst fixture; amplitudes stay in [0.2, 0.45] so a 2x
// gain never clips and a 0.1x gain stays above the VAD absolute floor.
AudioClip random_burst_fixture(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> bursts(2, 7);
    std::uniform_int_distribution<int> burst_hops(12, 30);  // 120..300 ms
    std::uniform_int_distribution<int> gap_hops(15, 25);    // 150..250 ms
    std::uniform_real_distribution<double> amp(0.20, 0.45);
    std::uniform_real_distribution<double> f0(120.0, 320.0);
    return synth_burst_train(size_t(bursts(rng)), burst_hops(rng) * 0.01, gap_hops(rng) * 0.01,
                             f0(rng), amp(rng), 16000, 0.05, 0.05);
}

}  // namespace

TEST_CASE("f0 tracker finds a 220 Hz tone") {
    AudioClip tone = synth_sine(220.0, 3.0, 16000, 0.8);
    FrameSequence frames = frame_signal(tone, 25.0, 10.0);
    F0Track track = estimate_f0_track(frames, 60.0, 500.0);

    REQUIRE(track.entries.size() == frames.size());
    double sum = 0.0;
    size_t interior = 0;
    for (size_t i = 2; i + 2 < track.entries.size(); ++i) {
        CHECK(track.entries[i].voiced);
        if (track.entries[i].voiced) {
            sum += track.entries[i].f0_hz;
            ++interior;
        }
    }
    REQUIRE(interior > 0);
    double mean = sum / double(interior);
    CHECK(mean > 219.0);
    CHECK(mean < 221.0);
}

TEST_CASE("zero-mean white noise is mostly unvoiced") {
    AudioClip noise = synth_white_noise(2.0, 16000, 12345, 0.5);
    FrameSequence frames = frame_signal(noise, 25.0, 10.0);
    F0Track track = estimate_f0_track(frames, 60.0, 500.0);
    size_t unvoiced = track.entries.size() - track.voiced_count();
    CHECK(double(unvoiced) / double(track.entries.size()) >= 0.90);
}

TEST_CASE("digital silence has zero voiced frames") {
    AudioClip silence = synth_silence(1.0, 16000);
    FrameSequence frames = frame_signal(silence, 25.0, 10.0);
    F0Track track = estimate_f0_track(frames, 60.0, 500.0);
    CHECK(track.voiced_count() == 0);
    CHECK(track.mean_voiced_f0() == 0.0);
}

TEST_CASE("period extraction on a 220 Hz tone") {
    AudioClip tone = synth_sine(220.0, 2.0, 16000, 0.8);
    FrameSequence frames = frame_signal(tone, 25.0, 10.0);
    F0Track track = estimate_f0_track(frames, 60.0, 500.0);
    PeriodSequence seq = extract_periods(tone, track);

    REQUIRE(!seq.empty());
    CHECK(seq.total_periods() > 300);  // about 440 cycles in 2 s
    const double expected = 1.0 / 220.0;
    for (const PeriodSequence::Run& run : seq.runs) {
        for (double p : run.periods) {
            CHECK(p > expected * 0.95);
            CHECK(p < expected * 1.05);
        }
        CHECK(run.boundaries.size() == run.periods.size() + 1);
        CHECK(run.amplitudes.size() == run.periods.size());
        CHECK(std::is_sorted(run.boundaries.begin(), run.boundaries.end()));
    }
}

TEST_CASE("all-unvoiced track yields an empty period sequence") {
    AudioClip noise = synth_white_noise(0.5, 16000, 99, 0.3);
    FrameSequence frames = frame_signal(noise, 25.0, 10.0);
    F0Track track;
    track.sample_rate = 16000;
    track.frame_len = 400;
    track.hop = 160;
    track.f0_min_hz = 60;
    track.f0_max_hz = 500;
    track.entries.resize(frames.size());  // all unvoiced
    CHECK(extract_periods(noise, track).empty());
}

TEST_CASE("two-frequency concatenation produces two voiced runs with distinct periods") {
    AudioClip a = synth_sine(100.0, 0.5, 16000, 0.8);
    AudioClip b = synth_sine(200.0, 0.5, 16000, 0.8);
    AudioClip clip = concat_clips({a, b});
    FrameSequence frames = frame_signal(clip, 25.0, 10.0);
    F0Track track = estimate_f0_track(frames, 60.0, 500.0);
    PeriodSequence seq = extract_periods(clip, track);

    std::vector<double> run_means;
    for (const PeriodSequence::Run& run : seq.runs) {
        if (run.periods.size() < 10) continue;  // ignore transition fragments
        double mean = 0.0;
        for (double p : run.periods) mean += p;
        run_means.push_back(mean / double(run.periods.size()));
    }
    REQUIRE(run_means.size() == 2);
    std::sort(run_means.begin(), run_means.end());
    CHECK(run_means[0] > 0.95 / 200.0);
    CHECK(run_means[0] < 1.05 / 200.0);
    CHECK(run_means[1] > 0.95 / 100.0);
    CHECK(run_means[1] < 1.05 / 100.0);
}

TEST_CASE("local jitter on hand-marked periods") {
    CHECK(compute_jitter(sequence_from({0.005, 0.005, 0.005}, {1, 1, 1})) == 0.0);
    double alternating =
        compute_jitter(sequence_from({0.0045, 0.0055, 0.0045, 0.0055}, {1, 1, 1, 1}));
    CHECK(alternating == doctest::Approx(0.20).epsilon(1e-12));
    double slight = compute_jitter(sequence_from({0.005, 0.00505, 0.005, 0.00505}, {1, 1, 1, 1}));
    CHECK(slight == doctest::Approx(0.05 / 5.025).epsilon(1e-9));  // ~0.00995
    CHECK(compute_jitter(PeriodSequence{}) == 0.0);
    CHECK(compute_jitter(sequence_from({0.005}, {1})) == 0.0);  // fewer than 2 periods
}

TEST_CASE("local shimmer on hand-marked amplitudes") {
    CHECK(compute_shimmer(sequence_from({0.005, 0.005, 0.005}, {1, 1, 1})) == 0.0);
    double alternating =
        compute_shimmer(sequence_from({0.005, 0.005, 0.005, 0.005}, {0.9, 1.1, 0.9, 1.1}));
    CHECK(alternating == doctest::Approx(0.20).epsilon(1e-12));
    double pair = compute_shimmer(sequence_from({0.005, 0.005}, {1.0, 0.5}));
    CHECK(pair == doctest::Approx(0.5 / 0.75).epsilon(1e-12));  // ~0.6667
}

TEST_CASE("jitter and shimmer are invariant under time reversal") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> period(0.004, 0.006);
    std::uniform_real_distribution<double> amp(0.5, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> periods, amps;
        size_t n = 2 + size_t(rng() % 30);
        for (size_t i = 0; i < n; ++i) {
            periods.push_back(period(rng));
            amps.push_back(amp(rng));
        }
        std::vector<double> rp(periods.rbegin(), periods.rend());
        std::vector<double> ra(amps.rbegin(), amps.rend());
        CHECK(compute_jitter(sequence_from(periods, amps)) ==
              doctest::Approx(compute_jitter(sequence_from(rp, ra))).epsilon(1e-12));
        CHECK(compute_shimmer(sequence_from(periods, amps)) ==
              doctest::Approx(compute_shimmer(sequence_from(rp, ra))).epsilon(1e-12));
    }
}

TEST_CASE("intensity of a full-scale tone with integer cycles per frame") {
    // 200 Hz at 16 kHz puts exactly 10 cycles into every 400-sample frame,
    // and 16080 samples make every frame a full frame.
    AudioClip tone = synth_sine(200.0, 16080.0 / 16000.0, 16000, 1.0);
    REQUIRE(tone.samples.size() == 16080);
    FrameSequence frames = frame_signal(tone, 25.0, 10.0);
    VadMask vad = detect_voice_activity(frames);
    CHECK(vad.speech_frame_count() == frames.size());
    CHECK(compute_intensity(frames, vad) == doctest::Approx(-3.0103).epsilon(1e-4));

    AudioClip half = synth_sine(200.0, 16080.0 / 16000.0, 16000, 0.5);
    FrameSequence frames_half = frame_signal(half, 25.0, 10.0);
    VadMask vad_half = detect_voice_activity(frames_half);
    CHECK(compute_intensity(frames_half, vad_half) == doctest::Approx(-9.0309).epsilon(1e-4));
}

TEST_CASE("intensity of silence is the -96 dBFS sentinel") {
    AudioClip silence = synth_silence(1.0, 16000);
    FrameSequence frames = frame_signal(silence, 25.0, 10.0);
    VadMask vad = detect_voice_activity(frames);
    CHECK(vad.speech_frame_count() == 0);
    CHECK(compute_intensity(frames, vad) == kSilenceFloorDb);
}

TEST_CASE("volume includes pauses, intensity excludes them") {
    AudioClip tone = synth_sine(200.0, 16080.0 / 16000.0, 16000, 1.0);
    CHECK(compute_volume(tone) == doctest::Approx(-3.0103).epsilon(1e-4));

    AudioClip padded = concat_clips({tone, synth_silence(16080.0 / 16000.0, 16000)});
    CHECK(compute_volume(padded) == doctest::Approx(-6.0206).epsilon(1e-4));
    FrameSequence frames = frame_signal(padded, 25.0, 10.0);
    VadMask vad = detect_voice_activity(frames);
    double intensity = compute_intensity(frames, vad);
    CHECK(intensity > -3.2);  // straddling frames blur the mean slightly
    CHECK(intensity < -2.9);

    CHECK(compute_volume(synth_silence(0.5, 16000)) == kSilenceFloorDb);
}

TEST_CASE("VAD marks the tone half of silence+tone") {
    AudioClip clip = concat_clips({synth_silence(1.0, 16000), synth_sine(220.0, 1.0, 16000, 0.6)});
    FrameSequence frames = frame_signal(clip, 25.0, 10.0);
    VadMask vad = detect_voice_activity(frames);
    // Frames fully inside each half, away from the boundary.
    for (size_t i = 0; i < 95; ++i) CHECK(!vad.speech[i]);
    for (size_t i = 101; i < frames.size() - 1; ++i) CHECK(vad.speech[i]);
}

TEST_CASE("VAD on silence is empty") {
    FrameSequence frames = frame_signal(synth_silence(1.0, 16000), 25.0, 10.0);
    VadMask vad = detect_voice_activity(frames);
    CHECK(vad.speech_frame_count() == 0);
    CHECK(vad.speech_time_s() == 0.0);
}

TEST_CASE("a 50 ms dip inside a tone is bridged into one speech run") {
    AudioClip clip = concat_clips({synth_sine(220.0, 0.5, 16000, 0.6),
                                   synth_silence(0.05, 16000),
                                   synth_sine(220.0, 0.5, 16000, 0.6)});
    FrameSequence frames = frame_signal(clip, 25.0, 10.0);
    VadMask vad = detect_voice_activity(frames);
    size_t first = vad.speech.size(), last = 0;
    for (size_t i = 0; i < vad.speech.size(); ++i) {
        if (vad.speech[i]) {
            first = std::min(first, i);
            last = i;
        }
    }
    REQUIRE(first < last);
    for (size_t i = first; i <= last; ++i) CHECK(vad.speech[i]);  // contiguous after closing
}

TEST_CASE("a 200 ms gap is not bridged") {
    AudioClip clip = concat_clips({synth_sine(220.0, 0.4, 16000, 0.6),
                                   synth_silence(0.2, 16000),
                                   synth_sine(220.0, 0.4, 16000, 0.6)});
    FrameSequence frames = frame_signal(clip, 25.0, 10.0);
    VadMask vad = detect_voice_activity(frames);
    size_t runs = 0;
    bool in_run = false;
    for (size_t i = 0; i < vad.speech.size(); ++i) {
        if (vad.speech[i] && !in_run) ++runs;
        in_run = vad.speech[i];
    }
    CHECK(runs == 2);
}

TEST_CASE("syllable nuclei: burst train, plateau, silence") {
    AudioClip bursts = synth_burst_train(6, 0.10, 0.20, 220.0, 0.7, 16000, 0.1, 0.1);
    FrameSequence frames = frame_signal(bursts, 25.0, 10.0);
    VadMask vad = detect_voice_activity(frames);
    CHECK(detect_syllable_nuclei(frames, vad) == 6);

    AudioClip steady = synth_sine(220.0, 1.5, 16000, 0.7);
    FrameSequence frames_steady = frame_signal(steady, 25.0, 10.0);
    VadMask vad_steady = detect_voice_activity(frames_steady);
    CHECK(detect_syllable_nuclei(frames_steady, vad_steady) == 1);

    FrameSequence frames_silence = frame_signal(synth_silence(1.0, 16000), 25.0, 10.0);
    VadMask vad_silence = detect_voice_activity(frames_silence);
    CHECK(detect_syllable_nuclei(frames_silence, vad_silence) == 0);
}

TEST_CASE("profile on the six-burst rate fixture") {
    // 6 x 0.25 s bursts with 0.1 s gaps: 2.0 s total, 1.5 s nominal speech.
    // The 100 ms gaps shrink to ~80 ms of fully-silent frames, so this
    // fixture runs with gap closing at 50 ms to keep the pauses.
    AudioClip clip = synth_burst_train(6, 0.25, 0.10, 220.0, 0.6, 16000);
    REQUIRE(clip.duration_s() == doctest::Approx(2.0).epsilon(1e-6));
    DspConfig cfg;
    cfg.vad_gap_ms = 50.0;
    AcousticProfile profile = extract_acoustic_profile(clip, cfg);

    CHECK(profile.syllable_count == 6);
    CHECK(profile.pitch_hz == doctest::Approx(220.0).epsilon(0.01));
    CHECK(profile.speech_rate_sps > 2.5);
    CHECK(profile.speech_rate_sps < 3.5);
    CHECK(profile.articulation_rate_sps > 3.5);
    CHECK(profile.articulation_rate_sps < 4.5);
    CHECK(profile.articulation_rate_sps >= profile.speech_rate_sps);
}

TEST_CASE("profile of silence carries the sentinel values") {
    AcousticProfile profile = extract_acoustic_profile(synth_silence(1.0, 16000), {});
    CHECK(profile.pitch_hz == 0.0);
    CHECK(profile.speech_rate_sps == 0.0);
    CHECK(profile.articulation_rate_sps == 0.0);
    CHECK(profile.jitter_ratio == 0.0);
    CHECK(profile.shimmer_ratio == 0.0);
    CHECK(profile.volume_db == kSilenceFloorDb);
    CHECK(profile.intensity_db == kSilenceFloorDb);
    CHECK(profile.syllable_count == 0);
    CHECK(profile.voiced_frame_count == 0);
    CHECK(profile.is_degenerate());
}

TEST_CASE("profile on a ten-burst 5 s fixture matches the rate formulas") {
    AudioClip clip = synth_burst_train(10, 0.40, 0.10, 180.0, 0.6, 16000, 0.05, 0.05);
    REQUIRE(clip.duration_s() == doctest::Approx(5.0).epsilon(1e-6));
    DspConfig cfg;
    cfg.vad_gap_ms = 50.0;
    AcousticProfile profile = extract_acoustic_profile(clip, cfg);
    CHECK(profile.syllable_count == 10);
    CHECK(profile.speech_rate_sps > 1.9);
    CHECK(profile.speech_rate_sps < 2.1);
    CHECK(profile.articulation_rate_sps > 2.2);
    CHECK(profile.articulation_rate_sps < 2.8);
}

TEST_CASE("empty clip raises EmptyAudioError") {
    AudioClip empty;
    empty.sample_rate = 16000;
    CHECK_THROWS_AS(extract_acoustic_profile(empty, {}), EmptyAudioError);
}

TEST_CASE("pure tone jitter and shimmer stay under 0.002") {
    for (double freq : {120.0, 220.0, 333.0}) {
        AcousticProfile profile = extract_acoustic_profile(synth_sine(freq, 2.0, 16000, 0.8), {});
        CHECK(profile.jitter_ratio < 0.002);
        CHECK(profile.shimmer_ratio < 0.002);
    }
}

TEST_CASE("amplitude scaling shifts levels and leaves shape features unchanged") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        AudioClip base = random_burst_fixture(rng);
        AcousticProfile p0 = extract_acoustic_profile(base, {});
        for (double gain : {0.5, 0.3, 2.0}) {
            AudioClip scaled = base;
            for (float& s : scaled.samples) s = float(double(s) * gain);
            AcousticProfile p1 = extract_acoustic_profile(scaled, {});

            auto rel_equal = [](double a, double b) {
                if (a == 0.0 && b == 0.0) return true;
                return std::abs(a - b) <= 1e-6 * std::max(std::abs(a), std::abs(b)) + 1e-12;
            };
            CHECK(rel_equal(p0.pitch_hz, p1.pitch_hz));
            CHECK(rel_equal(p0.jitter_ratio, p1.jitter_ratio));
            CHECK(rel_equal(p0.shimmer_ratio, p1.shimmer_ratio));
            CHECK(rel_equal(p0.speech_rate_sps, p1.speech_rate_sps));
            CHECK(rel_equal(p0.articulation_rate_sps, p1.articulation_rate_sps));
            double shift = 20.0 * std::log10(gain);
            CHECK(p1.volume_db - p0.volume_db == doctest::Approx(shift).epsilon(1e-3));
            CHECK(p1.intensity_db - p0.intensity_db == doctest::Approx(shift).epsilon(1e-3));
        }
    }
}

TEST_CASE("articulation rate is never below speech rate on random fixtures") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        AcousticProfile profile = extract_acoustic_profile(random_burst_fixture(rng), {});
        if (profile.syllable_count > 0) {
            CHECK(profile.articulation_rate_sps >= profile.speech_rate_sps);
        }
    }
}

TEST_CASE("extraction is deterministic bit-for-bit") {
    std::mt19937_64 rng(53);
    AudioClip clip = random_burst_fixture(rng);
    AcousticProfile a = extract_acoustic_profile(clip, {});
    AcousticProfile b = extract_acoustic_profile(clip, {});
    CHECK(a.to_json() == b.to_json());
    CHECK(std::memcmp(&a.pitch_hz, &b.pitch_hz, sizeof(double)) == 0);
    CHECK(a.syllable_count == b.syllable_count);
    CHECK(a.voiced_frame_count == b.voiced_frame_count);
}

TEST_CASE("profile JSON export carries exactly the seven documented keys") {
    AcousticProfile profile = extract_acoustic_profile(synth_sine(220.0, 0.5, 16000, 0.6), {});
    std::string json = profile.to_json();
    for (const char* key : {"pitch_hz", "speech_rate_sps", "volume_db", "jitter_ratio",
                            "shimmer_ratio", "intensity_db", "articulation_rate_sps"}) {
        CHECK(json.find(std::string("\"") + key + "\"") != std::string::npos);
    }
    CHECK(json.find("syllable_count") == std::string::npos);
    AcousticProfile parsed = AcousticProfile::from_json(json);
    CHECK(parsed.pitch_hz == profile.pitch_hz);
    CHECK(parsed.intensity_db == profile.intensity_db);
}
