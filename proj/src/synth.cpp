// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "emograph/errors.hpp"

namespace emograph {

namespace fs = std::filesystem;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

AudioClip synth_sine(double freq_hz, double seconds, uint32_t rate, double amplitude) {
    size_t n = size_t(seconds * rate + 0.5);
    std::vector<float> samples(n);
    for (size_t i = 0; i < n; ++i) {
        samples[i] = float(amplitude * std::sin(kTwoPi * freq_hz * double(i) / rate));
    }
    return make_clip(std::move(samples), rate, "sine");
}

AudioClip synth_silence(double seconds, uint32_t rate) {
    return make_clip(std::vector<float>(size_t(seconds * rate + 0.5), 0.0f), rate, "silence");
}

AudioClip synth_white_noise(double seconds, uint32_t rate, uint64_t seed, double amplitude) {
    size_t n = size_t(seconds * rate + 0.5);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    std::vector<float> samples(n);
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) {
        samples[i] = float(dist(rng));
        mean += samples[i];
    }
    mean /= double(n == 0 ? 1 : n);
    for (float& s : samples) s = float(s - mean);  // zero-mean
    return make_clip(std::move(samples), rate, "noise");
}

AudioClip concat_clips(const std::vector<AudioClip>& parts) {
    if (parts.empty()) return {};
    AudioClip out;
    out.sample_rate = parts[0].sample_rate;
    out.source_id = "concat";
    for (const AudioClip& p : parts) {
        if (p.sample_rate != out.sample_rate) throw Error("concat_clips: rate mismatch");
        out.samples.insert(out.samples.end(), p.samples.begin(), p.samples.end());
    }
    return out;
}

AudioClip synth_burst_train(size_t n_bursts, double burst_s, double gap_s, double freq_hz,
                            double amplitude, uint32_t rate, double lead_s, double tail_s) {
    std::vector<AudioClip> parts;
    if (lead_s > 0) parts.push_back(synth_silence(lead_s, rate));
    for (size_t i = 0; i < n_bursts; ++i) {
        parts.push_back(synth_sine(freq_hz, burst_s, rate, amplitude));
        if (i + 1 < n_bursts) parts.push_back(synth_silence(gap_s, rate));
    }
    if (tail_s > 0) parts.push_back(synth_silence(tail_s, rate));
    AudioClip clip = concat_clips(parts);
    clip.source_id = "burst-train";
    return clip;
}

AudioClip synth_cycle_train(const std::vector<double>& periods_s,
                            const std::vector<double>& amplitudes, uint32_t rate) {
    if (periods_s.size() != amplitudes.size()) {
        throw Error("synth_cycle_train: periods and amplitudes must align");
    }
    double total = 0.0;
    for (double p : periods_s) total += p;
    size_t n = size_t(total * rate + 0.5);
    std::vector<float> samples(n, 0.0f);
    double start = 0.0;
    for (size_t c = 0; c < periods_s.size(); ++c) {
        double period = periods_s[c];
        size_t s0 = size_t(std::ceil(start * rate));
        size_t s1 = std::min(n, size_t(std::ceil((start + period) * rate)));
        for (size_t i = s0; i < s1; ++i) {
            double t = double(i) / rate - start;
            samples[i] = float(amplitudes[c] * std::sin(kTwoPi * t / period));
        }
        start += period;
    }
    return make_clip(std::move(samples), rate, "cycle-train");
}

AudioClip synth_alternating_period_train(double period_a_s, double period_b_s, size_t n_cycles,
                                         double amplitude, uint32_t rate) {
    std::vector<double> periods(n_cycles);
    for (size_t i = 0; i < n_cycles; ++i) periods[i] = i % 2 == 0 ? period_a_s : period_b_s;
    return synth_cycle_train(periods, std::vector<double>(n_cycles, amplitude), rate);
}

AudioClip synth_alternating_amplitude_train(double period_s, double amp_a, double amp_b,
                                            size_t n_cycles, uint32_t rate) {
    std::vector<double> amps(n_cycles);
    for (size_t i = 0; i < n_cycles; ++i) amps[i] = i % 2 == 0 ? amp_a : amp_b;
    return synth_cycle_train(std::vector<double>(n_cycles, period_s), amps, rate);
}

FixtureCorpus generate_fixture_corpus(const std::string& dir, size_t n, uint64_t seed) {
    struct LabelScript {
        const char* label;
        double base_f0;
        const char* transcript;
    };
    static const LabelScript kScripts[] = {
        {"neutral", 140.0, "the meeting is scheduled for tuesday afternoon in the main office"},
        {"happy", 260.0, "I am so happy and delighted, this wonderful news made my day"},
        {"sad", 110.0, "I feel so sad and heartbroken, this loss leaves me miserable"},
        {"surprised", 300.0, "wow, I am completely surprised and astonished by this unexpected twist"},
        {"angry", 220.0, "I am so angry and furious, this terrible delay ruined everything"},
    };

    fs::create_directories(dir + "/wav");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> bursts_dist(3, 7);
    std::uniform_real_distribution<double> burst_dist(0.15, 0.30);
    std::uniform_real_distribution<double> gap_dist(0.14, 0.22);
    std::uniform_real_distribution<double> amp_dist(0.30, 0.70);
    std::uniform_real_distribution<double> f0_scale(0.9, 1.1);

    std::string manifest;
    for (size_t i = 0; i < n; ++i) {
        const LabelScript& script = kScripts[i % std::size(kScripts)];
        char id[32];
        std::snprintf(id, sizeof(id), "utt-%04zu", i + 1);
        std::string wav_path = dir + "/wav/" + id + ".wav";

        // Hop-aligned burst/gap durations keep VAD decisions stable.
        auto align = [](double s) { return std::round(s * 100.0) / 100.0; };
        AudioClip clip = synth_burst_train(
            size_t(bursts_dist(rng)), align(burst_dist(rng)), align(gap_dist(rng)),
            script.base_f0 * f0_scale(rng), amp_dist(rng), 16000, 0.05, 0.05);
        clip.source_id = id;
        write_wav(wav_path, clip, WavFormat::float32);

        nlohmann::ordered_json j;
        j["utterance_id"] = id;
        j["audio_path"] = wav_path;
        j["transcript"] = script.transcript;
        j["gold_label"] = script.label;
        j["session"] = "s" + std::to_string(i % 5 + 1);
        j["language"] = "en";
        manifest += j.dump();
        manifest += "\n";
    }

    FixtureCorpus corpus;
    corpus.size = n;
    corpus.manifest_path = dir + "/manifest.jsonl";
    corpus.labelset_path = dir + "/labelset.json";
    {
        std::ofstream out(corpus.manifest_path);
        if (!out) throw Error("cannot write " + corpus.manifest_path);
        out << manifest;
    }
    {
        nlohmann::ordered_json j;
        j["dataset_id"] = "synth";
        j["labels"] = {"neutral", "happy", "sad", "surprised", "angry"};
        j["notes"] = "synthetic tone-burst fixture corpus";
        std::ofstream out(corpus.labelset_path);
        if (!out) throw Error("cannot write " + corpus.labelset_path);
        out << j.dump(2) << "\n";
    }
    return corpus;
}

}  // namespace emograph
