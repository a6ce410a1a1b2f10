// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <random>

#include "emograph/audio.hpp"
#include "emograph/errors.hpp"
#include "emograph/synth.hpp"
#include "support.hpp"

using namespace emograph;
using test_support::TempDir;

TEST_CASE("16-bit stereo constant +16384 loads as mono 0.5") {
    TempDir tmp;
    std::vector<int16_t> samples;
    for (int i = 0; i < 800; ++i) {
        samples.push_back(16384);  // left
        samples.push_back(16384);  // right
    }
    std::string path = tmp.file("stereo.wav");
    test_support::write_raw_wav(path, 1, 16, 2, 16000, test_support::int16_payload(samples));

    AudioClip clip = load_audio(path, 16000);
    REQUIRE(clip.samples.size() == 800);
    for (float s : clip.samples) CHECK(s == doctest::Approx(0.5f).epsilon(1e-9));
}

TEST_CASE("zero-length WAV raises EmptyAudioError") {
    TempDir tmp;
    std::string path = tmp.file("empty.wav");
    test_support::write_raw_wav(path, 1, 16, 1, 16000, {});
    CHECK_THROWS_AS(load_audio(path, 16000), EmptyAudioError);
}

TEST_CASE("compressed format tag raises UnsupportedFormatError") {
    TempDir tmp;
    std::string path = tmp.file("adpcm.wav");
    test_support::write_raw_wav(path, 2, 4, 1, 16000, std::vector<uint8_t>(64, 0));
    CHECK_THROWS_AS(load_audio(path, 16000), UnsupportedFormatError);
}

TEST_CASE("garbage bytes raise CorruptHeaderError") {
    TempDir tmp;
    std::string path = tmp.file("garbage.wav");
    {
        std::ofstream f(path, std::ios::binary);
        f << "this is definitely not a RIFF header";
    }
    CHECK_THROWS_AS(load_audio(path, 16000), CorruptHeaderError);
}

TEST_CASE("8 kHz tone resampled to 16 kHz keeps its dominant frequency") {
    TempDir tmp;
    AudioClip tone = synth_sine(100.0, 1.0, 8000, 0.8);
    std::string path = tmp.file("tone8k.wav");
    write_wav(path, tone, WavFormat::float32);

    AudioClip clip = load_audio(path, 16000);
    CHECK(clip.sample_rate == 16000);
    CHECK(clip.samples.size() == 2 * tone.samples.size());
    double peak = test_support::dominant_frequency(clip, 50.0, 400.0);
    CHECK(peak == doctest::Approx(100.0).epsilon(0.01));  // within 1 Hz
}

TEST_CASE("float32 WAV round-trips bit-exactly") {
    TempDir tmp;
    std::mt19937 rng(7);
    std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
    std::vector<float> samples(4321);
    for (float& s : samples) s = dist(rng);
    AudioClip original = make_clip(samples, 16000, "roundtrip");

    std::string path = tmp.file("rt.wav");
    write_wav(path, original, WavFormat::float32);
    AudioClip loaded = load_audio(path, 16000);

    REQUIRE(loaded.samples.size() == original.samples.size());
    CHECK(std::memcmp(loaded.samples.data(), original.samples.data(),
                      samples.size() * sizeof(float)) == 0);
}

TEST_CASE("pcm16 WAV round-trips within one quantization step") {
    TempDir tmp;
    AudioClip tone = synth_sine(220.0, 0.25, 16000, 0.7);
    std::string path = tmp.file("rt16.wav");
    write_wav(path, tone, WavFormat::pcm16);
    AudioClip loaded = load_audio(path, 16000);
    REQUIRE(loaded.samples.size() == tone.samples.size());
    for (size_t i = 0; i < tone.samples.size(); ++i) {
        CHECK(std::abs(loaded.samples[i] - tone.samples[i]) <= 1.0f / 32768.0f + 1e-7f);
    }
}

TEST_CASE("frame count formula") {
    AudioClip one_second = synth_sine(220.0, 1.0, 16000, 0.5);
    FrameSequence frames = frame_signal(one_second, 25.0, 10.0);
    CHECK(frames.size() == 99);  // ceil((16000-400)/160) + 1
    CHECK(frames.frame_len_samples() == 400);
    CHECK(frames.hop_samples() == 160);

    AudioClip exact = make_clip(std::vector<float>(400, 0.1f), 16000, "one-frame");
    CHECK(frame_signal(exact, 25.0, 10.0).size() == 1);

    AudioClip shorter = make_clip(std::vector<float>(100, 0.1f), 16000, "short");
    FrameSequence padded = frame_signal(shorter, 25.0, 10.0);
    REQUIRE(padded.size() == 1);
    CHECK(padded.frames[0].size() == 400);  // zero-padded, never dropped
    for (size_t i = 100; i < 400; ++i) CHECK(padded.frames[0][i] == 0.0f);
}

TEST_CASE("hop longer than the frame raises BadFrameSpecError") {
    AudioClip clip = synth_sine(220.0, 0.5, 16000, 0.5);
    CHECK_THROWS_AS(frame_signal(clip, 25.0, 30.0), BadFrameSpecError);
    CHECK_THROWS_AS(frame_signal(clip, 25.0, 0.0), BadFrameSpecError);
    CHECK_THROWS_AS(frame_signal(clip, -5.0, -10.0), BadFrameSpecError);
}

TEST_CASE("framing covers every input sample at least once") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<size_t> len_dist(1, 40000);
    for (int trial = 0; trial < 25; ++trial) {
        size_t n = len_dist(rng);
        AudioClip clip = make_clip(std::vector<float>(n, 0.25f), 16000, "cover");
        FrameSequence frames = frame_signal(clip, 25.0, 10.0);
        size_t last_start = (frames.size() - 1) * frames.hop_samples();
        CHECK(last_start + frames.frame_len_samples() >= n);
        CHECK(last_start < n);  // the final frame holds real samples
    }
}

TEST_CASE("windowed frames taper to zero at the edges") {
    AudioClip clip = make_clip(std::vector<float>(800, 1.0f), 16000, "win");
    FrameSequence frames = frame_signal(clip, 25.0, 10.0);
    std::vector<float> w = frames.windowed(0);
    REQUIRE(w.size() == 400);
    CHECK(w.front() == doctest::Approx(0.0f).epsilon(1e-6));
    CHECK(w.back() == doctest::Approx(0.0f).epsilon(1e-6));
    CHECK(w[200] > 0.9f);
}

TEST_CASE("downmix averages an int16 stereo pair with opposite signs to zero") {
    TempDir tmp;
    std::vector<int16_t> samples;
    for (int i = 0; i < 100; ++i) {
        samples.push_back(12000);
        samples.push_back(-12000);
    }
    std::string path = tmp.file("cancel.wav");
    test_support::write_raw_wav(path, 1, 16, 2, 16000, test_support::int16_payload(samples));
    AudioClip clip = load_audio(path, 16000);
    for (float s : clip.samples) CHECK(s == doctest::Approx(0.0f).epsilon(1e-9));
}
