// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace emograph {

/// Mono, full-scale-normalized audio at a known sample rate.
/// All samples lie in [-1, +1]; multi-channel sources are downmixed by
/// arithmetic channel mean at load time.
struct AudioClip {
    std::vector<float> samples;
    uint32_t sample_rate = 0;
    std::string source_id;

    double duration_s() const {
        return sample_rate == 0 ? 0.0 : double(samples.size()) / double(sample_rate);
    }
    bool empty() const { return samples.empty(); }
};

/// Overlapping analysis windows cut from a clip. The tapering function is
/// recorded here and applied lazily by consumers that need it (windowed()).
struct FrameSequence {
    std::vector<std::vector<float>> frames;  // each exactly frame_len samples, zero-padded
    uint32_t sample_rate = 0;
    double frame_len_ms = 0;
    double hop_ms = 0;
    std::string window = "hann";

    size_t size() const { return frames.size(); }
    size_t frame_len_samples() const { return frames.empty() ? 0 : frames[0].size(); }
    size_t hop_samples() const {
        return size_t(double(sample_rate) * hop_ms / 1000.0 + 0.5);
    }
    double hop_s() const { return hop_ms / 1000.0; }

    /// Frame i with the recorded taper applied.
    std::vector<float> windowed(size_t i) const;
};

/// Reads a RIFF/WAV file (PCM 8/16/24/32-bit integer or 32-bit float, any
/// channel count and rate), downmixes to mono, normalizes to [-1, 1] by the
/// format's full-scale value, and resamples to target_rate by linear
/// interpolation.
///
/// Throws UnsupportedFormatError, CorruptHeaderError, EmptyAudioError.
AudioClip load_audio(const std::string& path, uint32_t target_rate = 16000);

enum class WavFormat { pcm16, float32 };

/// Writes a mono WAV. float32 output round-trips samples bit-exactly.
void write_wav(const std::string& path, const AudioClip& clip,
               WavFormat format = WavFormat::float32);

/// Cuts a clip into frames. frame_len_ms >= hop_ms > 0 or BadFrameSpecError.
/// The last partial frame is zero-padded, never dropped; for N >= 1 samples
/// the frame count is ceil(max(0, N - frame_len) / hop) + 1.
FrameSequence frame_signal(const AudioClip& clip, double frame_len_ms, double hop_ms);

/// In-memory clip resampling (linear interpolation), exposed for tests.
AudioClip resample(const AudioClip& clip, uint32_t target_rate);

/// Mono downmix + normalization applied to raw interleaved channel data;
/// used by load_audio and by synthetic-fixture helpers.
AudioClip make_clip(std::vector<float> samples, uint32_t sample_rate,
                    std::string source_id = "");

}  // namespace emograph
