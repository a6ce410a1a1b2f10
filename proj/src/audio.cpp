// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "emograph/errors.hpp"

namespace emograph {

namespace {

constexpr uint16_t kFormatPcm = 0x0001;
constexpr uint16_t kFormatIeeeFloat = 0x0003;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t read_u16(const uint8_t* p) { return uint16_t(p[0]) | uint16_t(p[1]) << 8; }
uint32_t read_u32(const uint8_t* p) {
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}

void put_u16(std::string& out, uint16_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char(v >> 8));
}
void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

struct WavInfo {
    uint16_t format = 0;
    uint16_t channels = 0;
    uint32_t sample_rate = 0;
    uint16_t bits = 0;
    std::vector<uint8_t> data;
};

WavInfo parse_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptHeaderError("cannot open WAV file: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw CorruptHeaderError("not a RIFF/WAVE file: " + path);
    }

    WavInfo info;
    bool have_fmt = false, have_data = false;
    size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const uint8_t* hdr = bytes.data() + pos;
        uint32_t chunk_size = read_u32(hdr + 4);
        size_t body = pos + 8;
        if (body + chunk_size > bytes.size()) {
            // Tolerate a truncated final data chunk only.
            if (std::memcmp(hdr, "data", 4) == 0) {
                chunk_size = uint32_t(bytes.size() - body);
            } else {
                throw CorruptHeaderError("chunk overruns file: " + path);
            }
        }
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw CorruptHeaderError("fmt chunk too small: " + path);
            info.format = read_u16(bytes.data() + body);
            info.channels = read_u16(bytes.data() + body + 2);
            info.sample_rate = read_u32(bytes.data() + body + 4);
            info.bits = read_u16(bytes.data() + body + 14);
            if (info.format == kFormatExtensible && chunk_size >= 40) {
                // Sub-format GUID starts with the classic format tag.
                info.format = read_u16(bytes.data() + body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            info.data.assign(bytes.begin() + long(body), bytes.begin() + long(body + chunk_size));
            have_data = true;
        }
        pos = body + chunk_size + (chunk_size & 1);  // RIFF chunks are 2-byte aligned
    }
    if (!have_fmt || !have_data) throw CorruptHeaderError("missing fmt/data chunk: " + path);
    if (info.channels == 0 || info.sample_rate == 0) {
        throw CorruptHeaderError("fmt declares zero channels or rate: " + path);
    }
    return info;
}

// Decodes one interleaved sample to [-1, 1] by the format's full scale.
float decode_sample(const uint8_t* p, uint16_t format, uint16_t bits) {
    if (format == kFormatPcm) {
        switch (bits) {
            case 8:
                return (float(p[0]) - 128.0f) / 128.0f;
            case 16: {
                int16_t v = int16_t(read_u16(p));
                return float(v) / 32768.0f;
            }
            case 24: {
                int32_t v = int32_t(uint32_t(p[0]) << 8 | uint32_t(p[1]) << 16 |
                                    uint32_t(p[2]) << 24) >> 8;
                return float(double(v) / 8388608.0);
            }
            case 32: {
                int32_t v = int32_t(read_u32(p));
                return float(double(v) / 2147483648.0);
            }
            default:
                throw UnsupportedFormatError("unsupported PCM bit depth: " + std::to_string(bits));
        }
    }
    if (format == kFormatIeeeFloat && bits == 32) {
        float v;
        uint32_t raw = read_u32(p);
        std::memcpy(&v, &raw, 4);
        return std::clamp(v, -1.0f, 1.0f);
    }
    throw UnsupportedFormatError("unsupported WAV format tag " + std::to_string(format) +
                                 " / " + std::to_string(bits) + " bits");
}

}  // namespace

AudioClip make_clip(std::vector<float> samples, uint32_t sample_rate, std::string source_id) {
    AudioClip clip;
    clip.samples = std::move(samples);
    clip.sample_rate = sample_rate;
    clip.source_id = std::move(source_id);
    return clip;
}

AudioClip load_audio(const std::string& path, uint32_t target_rate) {
    WavInfo info = parse_wav(path);
    if (info.format != kFormatPcm && info.format != kFormatIeeeFloat) {
        throw UnsupportedFormatError("compressed/non-PCM WAV not supported (format tag " +
                                     std::to_string(info.format) + ")");
    }
    size_t bytes_per_sample = info.bits / 8;
    if (bytes_per_sample == 0) throw CorruptHeaderError("zero bit depth: " + path);
    size_t frame_bytes = bytes_per_sample * info.channels;
    size_t n_frames = frame_bytes == 0 ? 0 : info.data.size() / frame_bytes;
    if (n_frames == 0) throw EmptyAudioError("no samples in " + path);

    std::vector<float> mono(n_frames);
    for (size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (uint16_t c = 0; c < info.channels; ++c) {
            acc += decode_sample(info.data.data() + i * frame_bytes + c * bytes_per_sample,
                                 info.format, info.bits);
        }
        mono[i] = float(acc / info.channels);
    }

    AudioClip clip = make_clip(std::move(mono), info.sample_rate, path);
    if (target_rate != 0 && target_rate != clip.sample_rate) clip = resample(clip, target_rate);
    return clip;
}

AudioClip resample(const AudioClip& clip, uint32_t target_rate) {
    if (target_rate == 0) throw BadFrameSpecError("target rate must be positive");
    if (clip.sample_rate == target_rate || clip.samples.empty()) {
        AudioClip out = clip;
        out.sample_rate = target_rate;
        return out;
    }
    const size_t n = clip.samples.size();
    size_t out_n = size_t((uint64_t(n) * target_rate) / clip.sample_rate);
    if (out_n == 0) out_n = 1;
    std::vector<float> out(out_n);
    const double step = double(clip.sample_rate) / double(target_rate);
    for (size_t i = 0; i < out_n; ++i) {
        double pos = double(i) * step;
        size_t i0 = size_t(pos);
        if (i0 >= n - 1) {
            out[i] = clip.samples[n - 1];
            continue;
        }
        double frac = pos - double(i0);
        out[i] = float((1.0 - frac) * clip.samples[i0] + frac * clip.samples[i0 + 1]);
    }
    AudioClip res = make_clip(std::move(out), target_rate, clip.source_id);
    return res;
}

void write_wav(const std::string& path, const AudioClip& clip, WavFormat format) {
    const uint16_t bits = format == WavFormat::pcm16 ? 16 : 32;
    const uint16_t tag = format == WavFormat::pcm16 ? kFormatPcm : kFormatIeeeFloat;
    const uint32_t byte_rate = clip.sample_rate * bits / 8;
    const uint32_t data_size = uint32_t(clip.samples.size() * bits / 8);

    std::string out;
    out.reserve(44 + data_size);
    out += "RIFF";
    put_u32(out, 36 + data_size);
    out += "WAVE";
    out += "fmt ";
    put_u32(out, 16);
    put_u16(out, tag);
    put_u16(out, 1);  // mono
    put_u32(out, clip.sample_rate);
    put_u32(out, byte_rate);
    put_u16(out, uint16_t(bits / 8));
    put_u16(out, bits);
    out += "data";
    put_u32(out, data_size);
    for (float s : clip.samples) {
        if (format == WavFormat::pcm16) {
            float c = std::clamp(s, -1.0f, 1.0f);
            int v = int(std::lrint(c * 32767.0f));
            put_u16(out, uint16_t(int16_t(v)));
        } else {
            uint32_t raw;
            std::memcpy(&raw, &s, 4);
            put_u32(out, raw);
        }
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write WAV file: " + path);
    f.write(out.data(), std::streamsize(out.size()));
}

FrameSequence frame_signal(const AudioClip& clip, double frame_len_ms, double hop_ms) {
    if (hop_ms <= 0 || frame_len_ms < hop_ms) {
        throw BadFrameSpecError("need frame_len_ms >= hop_ms > 0 (got frame " +
                                std::to_string(frame_len_ms) + " ms, hop " +
                                std::to_string(hop_ms) + " ms)");
    }
    FrameSequence seq;
    seq.sample_rate = clip.sample_rate;
    seq.frame_len_ms = frame_len_ms;
    seq.hop_ms = hop_ms;

    const size_t n = clip.samples.size();
    const size_t frame_len = size_t(double(clip.sample_rate) * frame_len_ms / 1000.0 + 0.5);
    const size_t hop = size_t(double(clip.sample_rate) * hop_ms / 1000.0 + 0.5);
    if (frame_len == 0 || hop == 0) throw BadFrameSpecError("frame/hop shorter than one sample");
    if (n == 0) return seq;

    size_t count = n <= frame_len ? 1 : (n - frame_len + hop - 1) / hop + 1;
    seq.frames.reserve(count);
    for (size_t k = 0; k < count; ++k) {
        std::vector<float> frame(frame_len, 0.0f);
        size_t start = k * hop;
        size_t take = start < n ? std::min(frame_len, n - start) : 0;
        std::copy_n(clip.samples.begin() + long(start), take, frame.begin());
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

std::vector<float> FrameSequence::windowed(size_t i) const {
    const std::vector<float>& f = frames.at(i);
    std::vector<float> out(f.size());
    const size_t n = f.size();
    for (size_t k = 0; k < n; ++k) {
        double w = n > 1 ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(k) / double(n - 1))
                         : 1.0;
        out[k] = float(f[k] * w);
    }
    return out;
}

}  // namespace emograph
