// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "emograph/audio.hpp"

namespace test_support {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<uint64_t> counter{0};
        auto base = std::filesystem::temp_directory_path();
        path_ = (base / ("emograph-test-" + std::to_string(::getpid()) + "-" +
                         std::to_string(counter.fetch_add(1))))
                    .string();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

/// Goertzel power at an arbitrary frequency; the independent spectral oracle.
inline double goertzel_power(const emograph::AudioClip& clip, double freq_hz) {
    const double w = 2.0 * std::numbers::pi * freq_hz / clip.sample_rate;
    const double coeff = 2.0 * std::cos(w);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (float x : clip.samples) {
        s0 = double(x) + coeff * s1 - s2;
        s2 = s1;
        s1 = s0;
    }
    return s1 * s1 + s2 * s2 - coeff * s1 * s2;
}

/// Grid scan for the dominant frequency in [lo, hi] (step in Hz).
inline double dominant_frequency(const emograph::AudioClip& clip, double lo, double hi,
                                 double step = 0.25) {
    double best_f = lo, best_p = -1.0;
    for (double f = lo; f <= hi; f += step) {
        double p = goertzel_power(clip, f);
        if (p > best_p) {
            best_p = p;
            best_f = f;
        }
    }
    return best_f;
}

/// Direct evaluation of the local jitter/shimmer formula on marked cycles:
/// mean absolute consecutive difference over the mean value.
inline double oracle_local_ratio(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    double diff = 0.0, mean = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        mean += values[i];
        if (i > 0) diff += std::abs(values[i] - values[i - 1]);
    }
    diff /= double(values.size() - 1);
    mean /= double(values.size());
    return diff / mean;
}

/// Independent nearest-rank percentile: smallest 1-based index i with
/// i >= pct/100 * n, found by iteration rather than the closed form.
inline size_t oracle_nearest_rank_index(size_t pct, size_t n) {
    size_t i = 1;
    while (i * 100 < pct * n) ++i;
    return i;
}

/// Hand-rolled RIFF writer so the loader is tested against independently
/// constructed files (any format tag / layout, including broken ones).
inline void write_raw_wav(const std::string& path, uint16_t format_tag, uint16_t bits,
                          uint16_t channels, uint32_t rate, const std::vector<uint8_t>& payload) {
    std::string out;
    auto u16 = [&](uint16_t v) {
        out.push_back(char(v & 0xff));
        out.push_back(char(v >> 8));
    };
    auto u32 = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
    };
    out += "RIFF";
    u32(uint32_t(36 + payload.size()));
    out += "WAVE";
    out += "fmt ";
    u32(16);
    u16(format_tag);
    u16(channels);
    u32(rate);
    u32(rate * channels * bits / 8);
    u16(uint16_t(channels * bits / 8));
    u16(bits);
    out += "data";
    u32(uint32_t(payload.size()));
    out.append(reinterpret_cast<const char*>(payload.data()), payload.size());
    std::ofstream f(path, std::ios::binary);
    f.write(out.data(), std::streamsize(out.size()));
}

inline std::vector<uint8_t> int16_payload(const std::vector<int16_t>& samples) {
    std::vector<uint8_t> bytes(samples.size() * 2);
    std::memcpy(bytes.data(), samples.data(), bytes.size());
    return bytes;
}

}  // namespace test_support
