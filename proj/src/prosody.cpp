// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#include "emograph/prosody.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "emograph/errors.hpp"
#include "emograph/sha256.hpp"

namespace emograph {

namespace {

const std::array<std::string, kNumFeatures> kFeatureNames = {
    "pitch",  "speech_rate", "volume", "jitter", "shimmer", "intensity", "articulation_rate"};

double frame_rms(const std::vector<float>& frame) {
    double acc = 0.0;
    for (float s : frame) acc += double(s) * double(s);
    return frame.empty() ? 0.0 : std::sqrt(acc / double(frame.size()));
}

double to_db_floored(double rms) {
    if (rms <= 0.0) return kSilenceFloorDb;
    return std::max(kSilenceFloorDb, 20.0 * std::log10(rms));
}

std::vector<double> frame_db_contour(const FrameSequence& frames) {
    std::vector<double> db(frames.size());
    for (size_t i = 0; i < frames.size(); ++i) db[i] = to_db_floored(frame_rms(frames.frames[i]));
    return db;
}

}  // namespace

const std::array<Feature, kNumFeatures>& all_features() {
    static const std::array<Feature, kNumFeatures> order = {
        Feature::pitch,  Feature::speech_rate, Feature::volume,   Feature::jitter,
        Feature::shimmer, Feature::intensity,  Feature::articulation_rate};
    return order;
}

const std::string& feature_name(Feature f) { return kFeatureNames[size_t(f)]; }

Feature feature_from_name(const std::string& name) {
    for (size_t i = 0; i < kNumFeatures; ++i) {
        if (kFeatureNames[i] == name) return Feature(i);
    }
    throw MissingFeatureError("unknown acoustic feature: " + name);
}

std::string DspConfig::fingerprint() const {
    std::string s;
    s += std::to_string(sample_rate);
    for (double v : {frame_ms, hop_ms, f0_min_hz, f0_max_hz, voicing_threshold, vad_margin_db,
                     vad_floor_db, vad_gap_ms, syllable_smooth_ms, syllable_dip_db,
                     syllable_median_margin_db}) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "|%.17g", v);
        s += buf;
    }
    return sha256_hex(s).substr(0, 16);
}

size_t F0Track::voiced_count() const {
    size_t n = 0;
    for (const Entry& e : entries) n += e.voiced ? 1 : 0;
    return n;
}

double F0Track::mean_voiced_f0() const {
    double acc = 0.0;
    size_t n = 0;
    for (const Entry& e : entries) {
        if (e.voiced) {
            acc += e.f0_hz;
            ++n;
        }
    }
    return n == 0 ? 0.0 : acc / double(n);
}

size_t PeriodSequence::total_periods() const {
    size_t n = 0;
    for (const Run& r : runs) n += r.periods.size();
    return n;
}

double VadMask::speech_time_s() const { return double(speech_frame_count()) * hop_s; }

size_t VadMask::speech_frame_count() const {
    size_t n = 0;
    for (bool b : speech) n += b ? 1 : 0;
    return n;
}

double AcousticProfile::value(Feature f) const {
    switch (f) {
        case Feature::pitch: return pitch_hz;
        case Feature::speech_rate: return speech_rate_sps;
        case Feature::volume: return volume_db;
        case Feature::jitter: return jitter_ratio;
        case Feature::shimmer: return shimmer_ratio;
        case Feature::intensity: return intensity_db;
        case Feature::articulation_rate: return articulation_rate_sps;
    }
    return 0.0;
}

std::string AcousticProfile::to_json() const {
    nlohmann::ordered_json j;
    j["pitch_hz"] = pitch_hz;
    j["speech_rate_sps"] = speech_rate_sps;
    j["volume_db"] = volume_db;
    j["jitter_ratio"] = jitter_ratio;
    j["shimmer_ratio"] = shimmer_ratio;
    j["intensity_db"] = intensity_db;
    j["articulation_rate_sps"] = articulation_rate_sps;
    return j.dump(2);
}

AcousticProfile AcousticProfile::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    AcousticProfile p;
    p.pitch_hz = j.at("pitch_hz").get<double>();
    p.speech_rate_sps = j.at("speech_rate_sps").get<double>();
    p.volume_db = j.at("volume_db").get<double>();
    p.jitter_ratio = j.at("jitter_ratio").get<double>();
    p.shimmer_ratio = j.at("shimmer_ratio").get<double>();
    p.intensity_db = j.at("intensity_db").get<double>();
    p.articulation_rate_sps = j.at("articulation_rate_sps").get<double>();
    if (j.contains("syllable_count")) p.syllable_count = j["syllable_count"].get<size_t>();
    if (j.contains("voiced_frame_count"))
        p.voiced_frame_count = j["voiced_frame_count"].get<size_t>();
    return p;
}

F0Track estimate_f0_track(const FrameSequence& frames, double f0_min_hz, double f0_max_hz,
                          double voicing_threshold) {
    if (!(f0_min_hz > 0.0) || f0_min_hz >= f0_max_hz) {
        throw BadFrameSpecError("need 0 < f0_min < f0_max");
    }
    F0Track track;
    track.sample_rate = frames.sample_rate;
    track.frame_len = frames.frame_len_samples();
    track.hop = frames.hop_samples();
    track.f0_min_hz = f0_min_hz;
    track.f0_max_hz = f0_max_hz;
    track.entries.resize(frames.size());

    const double rate = double(frames.sample_rate);
    const size_t n = track.frame_len;
    if (n < 4) return track;

    size_t lag_min = size_t(std::max(1.0, std::floor(rate / f0_max_hz)));
    size_t lag_max = size_t(std::ceil(rate / f0_min_hz));
    lag_max = std::min(lag_max, n - 2);
    if (lag_min + 1 >= lag_max) return track;  // band unusable at this frame length

    const size_t lo = lag_min > 1 ? lag_min - 1 : 1;
    const size_t hi = std::min(lag_max + 1, n - 2);
    std::vector<double> x(n), r(hi + 2, 0.0);

    for (size_t fi = 0; fi < frames.size(); ++fi) {
        const std::vector<float>& f = frames.frames[fi];
        double mean = 0.0;
        for (float s : f) mean += s;
        mean /= double(n);
        double energy = 0.0;
        for (size_t k = 0; k < n; ++k) {
            x[k] = double(f[k]) - mean;
            energy += x[k] * x[k];
        }
        if (energy < 1e-18) continue;  // digital silence: unvoiced

        // Normalized cross-correlation per lag.
        for (size_t lag = lo; lag <= hi; ++lag) {
            double num = 0.0, e0 = 0.0, e1 = 0.0;
            const size_t m = n - lag;
            for (size_t k = 0; k < m; ++k) {
                num += x[k] * x[k + lag];
                e0 += x[k] * x[k];
                e1 += x[k + lag] * x[k + lag];
            }
            double den = std::sqrt(e0 * e1);
            r[lag] = den < 1e-18 ? 0.0 : num / den;
        }

        // Local maxima inside the band; prefer the smallest lag close to the
        // global best so strict period doublings do not halve the estimate.
        double rmax = -2.0;
        for (size_t lag = lag_min; lag <= lag_max; ++lag) rmax = std::max(rmax, r[lag]);
        size_t best = 0;
        for (size_t lag = lag_min; lag <= lag_max; ++lag) {
            bool is_peak = r[lag] >= r[lag - 1] && (lag + 1 > hi || r[lag] >= r[lag + 1]);
            if (is_peak && r[lag] >= 0.9 * rmax) {
                best = lag;
                break;
            }
        }
        if (best == 0) {
            for (size_t lag = lag_min; lag <= lag_max; ++lag) {
                if (r[lag] == rmax) {
                    best = lag;
                    break;
                }
            }
        }
        if (best == 0 || r[best] < voicing_threshold) continue;

        double delta = 0.0;
        if (best > lo && best < hi) {
            double denom = r[best - 1] - 2.0 * r[best] + r[best + 1];
            if (std::abs(denom) > 1e-18) {
                delta = 0.5 * (r[best - 1] - r[best + 1]) / denom;
                delta = std::clamp(delta, -0.5, 0.5);
            }
        }
        double f0 = rate / (double(best) + delta);
        track.entries[fi].voiced = true;
        track.entries[fi].f0_hz = std::clamp(f0, f0_min_hz, f0_max_hz);
    }
    return track;
}

namespace {

// Sub-sample positive-going zero-crossing times (seconds) inside [begin, end).
std::vector<double> positive_crossings(const AudioClip& clip, size_t begin, size_t end) {
    std::vector<double> out;
    const std::vector<float>& x = clip.samples;
    end = std::min(end, x.size());
    if (end < 2) return out;
    for (size_t nn = begin; nn + 1 < end; ++nn) {
        if (x[nn] < 0.0f && x[nn + 1] >= 0.0f) {
            double frac = double(x[nn]) / (double(x[nn]) - double(x[nn + 1]));
            out.push_back((double(nn) + frac) / double(clip.sample_rate));
        }
    }
    return out;
}

}  // namespace

PeriodSequence extract_periods(const AudioClip& clip, const F0Track& track) {
    PeriodSequence seq;
    if (track.entries.empty() || clip.empty()) return seq;

    const double rate = double(clip.sample_rate);
    const double t_min = 1.0 / track.f0_max_hz;
    const double t_max = 1.0 / track.f0_min_hz;

    auto local_period = [&](size_t run_first, size_t run_last, double t, double fallback) {
        double center_frames = (t * rate - double(track.frame_len) / 2.0) / double(track.hop);
        long k = std::lround(center_frames);
        k = std::clamp(k, long(run_first), long(run_last));
        const F0Track::Entry& e = track.entries[size_t(k)];
        return e.voiced ? 1.0 / e.f0_hz : fallback;
    };

    auto flush = [&](std::vector<double>& chain, const std::vector<double>& amp) {
        if (chain.size() >= 2) {
            PeriodSequence::Run run;
            run.boundaries = chain;
            for (size_t i = 1; i < chain.size(); ++i)
                run.periods.push_back(chain[i] - chain[i - 1]);
            run.amplitudes = amp;
            seq.runs.push_back(std::move(run));
        }
        chain.clear();
    };

    size_t fi = 0;
    while (fi < track.entries.size()) {
        if (!track.entries[fi].voiced) {
            ++fi;
            continue;
        }
        size_t first = fi;
        while (fi < track.entries.size() && track.entries[fi].voiced) ++fi;
        size_t last = fi - 1;

        size_t begin = first * track.hop;
        size_t end = last * track.hop + track.frame_len;
        std::vector<double> crossings = positive_crossings(clip, begin, end);
        if (crossings.size() < 2) continue;

        double mean_period = 0.0;
        size_t nv = 0;
        for (size_t k = first; k <= last; ++k) {
            mean_period += 1.0 / track.entries[k].f0_hz;
            ++nv;
        }
        mean_period /= double(nv);

        auto cycle_amplitude = [&](double b0, double b1) {
            size_t s0 = size_t(std::lround(b0 * rate));
            size_t s1 = std::min(size_t(std::lround(b1 * rate)), clip.samples.size());
            double peak = 0.0;
            for (size_t nn = s0; nn < s1; ++nn)
                peak = std::max(peak, std::abs(double(clip.samples[nn])));
            return peak;
        };

        std::vector<double> chain;
        std::vector<double> amps;
        size_t ci = 0;
        chain.push_back(crossings[0]);
        double cur = crossings[0];
        while (true) {
            double t_pred = local_period(first, last, cur, mean_period);
            double target = cur + t_pred;
            double window_end = cur + 1.75 * t_pred;
            // Nearest crossing to the predicted spacing, within the window.
            size_t best = 0;
            double best_err = std::numeric_limits<double>::max();
            size_t probe = ci + 1;
            while (probe < crossings.size() && crossings[probe] <= window_end) {
                double err = std::abs(crossings[probe] - target);
                if (err < best_err) {
                    best_err = err;
                    best = probe;
                }
                ++probe;
            }
            if (best == 0) {
                // No candidate; restart at the next crossing if any remain.
                flush(chain, amps);
                amps.clear();
                if (ci + 1 >= crossings.size()) break;
                ci = ci + 1;
                chain.push_back(crossings[ci]);
                cur = crossings[ci];
                continue;
            }
            double period = crossings[best] - cur;
            bool plausible = period >= t_min * (1.0 - 1e-9) && period <= t_max * (1.0 + 1e-9) &&
                             best_err <= 0.35 * t_pred;
            if (plausible) {
                amps.push_back(cycle_amplitude(cur, crossings[best]));
                chain.push_back(crossings[best]);
                cur = crossings[best];
                ci = best;
            } else {
                flush(chain, amps);
                amps.clear();
                ci = best;
                chain.push_back(crossings[ci]);
                cur = crossings[ci];
            }
        }
        flush(chain, amps);
        amps.clear();
    }
    return seq;
}

namespace {

double local_ratio(const PeriodSequence& seq, bool use_amplitudes) {
    double diff_sum = 0.0, value_sum = 0.0;
    size_t diff_n = 0, value_n = 0;
    for (const PeriodSequence::Run& run : seq.runs) {
        const std::vector<double>& v = use_amplitudes ? run.amplitudes : run.periods;
        for (size_t i = 0; i < v.size(); ++i) {
            value_sum += v[i];
            ++value_n;
            if (i > 0) {
                diff_sum += std::abs(v[i] - v[i - 1]);
                ++diff_n;
            }
        }
    }
    if (value_n < 2 || diff_n == 0) return 0.0;
    double mean_value = value_sum / double(value_n);
    if (mean_value <= 0.0) return 0.0;
    return (diff_sum / double(diff_n)) / mean_value;
}

}  // namespace

double compute_jitter(const PeriodSequence& periods) { return local_ratio(periods, false); }

double compute_shimmer(const PeriodSequence& periods) { return local_ratio(periods, true); }

VadMask detect_voice_activity(const FrameSequence& frames, const DspConfig& cfg) {
    VadMask mask;
    mask.hop_s = frames.hop_s();
    if (frames.size() == 0) return mask;

    std::vector<double> db = frame_db_contour(frames);
    double max_db = *std::max_element(db.begin(), db.end());
    mask.speech.resize(db.size());
    for (size_t i = 0; i < db.size(); ++i) {
        mask.speech[i] = db[i] > max_db - cfg.vad_margin_db && db[i] > cfg.vad_floor_db;
    }

    // Bridge interior non-speech gaps shorter than vad_gap_ms.
    size_t i = 0;
    while (i < mask.speech.size()) {
        if (mask.speech[i]) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < mask.speech.size() && !mask.speech[j]) ++j;
        bool interior = i > 0 && j < mask.speech.size();
        double gap_ms = double(j - i) * frames.hop_ms;
        if (interior && gap_ms < cfg.vad_gap_ms) {
            for (size_t k = i; k < j; ++k) mask.speech[k] = true;
        }
        i = j;
    }
    return mask;
}

double compute_intensity(const FrameSequence& frames, const VadMask& vad) {
    double acc = 0.0;
    size_t n = 0;
    for (size_t i = 0; i < frames.size() && i < vad.speech.size(); ++i) {
        if (!vad.speech[i]) continue;
        acc += to_db_floored(frame_rms(frames.frames[i]));
        ++n;
    }
    return n == 0 ? kSilenceFloorDb : acc / double(n);
}

double compute_volume(const AudioClip& clip) {
    if (clip.samples.empty()) return kSilenceFloorDb;
    double acc = 0.0;
    for (float s : clip.samples) acc += double(s) * double(s);
    return to_db_floored(std::sqrt(acc / double(clip.samples.size())));
}

size_t detect_syllable_nuclei(const FrameSequence& frames, const VadMask& vad,
                              const DspConfig& cfg) {
    const size_t n = frames.size();
    if (n == 0 || vad.speech_frame_count() == 0) return 0;

    std::vector<double> db = frame_db_contour(frames);
    size_t w = size_t(std::max(1.0, std::round(cfg.syllable_smooth_ms / frames.hop_ms)));
    if (w % 2 == 0) ++w;
    const size_t half = w / 2;
    std::vector<double> smooth(n);
    for (size_t i = 0; i < n; ++i) {
        size_t a = i >= half ? i - half : 0;
        size_t b = std::min(n - 1, i + half);
        double acc = 0.0;
        for (size_t k = a; k <= b; ++k) acc += db[k];
        smooth[i] = acc / double(b - a + 1);
    }

    std::vector<double> speech_levels;
    for (size_t i = 0; i < n; ++i) {
        if (vad.speech[i]) speech_levels.push_back(smooth[i]);
    }
    std::sort(speech_levels.begin(), speech_levels.end());
    double median = speech_levels[speech_levels.size() / 2];
    double level_floor = median - cfg.syllable_median_margin_db;

    size_t count = 0;
    long prev_peak = -1;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && smooth[j + 1] == smooth[i]) ++j;
        bool left_ok = i == 0 || smooth[i - 1] < smooth[i];
        bool right_ok = j == n - 1 || smooth[j + 1] < smooth[i];
        if (left_ok && right_ok) {
            size_t p = (i + j) / 2;
            if (vad.speech[p] && smooth[p] > level_floor) {
                if (prev_peak < 0) {
                    ++count;
                    prev_peak = long(p);
                } else {
                    double valley = smooth[size_t(prev_peak)];
                    for (size_t k = size_t(prev_peak) + 1; k < p; ++k)
                        valley = std::min(valley, smooth[k]);
                    double lower_peak = std::min(smooth[size_t(prev_peak)], smooth[p]);
                    if (lower_peak - valley >= cfg.syllable_dip_db) {
                        ++count;
                        prev_peak = long(p);
                    }
                }
            }
        }
        i = j + 1;
    }
    return count;
}

AcousticProfile extract_acoustic_profile(const AudioClip& input, const DspConfig& cfg) {
    if (input.empty()) throw EmptyAudioError("cannot extract features from empty audio");
    const AudioClip clip =
        input.sample_rate == cfg.sample_rate ? input : resample(input, cfg.sample_rate);

    FrameSequence frames = frame_signal(clip, cfg.frame_ms, cfg.hop_ms);
    F0Track track =
        estimate_f0_track(frames, cfg.f0_min_hz, cfg.f0_max_hz, cfg.voicing_threshold);
    PeriodSequence periods = extract_periods(clip, track);
    VadMask vad = detect_voice_activity(frames, cfg);
    size_t nuclei = detect_syllable_nuclei(frames, vad, cfg);

    AcousticProfile profile;
    profile.voiced_frame_count = track.voiced_count();
    profile.pitch_hz = track.mean_voiced_f0();
    profile.jitter_ratio = compute_jitter(periods);
    profile.shimmer_ratio = compute_shimmer(periods);
    profile.volume_db = compute_volume(clip);
    profile.intensity_db = compute_intensity(frames, vad);
    profile.syllable_count = nuclei;
    double duration = clip.duration_s();
    double speech_time = vad.speech_time_s();
    profile.speech_rate_sps = duration > 0.0 ? double(nuclei) / duration : 0.0;
    profile.articulation_rate_sps = speech_time > 0.0 ? double(nuclei) / speech_time : 0.0;
    return profile;
}

}  // namespace emograph
