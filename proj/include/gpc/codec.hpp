// SPDX-License-Identifier: Apache-2.0
#pragma once

// Modality codecs: every payload (text, image, audio, video) is reduced to a
// bounded integer sequence in [0, p_max] plus the parameters needed to
// invert it. The channel itself never sees anything but these integers.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gpc/errors.hpp"
#include "gpc/image.hpp"

namespace gpc {

enum class Modality { text, image, audio, video };

inline std::string to_string(Modality m) {
    switch (m) {
        case Modality::text: return "text";
        case Modality::image: return "image";
        case Modality::audio: return "audio";
        case Modality::video: return "video";
    }
    return "?";
}

inline Modality modality_from_string(const std::string& s) {
    if (s == "text") return Modality::text;
    if (s == "image") return Modality::image;
    if (s == "audio") return Modality::audio;
    if (s == "video") return Modality::video;
    throw InvalidArgument("unknown modality: " + s);
}

struct ImageDims {
    int height = 0;
    int width = 0;
};

struct AudioParams {
    int frame_len = 1024;
    int hop_len = 512;
    int sample_rate = 16000;
    double s_min = 0.0;
    double s_max = 0.0;
    bool degenerate = false;  // s_min == s_max (silent or constant input)
};

struct VideoParams {
    int frame_count = 0;
    int height = 0;
    int width = 0;
};

/// Ordered payload values v_j in [0, p_max] plus whatever the modality
/// needs for inversion. Channel order for image/video is fixed R,G,B.
struct PayloadSequence {
    Modality modality = Modality::text;
    int p_max = 26;
    std::vector<int> values;
    ImageDims image;
    AudioParams audio;
    VideoParams video;
};

// ---------------------------------------------------------------- text

/// Secret character S in A-Z -> ord(S) - 64, so values live in [1, 26].
inline PayloadSequence text_encode(const std::string& secret) {
    if (secret.empty()) throw InvalidArgument("secret must not be empty");
    PayloadSequence seq;
    seq.modality = Modality::text;
    seq.p_max = 26;
    seq.values.reserve(secret.size());
    for (std::size_t i = 0; i < secret.size(); ++i) {
        char c = secret[i];
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        if (c < 'A' || c > 'Z') throw UnsupportedSecretChar(secret[i], i);
        seq.values.push_back(c - 64);
    }
    return seq;
}

inline std::string text_decode(const PayloadSequence& seq) {
    if (seq.modality != Modality::text) throw InvalidArgument("sequence is not a text payload");
    std::string out;
    out.reserve(seq.values.size());
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
        int v = seq.values[i];
        if (v < 1 || v > 26) throw ValueOutOfRange(i, v);
        out.push_back(static_cast<char>(v + 64));
    }
    return out;
}

// ------------------------------------------------------- intensity scale

namespace detail {
// round(a/b) for a >= 0, b > 0, half away from zero
inline long long div_round_half_up(long long a, long long b) { return (2 * a + b) / (2 * b); }
}  // namespace detail

/// x in [0,255] -> round(x * p_max / 255), monotone, endpoints fixed.
inline int quantize_intensity(int x, int p_max) {
    if (x < 0 || x > 255) throw InvalidArgument("intensity out of [0,255]");
    if (p_max < 1) throw InvalidArgument("p_max must be >= 1");
    return static_cast<int>(detail::div_round_half_up(static_cast<long long>(x) * p_max, 255));
}

/// v in [0,p_max] -> round(v * 255 / p_max). Round-trip error is bounded by
/// ceil(255 / (2 * p_max)), i.e. 5 gray levels at p_max = 26.
inline int dequantize_intensity(int v, int p_max) {
    if (p_max < 1) throw InvalidArgument("p_max must be >= 1");
    if (v < 0 || v > p_max) throw ValueOutOfRange(0, v);
    return static_cast<int>(detail::div_round_half_up(static_cast<long long>(v) * 255, p_max));
}

// ---------------------------------------------------------------- image

/// Flattens the R plane row-major, then G, then B, quantizing each value.
inline PayloadSequence image_encode(const RgbImage& img, int p_max = 26) {
    if (img.width < 1 || img.height < 1) throw InvalidArgument("empty image");
    PayloadSequence seq;
    seq.modality = Modality::image;
    seq.p_max = p_max;
    seq.image = {img.height, img.width};
    seq.values.reserve(img.pixel_count() * 3);
    for (int ch = 0; ch < 3; ++ch)
        for (int r = 0; r < img.height; ++r)
            for (int c = 0; c < img.width; ++c)
                seq.values.push_back(quantize_intensity(img.at(r, c, ch), p_max));
    return seq;
}

namespace detail {
inline void decode_planes_into(const std::vector<int>& values, std::size_t offset, int p_max,
                               RgbImage& img) {
    std::size_t i = offset;
    for (int ch = 0; ch < 3; ++ch)
        for (int r = 0; r < img.height; ++r)
            for (int c = 0; c < img.width; ++c)
                img.at(r, c, ch) =
                    static_cast<std::uint8_t>(dequantize_intensity(values[i++], p_max));
}
}  // namespace detail

inline RgbImage image_decode(const PayloadSequence& seq) {
    if (seq.modality != Modality::image) throw InvalidArgument("sequence is not an image payload");
    std::size_t expected = static_cast<std::size_t>(seq.image.height) * seq.image.width * 3;
    if (seq.values.size() != expected)
        throw ShapeMismatch("image payload length " + std::to_string(seq.values.size()) +
                            " does not match 3*" + std::to_string(seq.image.height) + "*" +
                            std::to_string(seq.image.width));
    RgbImage img(seq.image.width, seq.image.height);
    detail::decode_planes_into(seq.values, 0, seq.p_max, img);
    return img;
}

// ---------------------------------------------------------------- audio

/// Frame offsets 0, hop, 2*hop, ... while a full frame fits.
inline std::size_t audio_frame_count(std::size_t samples, int frame_len, int hop_len) {
    if (samples < static_cast<std::size_t>(frame_len)) return 0;
    return (samples - frame_len) / hop_len + 1;
}

inline double frame_rms(const std::vector<double>& samples, std::size_t offset, int frame_len) {
    double acc = 0.0;
    for (int i = 0; i < frame_len; ++i) acc += samples[offset + i] * samples[offset + i];
    return std::sqrt(acc / frame_len);
}

/// Short-time RMS descriptor per frame, min-max normalized and floor
/// quantized to [0, p_max]. A flat RMS track (silence, constant tone) is
/// degenerate: all values 0, flag recorded for the decoder.
inline PayloadSequence audio_encode(const std::vector<double>& samples, int frame_len = 1024,
                                    int hop_len = 512, int sample_rate = 16000, int p_max = 26) {
    if (frame_len < 1 || hop_len < 1) throw InvalidArgument("frame/hop must be >= 1");
    if (samples.size() < static_cast<std::size_t>(frame_len))
        throw TooShort("audio shorter than one frame (" + std::to_string(samples.size()) + " < " +
                       std::to_string(frame_len) + " samples)");

    std::size_t j_count = audio_frame_count(samples.size(), frame_len, hop_len);
    std::vector<double> rms(j_count);
    for (std::size_t j = 0; j < j_count; ++j) rms[j] = frame_rms(samples, j * hop_len, frame_len);

    PayloadSequence seq;
    seq.modality = Modality::audio;
    seq.p_max = p_max;
    seq.audio.frame_len = frame_len;
    seq.audio.hop_len = hop_len;
    seq.audio.sample_rate = sample_rate;

    double s_min = rms[0], s_max = rms[0];
    for (double s : rms) {
        s_min = std::min(s_min, s);
        s_max = std::max(s_max, s);
    }
    seq.audio.s_min = s_min;
    seq.audio.s_max = s_max;
    seq.audio.degenerate = (s_max == s_min);

    seq.values.reserve(j_count);
    for (double s : rms) {
        int v = 0;
        if (!seq.audio.degenerate) {
            v = static_cast<int>(std::floor((s - s_min) / (s_max - s_min) * p_max));
            v = std::clamp(v, 0, p_max);
        }
        seq.values.push_back(v);
    }
    return seq;
}

namespace detail {

// Triangular window with exact constant overlap-add at hop = frame/2; the
// explicit weight accumulator also normalizes the partially covered edges.
inline double triangle_weight(int i, int frame_len) {
    double half = frame_len / 2.0;
    double center = (frame_len - 1) / 2.0;
    return 1.0 - std::abs(i - center) / half;
}

inline std::vector<double> overlap_add(const std::vector<std::vector<double>>& frames,
                                       int frame_len, int hop_len) {
    if (frames.empty()) return {};
    std::size_t total = (frames.size() - 1) * hop_len + frame_len;
    std::vector<double> num(total, 0.0), den(total, 0.0);
    for (std::size_t j = 0; j < frames.size(); ++j) {
        std::size_t base = j * hop_len;
        for (int i = 0; i < frame_len; ++i) {
            double w = triangle_weight(i, frame_len);
            num[base + i] += w * frames[j][i];
            den[base + i] += w;
        }
    }
    for (std::size_t i = 0; i < total; ++i) num[i] = den[i] > 0.0 ? num[i] / den[i] : 0.0;
    return num;
}

}  // namespace detail

/// Recovered RMS targets from a payload: S_hat_j = s_min + v/p_max * range.
inline std::vector<double> audio_rms_targets(const PayloadSequence& seq) {
    if (seq.modality != Modality::audio) throw InvalidArgument("sequence is not an audio payload");
    std::vector<double> shat(seq.values.size());
    double range = seq.audio.s_max - seq.audio.s_min;
    for (std::size_t j = 0; j < seq.values.size(); ++j)
        shat[j] = seq.audio.degenerate
                      ? seq.audio.s_min
                      : seq.audio.s_min + (double(seq.values[j]) / seq.p_max) * range;
    return shat;
}

/// Reconstruction by frame-wise amplitude scaling and overlap-add.
/// With reference samples (the original signal), each reference frame is
/// rescaled to the recovered RMS; without them, a fixed-frequency unit-RMS
/// sine carrier stands in for the frames.
inline std::vector<double> audio_decode(const PayloadSequence& seq,
                                        const std::vector<double>* reference_samples = nullptr) {
    auto shat = audio_rms_targets(seq);
    int frame_len = seq.audio.frame_len;
    int hop_len = seq.audio.hop_len;
    std::size_t j_count = seq.values.size();
    if (j_count == 0) return {};

    std::vector<std::vector<double>> frames(j_count, std::vector<double>(frame_len));
    if (reference_samples) {
        std::size_t have = audio_frame_count(reference_samples->size(), frame_len, hop_len);
        if (have != j_count)
            throw FrameCountMismatch("reference yields " + std::to_string(have) +
                                     " frames, payload has " + std::to_string(j_count));
        for (std::size_t j = 0; j < j_count; ++j) {
            std::size_t base = j * hop_len;
            double s = frame_rms(*reference_samples, base, frame_len);
            double scale = s > 0.0 ? shat[j] / s : 1.0;
            for (int i = 0; i < frame_len; ++i)
                frames[j][i] = (*reference_samples)[base + i] * scale;
        }
    } else {
        constexpr double kCarrierHz = 440.0;
        double omega = 2.0 * M_PI * kCarrierHz / seq.audio.sample_rate;
        for (std::size_t j = 0; j < j_count; ++j) {
            std::size_t base = j * hop_len;
            double acc = 0.0;
            for (int i = 0; i < frame_len; ++i) {
                double s = std::sin(omega * double(base + i));
                frames[j][i] = s;
                acc += s * s;
            }
            double rms = std::sqrt(acc / frame_len);
            double scale = rms > 0.0 ? shat[j] / rms : 0.0;
            for (int i = 0; i < frame_len; ++i) frames[j][i] *= scale;
        }
    }
    return detail::overlap_add(frames, frame_len, hop_len);
}

// ---------------------------------------------------------------- video

/// Per frame, the image ordering applies; frames concatenate in temporal
/// order with no coupling between them.
inline PayloadSequence video_encode(const std::vector<RgbImage>& frames, int p_max = 26) {
    if (frames.empty()) throw EmptyVideo("video has no frames");
    int h = frames[0].height, w = frames[0].width;
    if (h < 1 || w < 1) throw InvalidArgument("empty video frame");
    PayloadSequence seq;
    seq.modality = Modality::video;
    seq.p_max = p_max;
    seq.video = {static_cast<int>(frames.size()), h, w};
    seq.values.reserve(frames.size() * static_cast<std::size_t>(h) * w * 3);
    for (const RgbImage& f : frames) {
        if (f.height != h || f.width != w)
            throw ShapeMismatch("video frames have mixed dimensions");
        PayloadSequence one = image_encode(f, p_max);
        seq.values.insert(seq.values.end(), one.values.begin(), one.values.end());
    }
    return seq;
}

inline std::vector<RgbImage> video_decode(const PayloadSequence& seq) {
    if (seq.modality != Modality::video) throw InvalidArgument("sequence is not a video payload");
    std::size_t per_frame = static_cast<std::size_t>(seq.video.height) * seq.video.width * 3;
    std::size_t expected = per_frame * seq.video.frame_count;
    if (seq.values.size() != expected)
        throw ShapeMismatch("video payload length " + std::to_string(seq.values.size()) +
                            " does not match " + std::to_string(expected));
    std::vector<RgbImage> frames;
    frames.reserve(seq.video.frame_count);
    for (int t = 0; t < seq.video.frame_count; ++t) {
        RgbImage img(seq.video.width, seq.video.height);
        detail::decode_planes_into(seq.values, per_frame * t, seq.p_max, img);
        frames.push_back(std::move(img));
    }
    return frames;
}

}  // namespace gpc
