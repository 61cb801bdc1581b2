// SPDX-License-Identifier: Apache-2.0
#pragma once

// External media in fixed minimal formats: 8-bit PNG images, PCM16 mono WAV
// audio, and directories of numbered PNG frames for video. Container
// demuxing is out of scope; pre-extracted inputs are expected.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gpc/errors.hpp"
#include "gpc/image.hpp"
#include "gpc/png.hpp"

namespace gpc {

struct AudioClip {
    std::vector<double> samples;  // in [-1, 1]
    int sample_rate = 16000;
};

struct FrameStream {
    std::vector<RgbImage> frames;
    int fps = 30;
};

// ---------------------------------------------------------------- images

/// 8-bit PNG, RGB or grayscale; grayscale is replicated to three channels.
inline RgbImage load_image(const std::filesystem::path& path) {
    png::Decoded dec = png::read_file(path);
    RgbImage img(dec.width, dec.height);
    if (dec.channels == 3) {
        img.pixels = std::move(dec.pixels);
    } else {
        for (std::size_t i = 0; i < dec.pixels.size(); ++i) {
            img.pixels[3 * i] = dec.pixels[i];
            img.pixels[3 * i + 1] = dec.pixels[i];
            img.pixels[3 * i + 2] = dec.pixels[i];
        }
    }
    return img;
}

inline void save_image(const RgbImage& img, const std::filesystem::path& path) {
    png::write_rgb(path, img);
}

namespace detail {

// Separable resampling: area average when an axis shrinks, linear when it
// grows. Operates on one channel-plane of doubles.
inline std::vector<double> resample_axis(const std::vector<double>& src, int lines, int in_len,
                                         int out_len) {
    std::vector<double> dst(static_cast<std::size_t>(lines) * out_len);
    if (out_len == in_len) {
        dst = src;
        return dst;
    }
    if (out_len < in_len) {
        double scale = double(in_len) / out_len;
        for (int l = 0; l < lines; ++l) {
            const double* row = src.data() + std::size_t(l) * in_len;
            for (int o = 0; o < out_len; ++o) {
                double a = o * scale, b = (o + 1) * scale;
                int ia = static_cast<int>(std::floor(a));
                int ib = std::min(in_len, static_cast<int>(std::ceil(b)));
                double acc = 0.0;
                for (int i = ia; i < ib; ++i) {
                    double lo = std::max(a, double(i));
                    double hi = std::min(b, double(i + 1));
                    acc += row[i] * (hi - lo);
                }
                dst[std::size_t(l) * out_len + o] = acc / (b - a);
            }
        }
    } else {
        for (int l = 0; l < lines; ++l) {
            const double* row = src.data() + std::size_t(l) * in_len;
            for (int o = 0; o < out_len; ++o) {
                double x = (o + 0.5) * in_len / out_len - 0.5;
                int i0 = static_cast<int>(std::floor(x));
                double t = x - i0;
                int ia = std::clamp(i0, 0, in_len - 1);
                int ib = std::clamp(i0 + 1, 0, in_len - 1);
                dst[std::size_t(l) * out_len + o] = row[ia] * (1.0 - t) + row[ib] * t;
            }
        }
    }
    return dst;
}

inline std::vector<double> transpose(const std::vector<double>& src, int rows, int cols) {
    std::vector<double> dst(src.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            dst[std::size_t(c) * rows + r] = src[std::size_t(r) * cols + c];
    return dst;
}

}  // namespace detail

inline RgbImage resize_image(const RgbImage& img, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) throw InvalidArgument("resize target must be >= 1x1");
    if (out_h == img.height && out_w == img.width) return img;

    RgbImage out(out_w, out_h);
    std::vector<double> plane(static_cast<std::size_t>(img.height) * img.width);
    for (int ch = 0; ch < 3; ++ch) {
        for (int r = 0; r < img.height; ++r)
            for (int c = 0; c < img.width; ++c)
                plane[std::size_t(r) * img.width + c] = img.at(r, c, ch);
        auto horiz = detail::resample_axis(plane, img.height, img.width, out_w);
        auto t = detail::transpose(horiz, img.height, out_w);
        auto vert = detail::resample_axis(t, out_w, img.height, out_h);
        auto both = detail::transpose(vert, out_w, out_h);
        for (int r = 0; r < out_h; ++r)
            for (int c = 0; c < out_w; ++c) {
                double v = both[std::size_t(r) * out_w + c];
                long rounded = std::lround(v);  // half away from zero
                out.at(r, c, ch) = static_cast<std::uint8_t>(std::clamp(rounded, 0L, 255L));
            }
    }
    return out;
}

// ---------------------------------------------------------------- audio

namespace detail {

inline std::uint32_t rd_u32le(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}
inline std::uint16_t rd_u16le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline void wr_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}
inline void wr_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

}  // namespace detail

/// PCM 16-bit WAV; mono, or stereo averaged to mono (noted in *warnings).
/// Samples are normalized by 1/32768.
inline AudioClip load_wav(const std::filesystem::path& path,
                          std::vector<std::string>* warnings = nullptr) {
    auto data = png::read_binary_file(path);
    if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
        std::memcmp(data.data() + 8, "WAVE", 4) != 0)
        throw UnsupportedFormat("not a RIFF/WAVE file");

    int channels = 0, bits = 0, rate = 0, format = 0;
    const std::uint8_t* pcm = nullptr;
    std::size_t pcm_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= data.size()) {
        std::uint32_t chunk_len = detail::rd_u32le(data.data() + pos + 4);
        if (pos + 8 + chunk_len > data.size())
            throw UnsupportedFormat("corrupt WAV: truncated chunk");
        if (std::memcmp(data.data() + pos, "fmt ", 4) == 0) {
            if (chunk_len < 16) throw UnsupportedFormat("corrupt WAV: short fmt chunk");
            format = detail::rd_u16le(data.data() + pos + 8);
            channels = detail::rd_u16le(data.data() + pos + 10);
            rate = static_cast<int>(detail::rd_u32le(data.data() + pos + 12));
            bits = detail::rd_u16le(data.data() + pos + 22);
        } else if (std::memcmp(data.data() + pos, "data", 4) == 0) {
            pcm = data.data() + pos + 8;
            pcm_len = chunk_len;
        }
        pos += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }
    if (!pcm || channels == 0) throw UnsupportedFormat("WAV missing fmt or data chunk");
    if (format != 1 || bits != 16)
        throw UnsupportedFormat("only PCM 16-bit WAV supported (got format " +
                                std::to_string(format) + ", " + std::to_string(bits) + " bits)");
    if (channels > 2) throw UnsupportedFormat("only mono or stereo WAV supported");

    std::size_t frames = pcm_len / (2 * channels);
    if (frames == 0) throw UnsupportedFormat("WAV has no samples");
    if (channels == 2 && warnings)
        warnings->push_back("stereo input averaged to mono");

    AudioClip clip;
    clip.sample_rate = rate;
    clip.samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        if (channels == 1) {
            auto s = static_cast<std::int16_t>(detail::rd_u16le(pcm + 2 * i));
            clip.samples[i] = s / 32768.0;
        } else {
            auto l = static_cast<std::int16_t>(detail::rd_u16le(pcm + 4 * i));
            auto r = static_cast<std::int16_t>(detail::rd_u16le(pcm + 4 * i + 2));
            clip.samples[i] = (l / 32768.0 + r / 32768.0) / 2.0;
        }
        clip.samples[i] = std::clamp(clip.samples[i], -1.0, 1.0);
    }
    return clip;
}

/// Symmetric quantization with clipping: round(x * 32768), clamped to int16.
inline void save_wav(const AudioClip& clip, const std::filesystem::path& path) {
    std::vector<std::uint8_t> out;
    std::size_t n = clip.samples.size();
    out.reserve(44 + 2 * n);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    detail::wr_u32le(out, static_cast<std::uint32_t>(36 + 2 * n));
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    detail::wr_u32le(out, 16);
    detail::wr_u16le(out, 1);  // PCM
    detail::wr_u16le(out, 1);  // mono
    detail::wr_u32le(out, static_cast<std::uint32_t>(clip.sample_rate));
    detail::wr_u32le(out, static_cast<std::uint32_t>(clip.sample_rate * 2));
    detail::wr_u16le(out, 2);   // block align
    detail::wr_u16le(out, 16);  // bits per sample
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    detail::wr_u32le(out, static_cast<std::uint32_t>(2 * n));
    for (double s : clip.samples) {
        long v = std::lround(s * 32768.0);
        v = std::clamp(v, -32768L, 32767L);
        detail::wr_u16le(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    }
    png::write_binary_file(path, out);
}

// ---------------------------------------------------------------- frames

inline std::string frame_filename(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06zu.png", index);
    return buf;
}

/// Exact frame_%06d.png form; returns the index or npos.
inline std::size_t parse_frame_index(const std::string& name) {
    constexpr std::size_t kLen = 16;  // frame_ + 6 digits + .png
    if (name.size() != kLen || name.rfind("frame_", 0) != 0 || name.substr(12) != ".png")
        return std::string::npos;
    std::size_t idx = 0;
    for (int i = 6; i < 12; ++i) {
        if (name[i] < '0' || name[i] > '9') return std::string::npos;
        idx = idx * 10 + (name[i] - '0');
    }
    return idx;
}

/// Directory of frame_%06d.png files, contiguous from 0.
inline FrameStream load_frames(const std::filesystem::path& dir, int fps = 30) {
    if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
    std::size_t count = 0;
    while (std::filesystem::exists(dir / frame_filename(count))) ++count;
    if (count == 0) throw MissingFrame(0);
    // a frame file with a higher index implies a gap
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::size_t idx = parse_frame_index(entry.path().filename().string());
        if (idx != std::string::npos && idx >= count) throw MissingFrame(count);
    }

    FrameStream stream;
    stream.fps = fps;
    stream.frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        RgbImage img = load_image(dir / frame_filename(i));
        if (!stream.frames.empty() && (img.width != stream.frames[0].width ||
                                       img.height != stream.frames[0].height))
            throw MixedDimensions("frame " + std::to_string(i) + " has different dimensions");
        stream.frames.push_back(std::move(img));
    }
    return stream;
}

inline void save_frames(const FrameStream& stream, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create frame directory " + dir.string());
    for (std::size_t i = 0; i < stream.frames.size(); ++i)
        save_image(stream.frames[i], dir / frame_filename(i));
}

}  // namespace gpc
