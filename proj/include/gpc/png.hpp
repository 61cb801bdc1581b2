// SPDX-License-Identifier: Apache-2.0
#pragma once

// Minimal PNG reader/writer over zlib, scoped to what the raster channel
// needs: 8-bit grayscale and 8-bit RGB, non-interlaced. Anything else is
// rejected as UnsupportedFormat. The writer always emits filter-0 scanlines
// with a fixed compression level, so identical pixels give identical files.

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gpc/errors.hpp"
#include "gpc/image.hpp"

namespace gpc::png {

namespace detail {

inline void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t get_u32_be(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

inline void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                         const std::uint8_t* data, std::size_t len) {
    put_u32_be(out, static_cast<std::uint32_t>(len));
    std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data, data + len);
    std::uint32_t crc = static_cast<std::uint32_t>(
        ::crc32(0, out.data() + crc_start, static_cast<uInt>(4 + len)));
    put_u32_be(out, crc);
}

inline std::vector<std::uint8_t> zlib_compress(const std::vector<std::uint8_t>& raw) {
    uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> out(bound);
    // Fixed level: byte-identical output for identical input.
    int rc = ::compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6);
    if (rc != Z_OK) throw Error("zlib compression failed");
    out.resize(bound);
    return out;
}

inline std::vector<std::uint8_t> zlib_decompress(const std::uint8_t* data, std::size_t len,
                                                 std::size_t max_out) {
    z_stream zs{};
    if (::inflateInit(&zs) != Z_OK) throw Error("zlib init failed");
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> buf(1 << 16);
    zs.next_in = const_cast<Bytef*>(data);
    zs.avail_in = static_cast<uInt>(len);
    int rc = Z_OK;
    do {
        zs.next_out = buf.data();
        zs.avail_out = static_cast<uInt>(buf.size());
        rc = ::inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            ::inflateEnd(&zs);
            throw UnsupportedFormat("corrupt PNG: inflate failed");
        }
        out.insert(out.end(), buf.data(), buf.data() + (buf.size() - zs.avail_out));
        if (out.size() > max_out) {
            ::inflateEnd(&zs);
            throw UnsupportedFormat("corrupt PNG: decompressed data exceeds declared size");
        }
    } while (rc != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
    ::inflateEnd(&zs);
    if (rc != Z_STREAM_END) throw UnsupportedFormat("corrupt PNG: truncated compressed stream");
    return out;
}

inline std::uint8_t paeth(std::uint8_t a, std::uint8_t b, std::uint8_t c) {
    int p = int(a) + int(b) - int(c);
    int pa = std::abs(p - int(a));
    int pb = std::abs(p - int(b));
    int pc = std::abs(p - int(c));
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

inline const std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

}  // namespace detail

/// Decoded pixel buffer; channels is 1 (gray) or 3 (RGB), row-major interleaved.
struct Decoded {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels;
};

inline std::vector<std::uint8_t> encode(const std::uint8_t* pixels, int width, int height,
                                        int channels) {
    if (width <= 0 || height <= 0 || (channels != 1 && channels != 3))
        throw InvalidArgument("png::encode: bad dimensions/channels");
    std::vector<std::uint8_t> out(detail::kSignature, detail::kSignature + 8);

    std::uint8_t ihdr[13];
    ihdr[0] = static_cast<std::uint8_t>(std::uint32_t(width) >> 24);
    ihdr[1] = static_cast<std::uint8_t>(std::uint32_t(width) >> 16);
    ihdr[2] = static_cast<std::uint8_t>(std::uint32_t(width) >> 8);
    ihdr[3] = static_cast<std::uint8_t>(width);
    ihdr[4] = static_cast<std::uint8_t>(std::uint32_t(height) >> 24);
    ihdr[5] = static_cast<std::uint8_t>(std::uint32_t(height) >> 16);
    ihdr[6] = static_cast<std::uint8_t>(std::uint32_t(height) >> 8);
    ihdr[7] = static_cast<std::uint8_t>(height);
    ihdr[8] = 8;                                        // bit depth
    ihdr[9] = (channels == 1) ? 0 : 2;                  // color type
    ihdr[10] = 0;                                       // compression
    ihdr[11] = 0;                                       // filter method
    ihdr[12] = 0;                                       // no interlace
    detail::append_chunk(out, "IHDR", ihdr, 13);

    std::size_t stride = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * height);
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);  // filter type None
        raw.insert(raw.end(), pixels + y * stride, pixels + (y + 1) * stride);
    }
    auto idat = detail::zlib_compress(raw);
    detail::append_chunk(out, "IDAT", idat.data(), idat.size());
    detail::append_chunk(out, "IEND", nullptr, 0);
    return out;
}

inline std::vector<std::uint8_t> encode(const GrayImage& img) {
    return encode(img.pixels.data(), img.width, img.height, 1);
}
inline std::vector<std::uint8_t> encode(const RgbImage& img) {
    return encode(img.pixels.data(), img.width, img.height, 3);
}

inline Decoded decode(const std::uint8_t* data, std::size_t len) {
    if (len < 8 || std::memcmp(data, detail::kSignature, 8) != 0)
        throw UnsupportedFormat("not a PNG file");

    Decoded img;
    int bit_depth = 0, color_type = 0;
    std::vector<std::uint8_t> idat;
    bool saw_ihdr = false, saw_iend = false;

    std::size_t pos = 8;
    while (pos + 12 <= len && !saw_iend) {
        std::uint32_t chunk_len = detail::get_u32_be(data + pos);
        if (pos + 12 + chunk_len > len) throw UnsupportedFormat("corrupt PNG: truncated chunk");
        const char* type = reinterpret_cast<const char*>(data + pos + 4);
        const std::uint8_t* payload = data + pos + 8;
        std::uint32_t expect_crc = detail::get_u32_be(payload + chunk_len);
        std::uint32_t got_crc = static_cast<std::uint32_t>(
            ::crc32(0, data + pos + 4, static_cast<uInt>(4 + chunk_len)));
        if (expect_crc != got_crc) throw UnsupportedFormat("corrupt PNG: chunk CRC mismatch");

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (chunk_len != 13) throw UnsupportedFormat("corrupt PNG: bad IHDR");
            img.width = static_cast<int>(detail::get_u32_be(payload));
            img.height = static_cast<int>(detail::get_u32_be(payload + 4));
            bit_depth = payload[8];
            color_type = payload[9];
            if (payload[12] != 0) throw UnsupportedFormat("interlaced PNG not supported");
            if (bit_depth != 8) throw UnsupportedFormat("only 8-bit PNG supported");
            if (color_type != 0 && color_type != 2)
                throw UnsupportedFormat("only grayscale/RGB PNG supported");
            saw_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + chunk_len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
        }
        // ancillary chunks are skipped
        pos += 12 + chunk_len;
    }
    if (!saw_ihdr || !saw_iend || idat.empty())
        throw UnsupportedFormat("corrupt PNG: missing required chunks");
    if (img.width <= 0 || img.height <= 0) throw UnsupportedFormat("corrupt PNG: bad dimensions");

    img.channels = (color_type == 0) ? 1 : 3;
    std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
    std::size_t expected = (stride + 1) * static_cast<std::size_t>(img.height);
    constexpr std::size_t kMaxDecodedBytes = std::size_t(1) << 30;
    if (expected > kMaxDecodedBytes)
        throw UnsupportedFormat("PNG dimensions exceed the supported size");
    auto raw = detail::zlib_decompress(idat.data(), idat.size(), expected);
    if (raw.size() != expected)
        throw UnsupportedFormat("corrupt PNG: wrong decompressed size");

    img.pixels.resize(stride * img.height);
    int bpp = img.channels;
    std::vector<std::uint8_t> prev(stride, 0);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t filter = raw[y * (stride + 1)];
        const std::uint8_t* src = raw.data() + y * (stride + 1) + 1;
        std::uint8_t* dst = img.pixels.data() + y * stride;
        switch (filter) {
            case 0:
                std::memcpy(dst, src, stride);
                break;
            case 1:
                for (std::size_t x = 0; x < stride; ++x)
                    dst[x] = static_cast<std::uint8_t>(src[x] + (x >= std::size_t(bpp) ? dst[x - bpp] : 0));
                break;
            case 2:
                for (std::size_t x = 0; x < stride; ++x)
                    dst[x] = static_cast<std::uint8_t>(src[x] + prev[x]);
                break;
            case 3:
                for (std::size_t x = 0; x < stride; ++x) {
                    int left = x >= std::size_t(bpp) ? dst[x - bpp] : 0;
                    dst[x] = static_cast<std::uint8_t>(src[x] + ((left + prev[x]) >> 1));
                }
                break;
            case 4:
                for (std::size_t x = 0; x < stride; ++x) {
                    std::uint8_t a = x >= std::size_t(bpp) ? dst[x - bpp] : 0;
                    std::uint8_t c = x >= std::size_t(bpp) ? prev[x - bpp] : 0;
                    dst[x] = static_cast<std::uint8_t>(src[x] + detail::paeth(a, prev[x], c));
                }
                break;
            default:
                throw UnsupportedFormat("corrupt PNG: unknown filter type");
        }
        std::memcpy(prev.data(), dst, stride);
    }
    return img;
}

inline Decoded decode(const std::vector<std::uint8_t>& data) {
    return decode(data.data(), data.size());
}

inline std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path.string());
    return data;
}

inline void write_binary_file(const std::filesystem::path& path,
                              const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

inline Decoded read_file(const std::filesystem::path& path) {
    auto bytes = read_binary_file(path);
    return decode(bytes);
}

inline void write_gray(const std::filesystem::path& path, const GrayImage& img) {
    write_binary_file(path, encode(img));
}

inline void write_rgb(const std::filesystem::path& path, const RgbImage& img) {
    write_binary_file(path, encode(img));
}

}  // namespace gpc::png
