// SPDX-License-Identifier: Apache-2.0
#pragma once

// Page assembly and the manifest sidecar. A page is a row-major grid of
// glyph tiles serialized as one grayscale PNG; the manifest binds it to the
// cover text, atlas identity, channel parameters and the modality inversion
// parameters, which is everything a receiver needs besides the atlas.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gpc/atlas.hpp"
#include "gpc/codec.hpp"
#include "gpc/errors.hpp"
#include "gpc/image.hpp"

namespace gpc {

struct EncodedPage {
    GrayImage bitmap;
    int glyphs_per_row = 0;
    int glyph_count = 0;
    int tile_width = 0;
    int tile_height = 0;

    int rows() const { return (glyph_count + glyphs_per_row - 1) / glyphs_per_row; }
};

struct Manifest {
    int version = 1;
    std::string atlas_id;
    std::string cover_text;
    std::uint64_t base_seed = 42;
    int p_max = 26;
    int delta = 1;
    int glyphs_per_row = 0;
    int page_count = 1;
    Modality modality = Modality::text;
    std::size_t payload_length = 0;
    std::vector<std::size_t> carrier_map;  // strictly increasing glyph indices
    ImageDims image;
    AudioParams audio;
    VideoParams video;
};

/// Lays tiles out row-major; trailing cells of the last row stay blank (255).
inline EncodedPage assemble_page(const std::vector<GrayImage>& tiles, int glyphs_per_row) {
    if (tiles.empty()) throw InvalidArgument("assemble_page: no tiles");
    if (glyphs_per_row < 1) throw InvalidArgument("assemble_page: glyphs_per_row must be >= 1");
    int tw = tiles[0].width, th = tiles[0].height;
    for (const auto& t : tiles)
        if (t.width != tw || t.height != th)
            throw MixedTileSizes("assemble_page: tiles have mixed dimensions");

    int count = static_cast<int>(tiles.size());
    int rows = (count + glyphs_per_row - 1) / glyphs_per_row;
    EncodedPage page;
    page.glyphs_per_row = glyphs_per_row;
    page.glyph_count = count;
    page.tile_width = tw;
    page.tile_height = th;
    page.bitmap = GrayImage(glyphs_per_row * tw, rows * th, 255);
    for (int k = 0; k < count; ++k) {
        int cell_r = (k / glyphs_per_row) * th;
        int cell_c = (k % glyphs_per_row) * tw;
        for (int r = 0; r < th; ++r)
            for (int c = 0; c < tw; ++c)
                page.bitmap.at(cell_r + r, cell_c + c) = tiles[k].at(r, c);
    }
    return page;
}

/// Cuts cell k back out of the page, bit-exact.
inline GrayImage extract_cell(const EncodedPage& page, int k) {
    if (k < 0 || k >= page.glyph_count) throw InvalidArgument("extract_cell: index out of range");
    GrayImage out(page.tile_width, page.tile_height);
    int cell_r = (k / page.glyphs_per_row) * page.tile_height;
    int cell_c = (k % page.glyphs_per_row) * page.tile_width;
    for (int r = 0; r < page.tile_height; ++r)
        for (int c = 0; c < page.tile_width; ++c)
            out.at(r, c) = page.bitmap.at(cell_r + r, cell_c + c);
    return out;
}

/// Pairs each carrier cell with its canonical tile, in reading order.
inline std::vector<std::pair<const GlyphTile*, GrayImage>> disassemble_page(
    const EncodedPage& page, const Manifest& manifest, const GlyphAtlas& atlas) {
    if (manifest.atlas_id != atlas.atlas_id)
        throw AtlasMismatch("manifest atlas_id " + manifest.atlas_id +
                            " does not match atlas " + atlas.atlas_id);
    int count = static_cast<int>(manifest.cover_text.size());
    if (count < 1 || manifest.glyphs_per_row < 1)
        throw GeometryMismatch("manifest cover/layout is empty");
    int rows = (count + manifest.glyphs_per_row - 1) / manifest.glyphs_per_row;
    if (page.bitmap.width != manifest.glyphs_per_row * atlas.tile_width ||
        page.bitmap.height != rows * atlas.tile_height)
        throw GeometryMismatch("page is " + std::to_string(page.bitmap.width) + "x" +
                               std::to_string(page.bitmap.height) + ", expected " +
                               std::to_string(manifest.glyphs_per_row * atlas.tile_width) + "x" +
                               std::to_string(rows * atlas.tile_height));

    EncodedPage geom = page;
    geom.glyphs_per_row = manifest.glyphs_per_row;
    geom.glyph_count = count;
    geom.tile_width = atlas.tile_width;
    geom.tile_height = atlas.tile_height;

    std::vector<std::pair<const GlyphTile*, GrayImage>> out;
    out.reserve(manifest.carrier_map.size());
    for (std::size_t idx : manifest.carrier_map) {
        if (idx >= static_cast<std::size_t>(count))
            throw GeometryMismatch("carrier index beyond cover length");
        char c = manifest.cover_text[idx];
        out.emplace_back(&atlas.tile_for(c), extract_cell(geom, static_cast<int>(idx)));
    }
    return out;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);  // shortest round-trip form
    if (ec != std::errc{}) throw Error("double formatting failed");
    return std::string(buf, ptr);
}

inline double parse_double(const std::string& s, const std::string& key) {
    double v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ManifestParse("bad numeric value for " + key + ": '" + s + "'");
    return v;
}

inline long long parse_int(const std::string& s, const std::string& key) {
    long long v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ManifestParse("bad integer value for " + key + ": '" + s + "'");
    return v;
}

}  // namespace detail

inline void write_manifest(const Manifest& m, std::ostream& out) {
    out << "gpc-manifest " << m.version << "\n";
    out << "atlas_id: " << m.atlas_id << "\n";
    out << "cover_text: " << m.cover_text << "\n";
    out << "base_seed: " << m.base_seed << "\n";
    out << "p_max: " << m.p_max << "\n";
    out << "delta: " << m.delta << "\n";
    out << "glyphs_per_row: " << m.glyphs_per_row << "\n";
    out << "page_count: " << m.page_count << "\n";
    out << "modality: " << to_string(m.modality) << "\n";
    out << "payload_length: " << m.payload_length << "\n";
    out << "carrier_map:";
    for (std::size_t idx : m.carrier_map) out << " " << idx;
    out << "\n";
    switch (m.modality) {
        case Modality::text:
            break;
        case Modality::image:
            out << "image_height: " << m.image.height << "\n";
            out << "image_width: " << m.image.width << "\n";
            out << "channel_order: RGB\n";
            break;
        case Modality::audio:
            out << "frame_len: " << m.audio.frame_len << "\n";
            out << "hop_len: " << m.audio.hop_len << "\n";
            out << "sample_rate: " << m.audio.sample_rate << "\n";
            out << "s_min: " << detail::format_double(m.audio.s_min) << "\n";
            out << "s_max: " << detail::format_double(m.audio.s_max) << "\n";
            out << "degenerate: " << (m.audio.degenerate ? 1 : 0) << "\n";
            break;
        case Modality::video:
            out << "frame_count: " << m.video.frame_count << "\n";
            out << "frame_height: " << m.video.height << "\n";
            out << "frame_width: " << m.video.width << "\n";
            out << "channel_order: RGB\n";
            break;
    }
}

inline void write_manifest(const Manifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest " + path.string());
    write_manifest(m, out);
    if (!out) throw IoError("write failed for manifest " + path.string());
}

inline Manifest read_manifest(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ManifestParse("empty manifest");
    if (line.rfind("gpc-manifest ", 0) != 0) throw ManifestParse("bad magic line");
    long long version = detail::parse_int(line.substr(13), "version");
    if (version != 1) throw VersionUnsupported("manifest version " + std::to_string(version));

    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto colon = line.find(": ");
        if (colon == std::string::npos) {
            // allow "key:" with empty value (empty carrier_map)
            if (!line.empty() && line.back() == ':')
                colon = line.size() - 1;
            else
                throw ManifestParse("malformed line: '" + line + "'");
            kv[line.substr(0, colon)] = "";
        } else {
            kv[line.substr(0, colon)] = line.substr(colon + 2);
        }
    }
    auto require = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ManifestParse("missing required key: " + key);
        return it->second;
    };

    Manifest m;
    m.version = static_cast<int>(version);
    m.atlas_id = require("atlas_id");
    m.cover_text = require("cover_text");
    m.base_seed = static_cast<std::uint64_t>(detail::parse_int(require("base_seed"), "base_seed"));
    m.p_max = static_cast<int>(detail::parse_int(require("p_max"), "p_max"));
    m.delta = static_cast<int>(detail::parse_int(require("delta"), "delta"));
    m.glyphs_per_row =
        static_cast<int>(detail::parse_int(require("glyphs_per_row"), "glyphs_per_row"));
    m.page_count = static_cast<int>(detail::parse_int(require("page_count"), "page_count"));
    m.modality = modality_from_string(require("modality"));
    m.payload_length =
        static_cast<std::size_t>(detail::parse_int(require("payload_length"), "payload_length"));
    {
        std::istringstream cm(require("carrier_map"));
        long long idx;
        long long prev = -1;
        while (cm >> idx) {
            if (idx <= prev) throw ManifestParse("carrier_map must be strictly increasing");
            m.carrier_map.push_back(static_cast<std::size_t>(idx));
            prev = idx;
        }
    }
    switch (m.modality) {
        case Modality::text:
            break;
        case Modality::image:
            m.image.height = static_cast<int>(detail::parse_int(require("image_height"), "image_height"));
            m.image.width = static_cast<int>(detail::parse_int(require("image_width"), "image_width"));
            break;
        case Modality::audio:
            m.audio.frame_len = static_cast<int>(detail::parse_int(require("frame_len"), "frame_len"));
            m.audio.hop_len = static_cast<int>(detail::parse_int(require("hop_len"), "hop_len"));
            m.audio.sample_rate =
                static_cast<int>(detail::parse_int(require("sample_rate"), "sample_rate"));
            m.audio.s_min = detail::parse_double(require("s_min"), "s_min");
            m.audio.s_max = detail::parse_double(require("s_max"), "s_max");
            m.audio.degenerate = detail::parse_int(require("degenerate"), "degenerate") != 0;
            if (m.audio.s_min > m.audio.s_max)
                throw ManifestParse("s_min must not exceed s_max");
            break;
        case Modality::video:
            m.video.frame_count =
                static_cast<int>(detail::parse_int(require("frame_count"), "frame_count"));
            m.video.height = static_cast<int>(detail::parse_int(require("frame_height"), "frame_height"));
            m.video.width = static_cast<int>(detail::parse_int(require("frame_width"), "frame_width"));
            break;
    }

    if (m.p_max < 1 || m.delta < 1 || m.delta > 254 || m.glyphs_per_row < 1 || m.page_count < 1)
        throw ManifestParse("parameter out of range");
    if (m.payload_length > m.carrier_map.size() * static_cast<std::size_t>(m.page_count))
        throw ManifestParse("payload_length exceeds carrier capacity of " +
                            std::to_string(m.page_count) + " page(s)");
    return m;
}

inline Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest " + path.string());
    return read_manifest(in);
}

}  // namespace gpc
