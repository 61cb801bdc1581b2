// SPDX-License-Identifier: Apache-2.0
#pragma once

// Canonical glyph atlas: deterministic rasters for a fixed character set,
// persisted as a glyph strip PNG plus a text sidecar. Encoder and decoder
// must share the same atlas; atlas_id pins the raster content.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gpc/errors.hpp"
#include "gpc/image.hpp"
#include "gpc/png.hpp"
#include "gpc/sha256.hpp"
#include "gpc/truetype.hpp"

namespace gpc {

constexpr int kDefaultPMax = 26;
constexpr std::size_t kMaxTileSide = 4096;

inline const std::string kFullCharset = "ABCDEFGHIJKLMNOPQRSTUVWXYZ ";

/// One glyph's canonical bitmap plus its eligible perturbation sites:
/// the row-major list of pixels whose intensity is exactly 0.
struct GlyphTile {
    char ch = 0;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bitmap;
    std::vector<std::pair<int, int>> eligible;  // (row, col), row-major order

    bool is_carrier() const { return !eligible.empty(); }

    std::uint8_t at(int row, int col) const {
        return bitmap[static_cast<std::size_t>(row) * width + col];
    }
};

/// Recomputes the eligible set from the bitmap (pure function of the pixels).
inline std::vector<std::pair<int, int>> enumerate_eligible(const std::vector<std::uint8_t>& bitmap,
                                                           int width, int height) {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
            if (bitmap[static_cast<std::size_t>(r) * width + c] == 0) out.emplace_back(r, c);
    return out;
}

struct GlyphAtlas {
    std::string atlas_id;
    std::string charset;  // ordered; uppercase A-Z and space only
    int tile_width = 0;
    int tile_height = 0;
    std::map<char, GlyphTile> glyphs;
    std::string font_descriptor;

    bool has(char c) const { return glyphs.count(c) != 0; }
    const GlyphTile& tile_for(char c) const {
        auto it = glyphs.find(c);
        if (it == glyphs.end()) throw UnsupportedChar(c, 0);
        return it->second;
    }
};

namespace detail {

inline void validate_charset(const std::string& charset) {
    if (charset.empty()) throw InvalidArgument("charset must not be empty");
    for (char c : charset)
        if (!((c >= 'A' && c <= 'Z') || c == ' '))
            throw UnsupportedChar(c, static_cast<std::size_t>(&c - charset.data()));
    for (std::size_t i = 0; i < charset.size(); ++i)
        for (std::size_t j = i + 1; j < charset.size(); ++j)
            if (charset[i] == charset[j]) throw InvalidArgument("charset has duplicate characters");
}

}  // namespace detail

/// Digest of the atlas raster content: header fields plus every bitmap,
/// concatenated row-major in charset order. Stable across versions.
inline std::string compute_atlas_id(const std::string& charset, int tile_w, int tile_h,
                                    const std::map<char, GlyphTile>& glyphs) {
    Sha256 h;
    std::string header = "gpc-atlas-v1\n" + charset + "\n" + std::to_string(tile_w) + "x" +
                         std::to_string(tile_h) + "\n";
    h.update(header);
    for (char c : charset) h.update(glyphs.at(c).bitmap);
    return h.hex_digest();
}

/// Rasterizes every charset character into a tile_side x tile_side canvas and
/// validates the capacity floor: each ink-bearing glyph must expose at least
/// min_capacity interior (value 0) pixels.
inline GlyphAtlas build_atlas(const std::vector<std::uint8_t>& font_bytes, double nominal_size_pt,
                              int tile_side, const std::string& charset,
                              int min_capacity = kDefaultPMax) {
    if (tile_side < 1 || static_cast<std::size_t>(tile_side) > kMaxTileSide)
        throw InvalidArgument("tile side out of range");
    if (nominal_size_pt <= 0) throw InvalidArgument("nominal size must be positive");
    detail::validate_charset(charset);

    truetype::Font font(font_bytes);

    GlyphAtlas atlas;
    atlas.charset = charset;
    atlas.tile_width = tile_side;
    atlas.tile_height = tile_side;
    {
        std::ostringstream desc;
        desc << font.family_name() << ", " << nominal_size_pt << " pt";
        atlas.font_descriptor = desc.str();
    }

    for (char c : charset) {
        // 1 pt = 1 px em (72 dpi convention)
        GrayImage tile = font.render_glyph(static_cast<char32_t>(c), nominal_size_pt, tile_side);
        GlyphTile gt;
        gt.ch = c;
        gt.width = tile.width;
        gt.height = tile.height;
        gt.bitmap = std::move(tile.pixels);
        gt.eligible = enumerate_eligible(gt.bitmap, gt.width, gt.height);
        if (c != ' ' && gt.eligible.size() < static_cast<std::size_t>(min_capacity))
            throw InsufficientCapacity(c, gt.eligible.size(), min_capacity);
        atlas.glyphs.emplace(c, std::move(gt));
    }

    atlas.atlas_id = compute_atlas_id(atlas.charset, atlas.tile_width, atlas.tile_height,
                                      atlas.glyphs);
    return atlas;
}

inline void save_atlas(const GlyphAtlas& atlas, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create atlas directory " + dir.string());

    int n = static_cast<int>(atlas.charset.size());
    GrayImage strip(atlas.tile_width * n, atlas.tile_height, 255);
    for (int i = 0; i < n; ++i) {
        const GlyphTile& g = atlas.glyphs.at(atlas.charset[i]);
        for (int r = 0; r < atlas.tile_height; ++r)
            for (int c = 0; c < atlas.tile_width; ++c)
                strip.at(r, i * atlas.tile_width + c) = g.at(r, c);
    }
    png::write_gray(dir / "atlas.png", strip);

    std::ofstream out(dir / "atlas.txt", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write atlas sidecar in " + dir.string());
    out << "gpc-atlas 1\n";
    out << "atlas_id: " << atlas.atlas_id << "\n";
    out << "charset: " << atlas.charset << "\n";
    out << "tile_width: " << atlas.tile_width << "\n";
    out << "tile_height: " << atlas.tile_height << "\n";
    out << "font_descriptor: " << atlas.font_descriptor << "\n";
    if (!out) throw IoError("write failed for atlas sidecar");
}

inline GlyphAtlas load_atlas(const std::filesystem::path& dir) {
    std::ifstream in(dir / "atlas.txt", std::ios::binary);
    if (!in) throw IoError("cannot open atlas sidecar " + (dir / "atlas.txt").string());

    GlyphAtlas atlas;
    std::string line;
    if (!std::getline(in, line) || line != "gpc-atlas 1")
        throw AtlasCorrupt("atlas sidecar: bad magic line");
    auto field = [&](const std::string& key) {
        if (!std::getline(in, line) || line.rfind(key + ": ", 0) != 0)
            throw AtlasCorrupt("atlas sidecar: missing field " + key);
        return line.substr(key.size() + 2);
    };
    atlas.atlas_id = field("atlas_id");
    atlas.charset = field("charset");
    try {
        atlas.tile_width = std::stoi(field("tile_width"));
        atlas.tile_height = std::stoi(field("tile_height"));
    } catch (const std::exception&) {
        throw AtlasCorrupt("atlas sidecar: bad tile dimensions");
    }
    atlas.font_descriptor = field("font_descriptor");
    if (atlas.tile_width < 1 || atlas.tile_height < 1 ||
        static_cast<std::size_t>(atlas.tile_width) > kMaxTileSide ||
        static_cast<std::size_t>(atlas.tile_height) > kMaxTileSide)
        throw AtlasCorrupt("atlas sidecar: tile dimensions out of range");
    try {
        detail::validate_charset(atlas.charset);
    } catch (const Error& e) {
        throw AtlasCorrupt(std::string("atlas sidecar: bad charset: ") + e.what());
    }

    png::Decoded strip;
    try {
        strip = png::read_file(dir / "atlas.png");
    } catch (const UnsupportedFormat& e) {
        throw AtlasCorrupt(std::string("atlas image unreadable: ") + e.what());
    }
    int n = static_cast<int>(atlas.charset.size());
    if (strip.channels != 1 || strip.width != atlas.tile_width * n ||
        strip.height != atlas.tile_height)
        throw AtlasCorrupt("atlas image does not match sidecar geometry");

    for (int i = 0; i < n; ++i) {
        GlyphTile g;
        g.ch = atlas.charset[i];
        g.width = atlas.tile_width;
        g.height = atlas.tile_height;
        g.bitmap.resize(static_cast<std::size_t>(g.width) * g.height);
        for (int r = 0; r < g.height; ++r)
            for (int c = 0; c < g.width; ++c)
                g.bitmap[static_cast<std::size_t>(r) * g.width + c] =
                    strip.pixels[static_cast<std::size_t>(r) * strip.width + i * g.width + c];
        g.eligible = enumerate_eligible(g.bitmap, g.width, g.height);
        atlas.glyphs.emplace(g.ch, std::move(g));
    }

    std::string recomputed = compute_atlas_id(atlas.charset, atlas.tile_width, atlas.tile_height,
                                              atlas.glyphs);
    if (recomputed != atlas.atlas_id)
        throw AtlasCorrupt("atlas digest mismatch: expected " + atlas.atlas_id + ", got " +
                           recomputed);
    return atlas;
}

/// Uppercases cover text and maps it to canonical tiles in reading order.
/// Spaces are included; their empty eligible set marks them non-carrier.
inline std::vector<GlyphTile> render_cover(const GlyphAtlas& atlas, const std::string& cover_text) {
    std::vector<GlyphTile> tiles;
    tiles.reserve(cover_text.size());
    for (std::size_t i = 0; i < cover_text.size(); ++i) {
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(cover_text[i])));
        if (!atlas.has(c)) throw UnsupportedChar(cover_text[i], i);
        tiles.push_back(atlas.glyphs.at(c));
    }
    return tiles;
}

/// Uppercased copy of cover text, validated against the atlas charset.
inline std::string normalize_cover(const GlyphAtlas& atlas, const std::string& cover_text) {
    std::string out;
    out.reserve(cover_text.size());
    for (std::size_t i = 0; i < cover_text.size(); ++i) {
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(cover_text[i])));
        if (!atlas.has(c)) throw UnsupportedChar(cover_text[i], i);
        out.push_back(c);
    }
    return out;
}

}  // namespace gpc
