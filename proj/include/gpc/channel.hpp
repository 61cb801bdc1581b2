// SPDX-License-Identifier: Apache-2.0
#pragma once

// The perturbation-cardinality channel. A payload value v is written into a
// glyph by raising exactly v interior ink pixels (canonical value 0) by a
// fixed increment; the decoder recovers v by counting pixels brighter than
// the canonical raster. Pixel selection is a pure function of
// (bitmap, glyph index, v, base seed), so embedding is reproducible and
// order-independent.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gpc/atlas.hpp"
#include "gpc/errors.hpp"

namespace gpc {

struct ChannelConfig {
    std::uint64_t base_seed = 42;
    int p_max = kDefaultPMax;
    int delta = 1;  // gray levels added per perturbed pixel

    void validate() const {
        if (p_max < 1) throw InvalidArgument("p_max must be >= 1");
        if (delta < 1 || delta > 254) throw InvalidArgument("delta must be in [1, 254]");
    }
};

struct PerturbationRecord {
    std::size_t glyph_index = 0;
    int count = 0;
    std::vector<std::pair<int, int>> pixels;
};

inline constexpr std::uint64_t kSeedGamma = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += kSeedGamma;
        return mix64(state);
    }
};

inline std::uint64_t glyph_seed(std::uint64_t base_seed, std::size_t glyph_index) {
    return mix64(base_seed + static_cast<std::uint64_t>(glyph_index) * kSeedGamma);
}

/// Picks exactly v distinct coordinates from the tile's eligible set:
/// partial Fisher-Yates over the row-major eligible list, driven by a
/// per-glyph SplitMix64 stream, indices reduced by modulo.
inline std::vector<std::pair<int, int>> select_pixels(const GlyphTile& tile,
                                                      std::size_t glyph_index, int v,
                                                      const ChannelConfig& cfg) {
    if (v < 0) throw InvalidArgument("payload value must be non-negative");
    if (static_cast<std::size_t>(v) > tile.eligible.size())
        throw CapacityExceeded(glyph_index, v, tile.eligible.size());
    if (v == 0) return {};

    std::vector<std::pair<int, int>> pool = tile.eligible;
    SplitMix64 rng(glyph_seed(cfg.base_seed, glyph_index));
    std::size_t n = pool.size();
    for (std::size_t i = 0; i < static_cast<std::size_t>(v); ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next() % (n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(v);
    return pool;
}

/// Canonical tile + payload value -> perturbed bitmap and its record.
/// Only selected interior pixels change, each from 0 to delta.
inline std::pair<std::vector<std::uint8_t>, PerturbationRecord> embed_glyph(
    const GlyphTile& tile, std::size_t glyph_index, int v, const ChannelConfig& cfg) {
    cfg.validate();
    auto pixels = select_pixels(tile, glyph_index, v, cfg);
    std::vector<std::uint8_t> bitmap = tile.bitmap;
    for (auto [r, c] : pixels)
        bitmap[static_cast<std::size_t>(r) * tile.width + c] =
            static_cast<std::uint8_t>(cfg.delta);
    PerturbationRecord rec{glyph_index, v, std::move(pixels)};
    return {std::move(bitmap), std::move(rec)};
}

struct ExtractResult {
    int count = 0;
    bool tamper_suspected = false;
    std::string note;
};

/// Counts pixels brighter than the canonical raster (detection threshold:
/// one gray level). Darkened pixels or diffs outside the eligible set do not
/// fail the decode; they raise the tamper flag.
inline ExtractResult extract_glyph(const GlyphTile& canonical,
                                   const std::vector<std::uint8_t>& encoded_bitmap,
                                   const ChannelConfig& cfg) {
    (void)cfg;
    if (encoded_bitmap.size() != canonical.bitmap.size())
        throw DimensionMismatch("encoded glyph bitmap size differs from canonical");
    ExtractResult res;
    for (std::size_t i = 0; i < encoded_bitmap.size(); ++i) {
        std::uint8_t enc = encoded_bitmap[i];
        std::uint8_t can = canonical.bitmap[i];
        if (enc > can) {
            ++res.count;
            if (can != 0 && !res.tamper_suspected) {
                res.tamper_suspected = true;
                res.note = "diff at non-eligible pixel index " + std::to_string(i);
            }
        } else if (enc < can && !res.tamper_suspected) {
            res.tamper_suspected = true;
            res.note = "pixel darkened at index " + std::to_string(i);
        }
    }
    return res;
}

struct CapacityRow {
    char ch = 0;
    std::size_t eligible_count = 0;
    bool is_carrier = false;
};

/// Per-glyph capacity in reading order; spaces report zero / non-carrier.
inline std::vector<CapacityRow> capacity_report(const std::vector<GlyphTile>& tiles) {
    std::vector<CapacityRow> rows;
    rows.reserve(tiles.size());
    for (const GlyphTile& t : tiles)
        rows.push_back({t.ch, t.eligible.size(), t.is_carrier()});
    return rows;
}

}  // namespace gpc
