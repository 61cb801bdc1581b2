// SPDX-License-Identifier: Apache-2.0
#pragma once

// End-to-end flows: payload -> perturbed pages (+ manifest), and back.
// Embedding is a pure function of (payload, cover, atlas, config), so two
// runs produce byte-identical artifacts, with or without per-glyph
// parallelism.

#include <string>
#include <thread>
#include <vector>

#include "gpc/atlas.hpp"
#include "gpc/channel.hpp"
#include "gpc/codec.hpp"
#include "gpc/container.hpp"
#include "gpc/errors.hpp"
#include "gpc/metrics.hpp"

namespace gpc {

struct PageLayout {
    int glyphs_per_row = 0;     // 0: one row per page (cover length)
    bool repeat_cover = false;  // allow payloads longer than one page of carriers
    bool parallel = false;      // embed glyphs across threads
};

struct EncodeResult {
    std::vector<EncodedPage> pages;
    Manifest manifest;
};

namespace detail {

inline std::vector<std::size_t> carrier_indices(const std::vector<GlyphTile>& tiles) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tiles.size(); ++i)
        if (tiles[i].is_carrier()) out.push_back(i);
    return out;
}

inline GrayImage tile_image(const GlyphTile& tile) {
    GrayImage img(tile.width, tile.height);
    img.pixels = tile.bitmap;
    return img;
}

}  // namespace detail

/// Embeds an already-encoded payload sequence into pages of the cover text.
/// The cover is uppercased; payloads larger than one page of carriers need
/// layout.repeat_cover, which repeats the cover on subsequent pages.
inline EncodeResult encode_payload(const PayloadSequence& seq, const std::string& cover_text,
                                   const GlyphAtlas& atlas, const ChannelConfig& cfg,
                                   const PageLayout& layout = {}) {
    cfg.validate();
    if (seq.p_max != cfg.p_max)
        throw InvalidArgument("payload p_max " + std::to_string(seq.p_max) +
                              " does not match channel p_max " + std::to_string(cfg.p_max));
    for (std::size_t i = 0; i < seq.values.size(); ++i)
        if (seq.values[i] < 0 || seq.values[i] > cfg.p_max)
            throw ValueOutOfRange(i, seq.values[i]);

    std::string cover = normalize_cover(atlas, cover_text);
    if (cover.empty()) throw InvalidArgument("cover text must not be empty");
    std::vector<GlyphTile> canonical = render_cover(atlas, cover);
    std::vector<std::size_t> carriers = detail::carrier_indices(canonical);

    std::size_t per_page = carriers.size();
    std::size_t needed = seq.values.size();
    if (per_page == 0 && needed > 0) throw CoverTooShort(needed, 0);
    std::size_t page_count = needed == 0 ? 1 : (needed + per_page - 1) / per_page;
    if (page_count > 1 && !layout.repeat_cover) throw CoverTooShort(needed, per_page);

    int glyphs_per_row =
        layout.glyphs_per_row > 0 ? layout.glyphs_per_row : static_cast<int>(cover.size());

    EncodeResult result;
    for (std::size_t p = 0; p < page_count; ++p) {
        std::size_t offset = p * per_page;
        std::size_t count = std::min(per_page, needed - std::min(needed, offset));

        std::vector<GrayImage> tiles(canonical.size());
        for (std::size_t i = 0; i < canonical.size(); ++i)
            tiles[i] = detail::tile_image(canonical[i]);

        auto embed_range = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t t = lo; t < hi; ++t) {
                std::size_t glyph_idx = carriers[t];
                auto [bitmap, rec] =
                    embed_glyph(canonical[glyph_idx], glyph_idx, seq.values[offset + t], cfg);
                tiles[glyph_idx].pixels = std::move(bitmap);
            }
        };
        if (layout.parallel && count > 1) {
            unsigned n = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
            std::vector<std::thread> workers;
            std::size_t chunk = (count + n - 1) / n;
            for (unsigned k = 0; k < n; ++k) {
                std::size_t lo = std::min<std::size_t>(k * chunk, count);
                std::size_t hi = std::min<std::size_t>(lo + chunk, count);
                if (lo < hi) workers.emplace_back(embed_range, lo, hi);
            }
            for (auto& w : workers) w.join();
        } else {
            embed_range(0, count);
        }
        result.pages.push_back(assemble_page(tiles, glyphs_per_row));
    }

    Manifest& m = result.manifest;
    m.atlas_id = atlas.atlas_id;
    m.cover_text = cover;
    m.base_seed = cfg.base_seed;
    m.p_max = cfg.p_max;
    m.delta = cfg.delta;
    m.glyphs_per_row = glyphs_per_row;
    m.page_count = static_cast<int>(page_count);
    m.modality = seq.modality;
    m.payload_length = seq.values.size();
    m.carrier_map = carriers;
    m.image = seq.image;
    m.audio = seq.audio;
    m.video = seq.video;
    return result;
}

struct DecodeResult {
    PayloadSequence payload;
    bool tamper_suspected = false;
    std::vector<std::string> warnings;
};

/// Recovers the payload sequence by differencing pages against the atlas.
/// Tamper indications (darkened pixels, diffs outside eligible sets) are
/// surfaced as warnings, not failures. cover_check, when given, must match
/// the manifest's cover text after normalization.
inline DecodeResult decode_payload(const std::vector<EncodedPage>& pages, const Manifest& manifest,
                                   const GlyphAtlas& atlas,
                                   const std::string* cover_check = nullptr) {
    if (cover_check && normalize_cover(atlas, *cover_check) != manifest.cover_text)
        throw GeometryMismatch("cover check failed: manifest cover is '" + manifest.cover_text +
                               "'");
    if (pages.size() != static_cast<std::size_t>(manifest.page_count))
        throw GeometryMismatch("expected " + std::to_string(manifest.page_count) + " page(s), got " +
                               std::to_string(pages.size()));
    ChannelConfig cfg{manifest.base_seed, manifest.p_max, manifest.delta};

    DecodeResult result;
    result.payload.modality = manifest.modality;
    result.payload.p_max = manifest.p_max;
    result.payload.image = manifest.image;
    result.payload.audio = manifest.audio;
    result.payload.video = manifest.video;

    std::size_t remaining = manifest.payload_length;
    for (std::size_t p = 0; p < pages.size(); ++p) {
        auto cells = disassemble_page(pages[p], manifest, atlas);
        std::size_t take = std::min(remaining, cells.size());
        for (std::size_t t = 0; t < take; ++t) {
            ExtractResult ex = extract_glyph(*cells[t].first, cells[t].second.pixels, cfg);
            result.payload.values.push_back(ex.count);
            if (ex.tamper_suspected) {
                result.tamper_suspected = true;
                result.warnings.push_back("page " + std::to_string(p) + ", carrier " +
                                          std::to_string(t) + ": " + ex.note);
            }
        }
        remaining -= take;
    }
    if (remaining != 0)
        throw GeometryMismatch("pages carry fewer values than payload_length");
    return result;
}

/// Canonical (unperturbed) page for a manifest; the decoder-side reference.
inline EncodedPage canonical_page(const Manifest& manifest, const GlyphAtlas& atlas) {
    std::vector<GlyphTile> canonical = render_cover(atlas, manifest.cover_text);
    std::vector<GrayImage> tiles(canonical.size());
    for (std::size_t i = 0; i < canonical.size(); ++i) tiles[i] = detail::tile_image(canonical[i]);
    return assemble_page(tiles, manifest.glyphs_per_row);
}

// --------------------------------------------------- modality front ends

inline EncodeResult encode_text(const std::string& secret, const std::string& cover,
                                const GlyphAtlas& atlas, const ChannelConfig& cfg,
                                const PageLayout& layout = {}) {
    PayloadSequence seq = text_encode(secret);
    seq.p_max = cfg.p_max;  // text values are always <= 26 <= p_max by contract
    return encode_payload(seq, cover, atlas, cfg, layout);
}

inline EncodeResult encode_image(const RgbImage& img, const std::string& cover,
                                 const GlyphAtlas& atlas, const ChannelConfig& cfg,
                                 const PageLayout& layout = {}) {
    return encode_payload(image_encode(img, cfg.p_max), cover, atlas, cfg, layout);
}

inline EncodeResult encode_audio(const std::vector<double>& samples, int sample_rate,
                                 const std::string& cover, const GlyphAtlas& atlas,
                                 const ChannelConfig& cfg, const PageLayout& layout = {},
                                 int frame_len = 1024, int hop_len = 512) {
    return encode_payload(audio_encode(samples, frame_len, hop_len, sample_rate, cfg.p_max),
                          cover, atlas, cfg, layout);
}

inline EncodeResult encode_video(const std::vector<RgbImage>& frames, const std::string& cover,
                                 const GlyphAtlas& atlas, const ChannelConfig& cfg,
                                 const PageLayout& layout = {}) {
    return encode_payload(video_encode(frames, cfg.p_max), cover, atlas, cfg, layout);
}

// -------------------------------------------------------------- evaluate

inline MetricsReport evaluate_text(const std::string& original, const std::string& recovered) {
    MetricsReport r;
    r.modality = Modality::text;
    r.scalars["cer"] = cer(original, recovered);
    r.scalars["ber"] = ber(original, recovered);
    r.scalars["exact_match"] = original == recovered ? 1.0 : 0.0;
    return r;
}

inline MetricsReport evaluate_image(const RgbImage& original, const RgbImage& recovered) {
    MetricsReport r;
    r.modality = Modality::image;
    ImageMetrics m = image_metrics(original, recovered);
    r.scalars["mse"] = m.mse;
    r.scalars["mae"] = m.mae;
    r.scalars["rmse"] = m.rmse;
    r.scalars["psnr"] = m.psnr;
    r.scalars["ssim_avg"] = m.ssim_avg;
    r.scalars["ssim_r"] = m.ssim_per_channel[0];
    r.scalars["ssim_g"] = m.ssim_per_channel[1];
    r.scalars["ssim_b"] = m.ssim_per_channel[2];
    return r;
}

inline MetricsReport evaluate_audio(const std::vector<double>& original,
                                    const std::vector<double>& recovered) {
    MetricsReport r;
    r.modality = Modality::audio;
    AudioMetrics m = audio_metrics(original, recovered);
    r.scalars["mae"] = m.mae;
    r.scalars["mse"] = m.mse;
    r.scalars["snr_db"] = m.snr_db;
    return r;
}

inline MetricsReport evaluate_video(const std::vector<RgbImage>& original,
                                    const std::vector<RgbImage>& recovered) {
    MetricsReport r;
    r.modality = Modality::video;
    VideoMetrics m = video_metrics(original, recovered);
    r.scalars["psnr_mean"] = m.psnr_mean;
    r.scalars["psnr_std"] = m.psnr_std;
    r.scalars["ssim_mean"] = m.ssim_mean;
    r.scalars["ssim_std"] = m.ssim_std;
    r.series.emplace_back("psnr", m.psnr);
    r.series.emplace_back("ssim", m.ssim);
    return r;
}

}  // namespace gpc
