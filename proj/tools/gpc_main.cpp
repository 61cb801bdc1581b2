// SPDX-License-Identifier: Apache-2.0
//
// gpc: embed text, images, audio and video into rendered cover text by
// perturbing counted interior ink pixels per glyph, and recover them by
// differencing against the canonical glyph atlas.
//
// Exit codes: 0 success, 2 validation error, 3 integrity warning, 64 usage.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gpc/atlas.hpp"
#include "gpc/channel.hpp"
#include "gpc/codec.hpp"
#include "gpc/container.hpp"
#include "gpc/media_io.hpp"
#include "gpc/metrics.hpp"
#include "gpc/pipeline.hpp"
#include "gpc/png.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIntegrity = 3;
constexpr int kExitUsage = 64;

#ifndef GPC_BUNDLED_FONT
#define GPC_BUNDLED_FONT "assets/fonts/DejaVuSans-Bold.ttf"
#endif

std::string default_atlas_dir() {
    const char* env = std::getenv("GPC_ATLAS_DIR");
    return env ? env : "";
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gpc::IoError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

/// Flag values that may be either a literal string or a path to a file.
std::string text_or_file(const std::string& value) {
    if (fs::exists(value) && fs::is_regular_file(value)) return read_text_file(value);
    return value;
}

gpc::GlyphAtlas load_atlas_checked(const std::string& dir) {
    if (dir.empty())
        throw gpc::InvalidArgument("no atlas directory (use --atlas or set GPC_ATLAS_DIR)");
    return gpc::load_atlas(dir);
}

fs::path page_path_for(const fs::path& base, std::size_t index, std::size_t total) {
    if (total <= 1) return base;
    fs::path stem = base.stem();
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "_%04zu", index);
    return base.parent_path() / (stem.string() + suffix + base.extension().string());
}

std::vector<gpc::EncodedPage> load_pages(std::vector<std::string> paths,
                                         const gpc::Manifest& manifest) {
    // single path + multi-page manifest: derive siblings from the write pattern
    if (paths.size() == 1 && manifest.page_count > 1) {
        fs::path given(paths[0]);
        if (fs::exists(page_path_for(given, 0, 2))) {
            paths.clear();
            for (int p = 0; p < manifest.page_count; ++p)
                paths.push_back(page_path_for(given, p, 2).string());
        }
    }
    std::vector<gpc::EncodedPage> pages;
    for (const auto& path : paths) {
        gpc::png::Decoded dec = gpc::png::read_file(path);
        if (dec.channels != 1)
            throw gpc::UnsupportedFormat("page must be a grayscale PNG: " + path);
        gpc::EncodedPage page;
        page.bitmap = gpc::GrayImage(dec.width, dec.height);
        page.bitmap.pixels = std::move(dec.pixels);
        pages.push_back(std::move(page));
    }
    return pages;
}

void write_metrics_csv(const fs::path& path, const gpc::MetricsReport& report) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw gpc::IoError("cannot write " + path.string());
    out << "name,index,value\n";
    for (const auto& [name, value] : report.scalars)
        out << name << ",," << gpc::detail::format_double(value) << "\n";
    for (const auto& [name, series] : report.series)
        for (std::size_t i = 0; i < series.size(); ++i)
            out << name << "," << i << "," << gpc::detail::format_double(series[i]) << "\n";
}

void print_report(const gpc::MetricsReport& report, std::ostream& out) {
    out << "modality: " << gpc::to_string(report.modality) << "\n";
    for (const auto& [name, value] : report.scalars) out << name << " = " << value << "\n";
    for (const auto& [name, series] : report.series)
        out << name << ": " << series.size() << " values (see CSV)\n";
}

void write_summary(const fs::path& path, const gpc::MetricsReport& report) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw gpc::IoError("cannot write " + path.string());
    print_report(report, out);
}

// ------------------------------------------------------------------ atlas

struct AtlasArgs {
    std::string font = GPC_BUNDLED_FONT;
    double size = 0.0;  // 0: derived from tile (36/64 ratio)
    int tile = 64;
    std::string out;
    std::string charset = gpc::kFullCharset;
    int pmax = gpc::kDefaultPMax;
};

int run_atlas(const AtlasArgs& args) {
    double size = args.size > 0 ? args.size : args.tile * 36.0 / 64.0;
    auto font_bytes = gpc::png::read_binary_file(args.font);
    gpc::GlyphAtlas atlas = gpc::build_atlas(font_bytes, size, args.tile, args.charset, args.pmax);
    gpc::save_atlas(atlas, args.out);
    std::cout << "atlas " << atlas.atlas_id.substr(0, 12) << " (" << atlas.charset.size()
              << " glyphs, " << args.tile << "px tiles, " << atlas.font_descriptor
              << ") -> " << args.out << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- encode

struct EncodeArgs {
    std::string modality;
    std::string cover_text;  // literal
    std::string cover_file;  // file containing the cover text
    std::string secret;      // literal (text) or path (image/audio/video)
    std::string atlas_dir = default_atlas_dir();
    std::string out;
    std::string manifest;
    std::uint64_t seed = 42;
    int pmax = gpc::kDefaultPMax;
    int delta = 1;
    bool repeat_cover = false;
    bool parallel = false;
    int glyphs_per_row = 0;
    int frame_step = 1;
    std::string canvas;  // HxW for video (and optional image resize)
    int frame_len = 1024;
    int hop_len = 512;
};

std::pair<int, int> parse_canvas(const std::string& canvas) {
    int h = 0, w = 0;
    if (std::sscanf(canvas.c_str(), "%dx%d", &h, &w) != 2 || h < 1 || w < 1)
        throw gpc::InvalidArgument("--canvas expects HxW, got '" + canvas + "'");
    return {h, w};
}

int run_encode(const EncodeArgs& args) {
    gpc::GlyphAtlas atlas = load_atlas_checked(args.atlas_dir);
    gpc::ChannelConfig cfg{args.seed, args.pmax, args.delta};
    gpc::PageLayout layout{args.glyphs_per_row, args.repeat_cover, args.parallel};
    if (args.cover_text.empty() && args.cover_file.empty())
        throw gpc::InvalidArgument("encode needs --cover-text or --cover");
    std::string cover =
        args.cover_file.empty() ? args.cover_text : read_text_file(args.cover_file);

    gpc::PayloadSequence seq;
    gpc::Modality modality = gpc::modality_from_string(args.modality);
    switch (modality) {
        case gpc::Modality::text:
            seq = gpc::text_encode(text_or_file(args.secret));
            seq.p_max = cfg.p_max;
            break;
        case gpc::Modality::image: {
            gpc::RgbImage img = gpc::load_image(args.secret);
            if (!args.canvas.empty()) {
                auto [h, w] = parse_canvas(args.canvas);
                img = gpc::resize_image(img, h, w);
            }
            seq = gpc::image_encode(img, cfg.p_max);
            break;
        }
        case gpc::Modality::audio: {
            gpc::AudioClip clip = gpc::load_wav(args.secret);
            seq = gpc::audio_encode(clip.samples, args.frame_len, args.hop_len, clip.sample_rate,
                                    cfg.p_max);
            break;
        }
        case gpc::Modality::video: {
            gpc::FrameStream stream = gpc::load_frames(args.secret);
            std::vector<gpc::RgbImage> frames;
            for (std::size_t i = 0; i < stream.frames.size(); i += args.frame_step)
                frames.push_back(std::move(stream.frames[i]));
            auto [h, w] = parse_canvas(args.canvas.empty() ? "120x120" : args.canvas);
            for (auto& f : frames) f = gpc::resize_image(f, h, w);
            seq = gpc::video_encode(frames, cfg.p_max);
            break;
        }
    }

    gpc::EncodeResult result = gpc::encode_payload(seq, cover, atlas, cfg, layout);
    for (std::size_t p = 0; p < result.pages.size(); ++p)
        gpc::png::write_gray(page_path_for(args.out, p, result.pages.size()),
                             result.pages[p].bitmap);
    gpc::write_manifest(result.manifest, args.manifest);
    std::cout << "encoded " << seq.values.size() << " value(s) into " << result.pages.size()
              << " page(s) -> " << args.out << " (manifest " << args.manifest << ")\n";
    return kExitOk;
}

// ----------------------------------------------------------------- decode

struct DecodeArgs {
    std::vector<std::string> pages;
    std::string manifest;
    std::string atlas_dir = default_atlas_dir();
    std::string out;
    std::string reference;    // WAV for reference-frame audio reconstruction
    std::string cover_check;  // optional expected cover text
    std::uint64_t seed = 42;
    bool seed_given = false;
};

int run_decode(const DecodeArgs& args) {
    gpc::GlyphAtlas atlas = load_atlas_checked(args.atlas_dir);
    gpc::Manifest manifest = gpc::read_manifest(args.manifest);
    if (args.seed_given && args.seed != manifest.base_seed)
        throw gpc::InvalidArgument("--seed " + std::to_string(args.seed) +
                                   " does not match manifest base_seed " +
                                   std::to_string(manifest.base_seed));
    std::vector<gpc::EncodedPage> pages = load_pages(args.pages, manifest);
    std::string cover_check = text_or_file(args.cover_check);
    gpc::DecodeResult result = gpc::decode_payload(
        pages, manifest, atlas, args.cover_check.empty() ? nullptr : &cover_check);

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    switch (manifest.modality) {
        case gpc::Modality::text: {
            std::string secret = gpc::text_decode(result.payload);
            std::cout << "recovered: " << secret << "\n";
            if (!args.out.empty()) {
                std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
                if (!out) throw gpc::IoError("cannot write " + args.out);
                out << secret << "\n";
            }
            break;
        }
        case gpc::Modality::image: {
            if (args.out.empty()) throw gpc::InvalidArgument("image decode needs --out PATH.png");
            gpc::save_image(gpc::image_decode(result.payload), args.out);
            std::cout << "recovered image " << result.payload.image.height << "x"
                      << result.payload.image.width << " -> " << args.out << "\n";
            break;
        }
        case gpc::Modality::audio: {
            if (args.out.empty()) throw gpc::InvalidArgument("audio decode needs --out PATH.wav");
            std::vector<double> samples;
            if (!args.reference.empty()) {
                gpc::AudioClip ref = gpc::load_wav(args.reference);
                samples = gpc::audio_decode(result.payload, &ref.samples);
                std::cout << "reconstruction: reference frames\n";
            } else {
                samples = gpc::audio_decode(result.payload);
                std::cout << "reconstruction: envelope mode (no --reference given)\n";
            }
            gpc::save_wav({samples, result.payload.audio.sample_rate}, args.out);
            std::cout << "recovered " << samples.size() << " samples -> " << args.out << "\n";
            break;
        }
        case gpc::Modality::video: {
            if (args.out.empty()) throw gpc::InvalidArgument("video decode needs --out DIR");
            gpc::FrameStream stream;
            stream.frames = gpc::video_decode(result.payload);
            gpc::save_frames(stream, args.out);
            std::cout << "recovered " << stream.frames.size() << " frame(s) -> " << args.out
                      << "\n";
            break;
        }
    }
    if (result.tamper_suspected) {
        std::cerr << "integrity: page differs from clean embedding (see warnings)\n";
        return kExitIntegrity;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- inspect

struct InspectArgs {
    std::vector<std::string> pages;
    std::string manifest;
    std::string atlas_dir = default_atlas_dir();
    std::string out_dir;
    std::uint64_t seed = 42;
    bool seed_given = false;
};

int run_inspect(const InspectArgs& args) {
    gpc::GlyphAtlas atlas = load_atlas_checked(args.atlas_dir);
    gpc::Manifest manifest = gpc::read_manifest(args.manifest);
    if (args.seed_given && args.seed != manifest.base_seed)
        throw gpc::InvalidArgument("--seed " + std::to_string(args.seed) +
                                   " does not match manifest base_seed " +
                                   std::to_string(manifest.base_seed));
    std::vector<gpc::EncodedPage> pages = load_pages(args.pages, manifest);

    fs::create_directories(args.out_dir);
    gpc::EncodedPage canonical = gpc::canonical_page(manifest, atlas);

    std::ofstream counts(fs::path(args.out_dir) / "counts.csv",
                         std::ios::binary | std::ios::trunc);
    counts << "page,glyph_index,char,is_carrier,count\n";
    std::ofstream capacity(fs::path(args.out_dir) / "capacity.csv",
                           std::ios::binary | std::ios::trunc);
    capacity << "glyph_index,char,eligible_count,is_carrier\n";

    auto char_label = [](char c) { return c == ' ' ? std::string("space") : std::string(1, c); };

    std::vector<gpc::GlyphTile> cover_tiles = gpc::render_cover(atlas, manifest.cover_text);
    for (std::size_t i = 0; i < cover_tiles.size(); ++i) {
        const auto& row = cover_tiles[i];
        capacity << i << "," << char_label(row.ch) << "," << row.eligible.size() << ","
                 << (row.is_carrier() ? 1 : 0) << "\n";
    }

    for (std::size_t p = 0; p < pages.size(); ++p) {
        gpc::DiffHeatmap hm = gpc::diff_heatmap(
            canonical.bitmap, pages[p].bitmap, atlas.tile_width, atlas.tile_height,
            manifest.glyphs_per_row, static_cast<int>(manifest.cover_text.size()));
        fs::path hm_path = fs::path(args.out_dir) /
                           (pages.size() > 1 ? "heatmap_" + std::to_string(p) + ".png"
                                             : std::string("heatmap.png"));
        gpc::png::write_gray(hm_path, hm.heatmap);
        for (std::size_t i = 0; i < hm.per_glyph_counts.size(); ++i) {
            bool carrier = cover_tiles[i].is_carrier();
            counts << p << "," << i << "," << char_label(manifest.cover_text[i]) << ","
                   << (carrier ? 1 : 0) << "," << hm.per_glyph_counts[i] << "\n";
        }
    }
    std::cout << "inspection artifacts -> " << args.out_dir << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
    std::string modality;
    std::string original;
    std::string recovered;
    std::string out;
    std::string summary;
};

int run_metrics(const MetricsArgs& args) {
    gpc::MetricsReport report;
    switch (gpc::modality_from_string(args.modality)) {
        case gpc::Modality::text:
            report = gpc::evaluate_text(text_or_file(args.original), text_or_file(args.recovered));
            break;
        case gpc::Modality::image:
            report = gpc::evaluate_image(gpc::load_image(args.original),
                                         gpc::load_image(args.recovered));
            break;
        case gpc::Modality::audio:
            report = gpc::evaluate_audio(gpc::load_wav(args.original).samples,
                                         gpc::load_wav(args.recovered).samples);
            break;
        case gpc::Modality::video:
            report = gpc::evaluate_video(gpc::load_frames(args.original).frames,
                                         gpc::load_frames(args.recovered).frames);
            break;
    }
    print_report(report, std::cout);
    if (!args.out.empty()) write_metrics_csv(args.out, report);
    if (!args.summary.empty()) write_summary(args.summary, report);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"glyph perturbation cardinality encoder/decoder"};
    app.require_subcommand(1);

    AtlasArgs atlas_args;
    auto* atlas_cmd = app.add_subcommand("atlas", "build and save a glyph atlas");
    atlas_cmd->add_option("--font", atlas_args.font, "TrueType font file");
    atlas_cmd->add_option("--size", atlas_args.size, "nominal size in points (default tile*36/64)");
    atlas_cmd->add_option("--tile", atlas_args.tile, "square tile side in pixels");
    atlas_cmd->add_option("--out", atlas_args.out, "output atlas directory")->required();
    atlas_cmd->add_option("--charset", atlas_args.charset, "characters to include (A-Z, space)");
    atlas_cmd->add_option("--pmax", atlas_args.pmax, "required eligible-pixel floor per glyph");
    std::uint64_t atlas_seed = 42;
    atlas_cmd->add_option("--seed", atlas_seed, "accepted for interface symmetry (unused)");

    EncodeArgs encode_args;
    auto* encode_cmd = app.add_subcommand("encode", "embed a payload into cover text pages");
    encode_cmd->add_option("--modality", encode_args.modality, "text|image|audio|video")
        ->required();
    auto* cover_text_opt =
        encode_cmd->add_option("--cover-text", encode_args.cover_text, "cover text literal");
    encode_cmd->add_option("--cover", encode_args.cover_file, "cover text file")
        ->excludes(cover_text_opt);
    encode_cmd->add_option("--secret", encode_args.secret,
                           "secret: text literal/file, or PNG/WAV/frame-dir path")
        ->required();
    encode_cmd->add_option("--atlas", encode_args.atlas_dir, "atlas directory (env GPC_ATLAS_DIR)");
    encode_cmd->add_option("--out", encode_args.out, "output page PNG")->required();
    encode_cmd->add_option("--manifest", encode_args.manifest, "output manifest path")->required();
    encode_cmd->add_option("--seed", encode_args.seed, "base seed (default 42)");
    encode_cmd->add_option("--pmax", encode_args.pmax, "maximum payload value per glyph");
    encode_cmd->add_option("--delta", encode_args.delta, "perturbation increment in gray levels");
    encode_cmd->add_flag("--repeat-cover", encode_args.repeat_cover,
                         "repeat cover text across pages for long payloads");
    encode_cmd->add_flag("--parallel", encode_args.parallel, "embed glyphs across threads");
    encode_cmd->add_option("--glyphs-per-row", encode_args.glyphs_per_row,
                           "page width in glyphs (default: cover length)");
    encode_cmd->add_option("--frame-step", encode_args.frame_step,
                           "video: take every k-th frame")
        ->check(CLI::PositiveNumber);
    encode_cmd->add_option("--canvas", encode_args.canvas,
                           "HxW canonical resolution (video default 120x120)");
    encode_cmd->add_option("--frame-len", encode_args.frame_len, "audio frame length");
    encode_cmd->add_option("--hop-len", encode_args.hop_len, "audio hop length");

    DecodeArgs decode_args;
    auto* decode_cmd = app.add_subcommand("decode", "recover a payload from encoded pages");
    decode_cmd->add_option("--page", decode_args.pages, "encoded page PNG (repeat for multi-page)")
        ->required();
    decode_cmd->add_option("--manifest", decode_args.manifest, "manifest path")->required();
    decode_cmd->add_option("--atlas", decode_args.atlas_dir, "atlas directory (env GPC_ATLAS_DIR)");
    decode_cmd->add_option("--out", decode_args.out, "output path (PNG/WAV/dir per modality)");
    decode_cmd->add_option("--reference", decode_args.reference,
                           "original WAV for reference-frame audio reconstruction");
    decode_cmd->add_option("--cover-check", decode_args.cover_check,
                           "expected cover text (literal or file); mismatch fails the decode");
    auto* decode_seed =
        decode_cmd->add_option("--seed", decode_args.seed, "must match the manifest base_seed");

    InspectArgs inspect_args;
    auto* inspect_cmd =
        app.add_subcommand("inspect", "emit diff heatmap and per-glyph count/capacity CSVs");
    inspect_cmd->add_option("--page", inspect_args.pages, "encoded page PNG")->required();
    inspect_cmd->add_option("--manifest", inspect_args.manifest, "manifest path")->required();
    inspect_cmd->add_option("--atlas", inspect_args.atlas_dir,
                            "atlas directory (env GPC_ATLAS_DIR)");
    inspect_cmd->add_option("--out-dir", inspect_args.out_dir, "output directory")->required();
    auto* inspect_seed =
        inspect_cmd->add_option("--seed", inspect_args.seed, "must match the manifest base_seed");

    MetricsArgs metrics_args;
    auto* metrics_cmd = app.add_subcommand("metrics", "compare original vs recovered media");
    metrics_cmd->add_option("--modality", metrics_args.modality, "text|image|audio|video")
        ->required();
    metrics_cmd->add_option("--original", metrics_args.original, "original media")->required();
    metrics_cmd->add_option("--recovered", metrics_args.recovered, "recovered media")->required();
    metrics_cmd->add_option("--out", metrics_args.out, "metrics CSV output path");
    metrics_cmd->add_option("--summary", metrics_args.summary, "plain-text summary output path");
    std::uint64_t metrics_seed = 42;
    metrics_cmd->add_option("--seed", metrics_seed, "accepted for interface symmetry (unused)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    decode_args.seed_given = decode_seed->count() > 0;
    inspect_args.seed_given = inspect_seed->count() > 0;

    try {
        if (app.got_subcommand(atlas_cmd)) return run_atlas(atlas_args);
        if (app.got_subcommand(encode_cmd)) return run_encode(encode_args);
        if (app.got_subcommand(decode_cmd)) return run_decode(decode_args);
        if (app.got_subcommand(inspect_cmd)) return run_inspect(inspect_args);
        if (app.got_subcommand(metrics_cmd)) return run_metrics(metrics_args);
    } catch (const gpc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitUsage;
}
