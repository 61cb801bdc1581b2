// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "gpc/channel.hpp"
#include "test_util.hpp"

using testutil::default_atlas;

TEST_CASE("splitmix64 stream matches reference values") {
    // reference sequence from the published SplitMix64 algorithm
    gpc::SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ull);
    CHECK(rng.next() == 3203168211198807973ull);
    CHECK(rng.next() == 9817491932198370423ull);
    CHECK(rng.next() == 4593380528125082431ull);

    gpc::SplitMix64 rng42(42);
    CHECK(rng42.next() == 13679457532755275413ull);
    CHECK(rng42.next() == 2949826092126892291ull);

    CHECK(gpc::mix64(42) == 12058926934050108962ull);
    CHECK(gpc::glyph_seed(42, 0) == 12058926934050108962ull);
    CHECK(gpc::glyph_seed(42, 1) == 13679457532755275413ull);
}

TEST_CASE("select_pixels basics") {
    const auto& tile = default_atlas().tile_for('E');
    gpc::ChannelConfig cfg;

    CHECK(gpc::select_pixels(tile, 0, 0, cfg).empty());

    auto a = gpc::select_pixels(tile, 3, 17, cfg);
    auto b = gpc::select_pixels(tile, 3, 17, cfg);
    REQUIRE(a.size() == 17);
    CHECK(a == b);  // pure function of inputs

    // distinct, and drawn from the eligible set
    std::set<std::pair<int, int>> eligible(tile.eligible.begin(), tile.eligible.end());
    std::set<std::pair<int, int>> chosen(a.begin(), a.end());
    CHECK(chosen.size() == a.size());
    for (auto& p : a) CHECK(eligible.count(p) == 1);

    // different glyph index -> different seed -> (almost surely) different pick
    auto c = gpc::select_pixels(tile, 4, 17, cfg);
    CHECK(a != c);

    // exhaustion: v = |eligible| returns the whole set in some order
    auto all = gpc::select_pixels(tile, 0, static_cast<int>(tile.eligible.size()), cfg);
    std::set<std::pair<int, int>> all_set(all.begin(), all.end());
    CHECK(all_set == eligible);

    CHECK_THROWS_AS(
        gpc::select_pixels(tile, 0, static_cast<int>(tile.eligible.size()) + 1, cfg),
        gpc::CapacityExceeded);
}

TEST_CASE("embed_glyph perturbs exactly v interior pixels by +delta") {
    const auto& tile = default_atlas().tile_for('E');
    gpc::ChannelConfig cfg;

    auto [bitmap5, rec5] = gpc::embed_glyph(tile, 0, 5, cfg);
    int diffs = 0;
    for (std::size_t i = 0; i < bitmap5.size(); ++i)
        if (bitmap5[i] != tile.bitmap[i]) ++diffs;
    CHECK(diffs == 5);
    CHECK(rec5.count == 5);
    CHECK(rec5.pixels.size() == 5);

    auto [bitmap0, rec0] = gpc::embed_glyph(tile, 0, 0, cfg);
    CHECK(bitmap0 == tile.bitmap);
    CHECK(rec0.pixels.empty());

    // exhaustive diff for v = 26: every change is 0 -> delta, contours untouched
    auto [bitmap26, rec26] = gpc::embed_glyph(tile, 7, 26, cfg);
    int changed = 0;
    for (int r = 0; r < tile.height; ++r)
        for (int c = 0; c < tile.width; ++c) {
            std::uint8_t before = tile.at(r, c);
            std::uint8_t after = bitmap26[static_cast<std::size_t>(r) * tile.width + c];
            if (before != after) {
                ++changed;
                CHECK(before == 0);
                CHECK(after == cfg.delta);
            }
            if (before > 0) CHECK(after == before);
        }
    CHECK(changed == 26);
}

TEST_CASE("embed honors a configurable delta") {
    const auto& tile = default_atlas().tile_for('B');
    gpc::ChannelConfig cfg;
    cfg.delta = 7;
    auto [bitmap, rec] = gpc::embed_glyph(tile, 2, 9, cfg);
    for (auto [r, c] : rec.pixels)
        CHECK(bitmap[static_cast<std::size_t>(r) * tile.width + c] == 7);
    auto res = gpc::extract_glyph(tile, bitmap, cfg);
    CHECK(res.count == 9);
    CHECK_FALSE(res.tamper_suspected);

    gpc::ChannelConfig bad;
    bad.delta = 0;
    CHECK_THROWS_AS(gpc::embed_glyph(tile, 2, 9, bad), gpc::InvalidArgument);
    bad.delta = 255;
    CHECK_THROWS_AS(gpc::embed_glyph(tile, 2, 9, bad), gpc::InvalidArgument);
}

TEST_CASE("extract(embed(v)) = v for every v in [0, 26]") {
    const auto& tile = default_atlas().tile_for('T');
    gpc::ChannelConfig cfg;
    for (int v = 0; v <= 26; ++v) {
        auto [bitmap, rec] = gpc::embed_glyph(tile, 11, v, cfg);
        auto res = gpc::extract_glyph(tile, bitmap, cfg);
        CHECK(res.count == v);
        CHECK_FALSE(res.tamper_suspected);
    }
}

TEST_CASE("extract of the canonical bitmap is zero") {
    const auto& tile = default_atlas().tile_for('M');
    auto res = gpc::extract_glyph(tile, tile.bitmap, {});
    CHECK(res.count == 0);
    CHECK_FALSE(res.tamper_suspected);
}

TEST_CASE("extract flags darkened pixels without failing") {
    const auto& tile = default_atlas().tile_for('A');
    gpc::ChannelConfig cfg;
    auto [bitmap, rec] = gpc::embed_glyph(tile, 0, 4, cfg);
    // darken one background pixel
    for (std::size_t i = 0; i < bitmap.size(); ++i)
        if (bitmap[i] == 255) {
            bitmap[i] = 200;
            break;
        }
    auto res = gpc::extract_glyph(tile, bitmap, cfg);
    CHECK(res.count == 4);  // count is still the brightened pixels
    CHECK(res.tamper_suspected);
}

TEST_CASE("extract counts and flags diffs at non-eligible pixels") {
    const auto& tile = default_atlas().tile_for('A');
    auto bitmap = tile.bitmap;
    // brighten one background pixel (canonical 255 can't go higher; use a contour pixel)
    bool raised = false;
    for (std::size_t i = 0; i < bitmap.size() && !raised; ++i)
        if (bitmap[i] > 0 && bitmap[i] < 255) {
            bitmap[i] = static_cast<std::uint8_t>(bitmap[i] + 1);
            raised = true;
        }
    REQUIRE(raised);
    auto res = gpc::extract_glyph(tile, bitmap, {});
    CHECK(res.count == 1);  // any positive diff counts
    CHECK(res.tamper_suspected);
}

TEST_CASE("extract rejects mismatched dimensions") {
    const auto& tile = default_atlas().tile_for('A');
    std::vector<std::uint8_t> wrong(10, 0);
    CHECK_THROWS_AS(gpc::extract_glyph(tile, wrong, {}), gpc::DimensionMismatch);
}

TEST_CASE("capacity report matches an independent recount") {
    const auto& atlas = default_atlas();
    auto tiles = gpc::render_cover(atlas, "WHERE");
    auto rows = gpc::capacity_report(tiles);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].eligible_count >= 26);
        CHECK(rows[i].is_carrier);
        int zeros = 0;
        for (auto v : tiles[i].bitmap)
            if (v == 0) ++zeros;
        CHECK(rows[i].eligible_count == static_cast<std::size_t>(zeros));
    }

    CHECK(gpc::capacity_report({}).empty());

    auto spaced = gpc::capacity_report(gpc::render_cover(atlas, "A B"));
    CHECK(spaced[1].eligible_count == 0);
    CHECK_FALSE(spaced[1].is_carrier);
}
