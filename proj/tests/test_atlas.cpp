// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "gpc/atlas.hpp"
#include "test_util.hpp"

using testutil::default_atlas;
using testutil::font_bytes;

TEST_CASE("default atlas satisfies the capacity floor") {
    const auto& atlas = default_atlas();
    REQUIRE(atlas.charset == gpc::kFullCharset);
    for (char c = 'A'; c <= 'Z'; ++c) {
        INFO("glyph " << c);
        CHECK(atlas.tile_for(c).eligible.size() >= 26);
    }
    CHECK(atlas.tile_for(' ').eligible.empty());
    CHECK_FALSE(atlas.tile_for(' ').is_carrier());
}

TEST_CASE("eligible set is exactly the zero pixels, row-major") {
    const auto& tile = default_atlas().tile_for('Q');
    // independent recount
    std::vector<std::pair<int, int>> expect;
    for (int r = 0; r < tile.height; ++r)
        for (int c = 0; c < tile.width; ++c)
            if (tile.at(r, c) == 0) expect.emplace_back(r, c);
    CHECK(tile.eligible == expect);
    for (auto [r, c] : tile.eligible) CHECK(tile.at(r, c) == 0);
}

TEST_CASE("large text-demo tiles expose hundreds of eligible pixels") {
    auto atlas = gpc::build_atlas(font_bytes(), 160.0, 192, "WHER");
    for (char c : std::string("WHER")) {
        INFO("glyph " << c);
        int zeros = 0;
        const auto& tile = atlas.tile_for(c);
        for (auto v : tile.bitmap)
            if (v == 0) ++zeros;
        CHECK(zeros == static_cast<int>(tile.eligible.size()));
        CHECK(zeros >= 100);
    }
}

TEST_CASE("atlas build is deterministic") {
    auto a = gpc::build_atlas(font_bytes(), 36.0, 64, "AB");
    auto b = gpc::build_atlas(font_bytes(), 36.0, 64, "AB");
    CHECK(a.atlas_id == b.atlas_id);
    CHECK(a.tile_for('A').bitmap == b.tile_for('A').bitmap);
}

TEST_CASE("tiny tiles fail with InsufficientCapacity") {
    CHECK_THROWS_AS(gpc::build_atlas(font_bytes(), 4.5, 8, "AB"), gpc::InsufficientCapacity);
    try {
        gpc::build_atlas(font_bytes(), 4.5, 8, "AB");
    } catch (const gpc::InsufficientCapacity& e) {
        CHECK(e.count < 26);
        CHECK(e.required == 26);
    }
}

TEST_CASE("charset validation") {
    CHECK_THROWS_AS(gpc::build_atlas(font_bytes(), 36.0, 64, "ABa"), gpc::UnsupportedChar);
    CHECK_THROWS_AS(gpc::build_atlas(font_bytes(), 36.0, 64, "A1"), gpc::UnsupportedChar);
    CHECK_THROWS_AS(gpc::build_atlas(font_bytes(), 36.0, 64, "AA"), gpc::InvalidArgument);
    CHECK_THROWS_AS(gpc::build_atlas(font_bytes(), 36.0, 64, ""), gpc::InvalidArgument);
}

TEST_CASE("space-only atlas has an empty eligible set") {
    auto atlas = gpc::build_atlas(font_bytes(), 36.0, 64, " ");
    CHECK(atlas.tile_for(' ').eligible.empty());
}

TEST_CASE("save/load round trip preserves the atlas exactly") {
    auto dir = testutil::fresh_dir("atlas_rt");
    const auto& atlas = default_atlas();
    gpc::save_atlas(atlas, dir);
    auto loaded = gpc::load_atlas(dir);
    CHECK(loaded.atlas_id == atlas.atlas_id);
    CHECK(loaded.charset == atlas.charset);
    CHECK(loaded.tile_width == atlas.tile_width);
    CHECK(loaded.font_descriptor == atlas.font_descriptor);
    for (char c : atlas.charset) {
        CHECK(loaded.tile_for(c).bitmap == atlas.tile_for(c).bitmap);
        CHECK(loaded.tile_for(c).eligible == atlas.tile_for(c).eligible);
    }
}

TEST_CASE("two saves produce byte-identical files") {
    auto dir1 = testutil::fresh_dir("atlas_s1");
    auto dir2 = testutil::fresh_dir("atlas_s2");
    gpc::save_atlas(default_atlas(), dir1);
    gpc::save_atlas(default_atlas(), dir2);
    CHECK(gpc::png::read_binary_file(dir1 / "atlas.png") ==
          gpc::png::read_binary_file(dir2 / "atlas.png"));
    CHECK(gpc::png::read_binary_file(dir1 / "atlas.txt") ==
          gpc::png::read_binary_file(dir2 / "atlas.txt"));
}

TEST_CASE("truncated atlas image raises AtlasCorrupt") {
    auto dir = testutil::fresh_dir("atlas_trunc");
    gpc::save_atlas(default_atlas(), dir);
    auto bytes = gpc::png::read_binary_file(dir / "atlas.png");
    bytes.resize(bytes.size() / 2);
    gpc::png::write_binary_file(dir / "atlas.png", bytes);
    CHECK_THROWS_AS(gpc::load_atlas(dir), gpc::AtlasCorrupt);
}

TEST_CASE("digest mismatch raises AtlasCorrupt") {
    auto dir = testutil::fresh_dir("atlas_digest");
    gpc::save_atlas(default_atlas(), dir);
    // rewrite the sidecar with a wrong id
    auto sidecar = gpc::png::read_binary_file(dir / "atlas.txt");
    std::string text(sidecar.begin(), sidecar.end());
    auto pos = text.find("atlas_id: ");
    text[pos + 10] = text[pos + 10] == 'f' ? '0' : 'f';
    std::ofstream out(dir / "atlas.txt", std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    CHECK_THROWS_AS(gpc::load_atlas(dir), gpc::AtlasCorrupt);
}

TEST_CASE("missing atlas raises IoError") {
    CHECK_THROWS_AS(gpc::load_atlas("/nonexistent/gpc_atlas"), gpc::IoError);
}

TEST_CASE("render_cover basics") {
    const auto& atlas = default_atlas();

    auto there = gpc::render_cover(atlas, "THERE");
    REQUIRE(there.size() == 5);
    for (const auto& t : there) CHECK(t.is_carrier());
    CHECK(there[0].ch == 'T');

    CHECK(gpc::render_cover(atlas, "").empty());

    auto spaced = gpc::render_cover(atlas, "A B");
    REQUIRE(spaced.size() == 3);
    CHECK(spaced[0].is_carrier());
    CHECK_FALSE(spaced[1].is_carrier());
    CHECK(spaced[2].is_carrier());

    auto lower = gpc::render_cover(atlas, "there");
    CHECK(lower[0].bitmap == there[0].bitmap);

    CHECK_THROWS_AS(gpc::render_cover(atlas, "TH3RE"), gpc::UnsupportedChar);
    try {
        gpc::render_cover(atlas, "TH3RE");
    } catch (const gpc::UnsupportedChar& e) {
        CHECK(e.position == 2);
    }
}

TEST_CASE("render_cover is deterministic") {
    const auto& atlas = default_atlas();
    auto a = gpc::render_cover(atlas, "WHERE");
    auto b = gpc::render_cover(atlas, "WHERE");
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].bitmap == b[i].bitmap);
}
