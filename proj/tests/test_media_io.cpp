// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "gpc/media_io.hpp"
#include "test_util.hpp"

TEST_CASE("image save/load is lossless") {
    auto dir = testutil::fresh_dir("img_rt");
    auto img = testutil::random_rgb(21, 9, 3);
    gpc::save_image(img, dir / "a.png");
    auto back = gpc::load_image(dir / "a.png");
    CHECK(back.pixels == img.pixels);
}

TEST_CASE("grayscale input replicates to three channels") {
    auto dir = testutil::fresh_dir("img_gray");
    auto gray = testutil::random_gray(7, 5, 11);
    gpc::png::write_gray(dir / "g.png", gray);
    auto img = gpc::load_image(dir / "g.png");
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 7; ++c) {
            CHECK(img.at(r, c, 0) == gray.at(r, c));
            CHECK(img.at(r, c, 1) == gray.at(r, c));
            CHECK(img.at(r, c, 2) == gray.at(r, c));
        }
}

TEST_CASE("resize identity and exact shrink averages") {
    auto img = testutil::random_rgb(6, 4, 9);
    auto same = gpc::resize_image(img, 4, 6);
    CHECK(same.pixels == img.pixels);

    gpc::RgbImage constant(2, 2);
    for (auto& p : constant.pixels) p = 77;
    auto one = gpc::resize_image(constant, 1, 1);
    CHECK(one.at(0, 0, 0) == 77);

    // 2x2 block {0,0,255,255} averages to 127.5, rounds away from zero
    gpc::RgbImage half(2, 2);
    half.at(1, 0, 0) = 255;
    half.at(1, 1, 0) = 255;
    half.at(0, 0, 0) = 0;
    half.at(0, 1, 0) = 0;
    auto avg = gpc::resize_image(half, 1, 1);
    CHECK(avg.at(0, 0, 0) == 128);
}

TEST_CASE("resize growth is deterministic and in range") {
    auto img = testutil::random_rgb(5, 5, 21);
    auto big1 = gpc::resize_image(img, 13, 17);
    auto big2 = gpc::resize_image(img, 13, 17);
    CHECK(big1.pixels == big2.pixels);
    CHECK(big1.width == 17);
    CHECK(big1.height == 13);
    CHECK_THROWS_AS(gpc::resize_image(img, 0, 5), gpc::InvalidArgument);
}

TEST_CASE("wav silence round trip") {
    auto dir = testutil::fresh_dir("wav_silence");
    gpc::AudioClip clip{std::vector<double>(1000, 0.0), 16000};
    gpc::save_wav(clip, dir / "s.wav");
    auto back = gpc::load_wav(dir / "s.wav");
    CHECK(back.sample_rate == 16000);
    REQUIRE(back.samples.size() == 1000);
    for (double s : back.samples) CHECK(s == 0.0);
}

TEST_CASE("wav full-scale sample normalizes to 32767/32768") {
    auto dir = testutil::fresh_dir("wav_full");
    gpc::AudioClip clip{{1.0, -1.0, 0.5}, 16000};
    gpc::save_wav(clip, dir / "f.wav");  // 1.0 clips to 32767
    auto back = gpc::load_wav(dir / "f.wav");
    CHECK(back.samples[0] == Catch::Approx(32767.0 / 32768.0).margin(1e-15));
    CHECK(back.samples[0] == 0.999969482421875);
    CHECK(back.samples[1] == -1.0);
    CHECK(back.samples[2] == Catch::Approx(0.5).margin(1e-4));
}

TEST_CASE("wav round trip is exact on the int16 grid") {
    auto dir = testutil::fresh_dir("wav_grid");
    std::vector<double> samples;
    for (int k = -32768; k <= 32767; k += 997) samples.push_back(k / 32768.0);
    gpc::save_wav({samples, 16000}, dir / "g.wav");
    auto back = gpc::load_wav(dir / "g.wav");
    REQUIRE(back.samples.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) CHECK(back.samples[i] == samples[i]);
}

TEST_CASE("stereo wav is averaged to mono with a warning") {
    auto dir = testutil::fresh_dir("wav_stereo");
    // hand-build a tiny stereo file: L = 8192, R = 16384 -> mean 12288
    std::vector<std::uint8_t> bytes;
    auto u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(std::uint8_t(v >> (8 * i)));
    };
    auto u16 = [&](std::uint16_t v) {
        bytes.push_back(std::uint8_t(v));
        bytes.push_back(std::uint8_t(v >> 8));
    };
    bytes.insert(bytes.end(), {'R', 'I', 'F', 'F'});
    u32(36 + 8);
    bytes.insert(bytes.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    u32(16);
    u16(1);
    u16(2);  // stereo
    u32(16000);
    u32(16000 * 4);
    u16(4);
    u16(16);
    bytes.insert(bytes.end(), {'d', 'a', 't', 'a'});
    u32(8);
    u16(8192);
    u16(16384);
    u16(8192);
    u16(16384);
    gpc::png::write_binary_file(dir / "st.wav", bytes);

    std::vector<std::string> warnings;
    auto clip = gpc::load_wav(dir / "st.wav", &warnings);
    REQUIRE(clip.samples.size() == 2);
    CHECK(clip.samples[0] == Catch::Approx(12288.0 / 32768.0).margin(1e-12));
    REQUIRE(warnings.size() == 1);
}

TEST_CASE("wav rejects unsupported encodings") {
    auto dir = testutil::fresh_dir("wav_bad");
    // 24-bit file: patch the bits-per-sample field of a valid file
    gpc::save_wav({std::vector<double>(4, 0.0), 16000}, dir / "b.wav");
    auto bytes = gpc::png::read_binary_file(dir / "b.wav");
    bytes[34] = 24;  // bits per sample
    gpc::png::write_binary_file(dir / "b.wav", bytes);
    CHECK_THROWS_AS(gpc::load_wav(dir / "b.wav"), gpc::UnsupportedFormat);

    std::vector<std::uint8_t> junk = {'n', 'o', 't', 'a', 'w', 'a', 'v', 'e'};
    gpc::png::write_binary_file(dir / "j.wav", junk);
    CHECK_THROWS_AS(gpc::load_wav(dir / "j.wav"), gpc::UnsupportedFormat);
}

TEST_CASE("frame directory round trip") {
    auto dir = testutil::fresh_dir("frames_rt");
    gpc::FrameStream stream;
    for (int t = 0; t < 3; ++t) stream.frames.push_back(testutil::random_rgb(6, 4, 50 + t));
    gpc::save_frames(stream, dir);
    auto back = gpc::load_frames(dir);
    REQUIRE(back.frames.size() == 3);
    for (int t = 0; t < 3; ++t) CHECK(back.frames[t].pixels == stream.frames[t].pixels);

    // writing the same stream again gives byte-identical files
    auto dir2 = testutil::fresh_dir("frames_rt2");
    gpc::save_frames(stream, dir2);
    for (int t = 0; t < 3; ++t)
        CHECK(gpc::png::read_binary_file(dir / gpc::frame_filename(t)) ==
              gpc::png::read_binary_file(dir2 / gpc::frame_filename(t)));
}

TEST_CASE("frame gaps are reported") {
    auto dir = testutil::fresh_dir("frames_gap");
    auto img = testutil::random_rgb(4, 4, 1);
    gpc::save_image(img, dir / "frame_000000.png");
    gpc::save_image(img, dir / "frame_000002.png");  // gap at 1
    CHECK_THROWS_AS(gpc::load_frames(dir), gpc::MissingFrame);
    try {
        gpc::load_frames(dir);
    } catch (const gpc::MissingFrame& e) {
        CHECK(e.index == 1);
    }
}

TEST_CASE("empty frame directory is an error") {
    auto dir = testutil::fresh_dir("frames_empty");
    CHECK_THROWS_AS(gpc::load_frames(dir), gpc::MissingFrame);
}

TEST_CASE("mixed frame dimensions are rejected") {
    auto dir = testutil::fresh_dir("frames_mixed");
    gpc::save_image(testutil::random_rgb(4, 4, 1), dir / "frame_000000.png");
    gpc::save_image(testutil::random_rgb(5, 4, 2), dir / "frame_000001.png");
    CHECK_THROWS_AS(gpc::load_frames(dir), gpc::MixedDimensions);
}
