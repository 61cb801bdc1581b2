// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gpc/codec.hpp"
#include "test_util.hpp"

TEST_CASE("text codec maps A..Z to 1..26") {
    CHECK(gpc::text_encode("A").values == std::vector<int>{1});
    CHECK(gpc::text_encode("Z").values == std::vector<int>{26});
    CHECK(gpc::text_encode("THERE").values == std::vector<int>{20, 8, 5, 18, 5});
    CHECK(gpc::text_encode("there").values == std::vector<int>{20, 8, 5, 18, 5});
}

TEST_CASE("text decode inverts encode for random strings") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 50; ++trial) {
        std::string s;
        int len = 1 + int(rng() % 40);
        for (int i = 0; i < len; ++i) s.push_back(static_cast<char>('A' + rng() % 26));
        CHECK(gpc::text_decode(gpc::text_encode(s)) == s);
    }
}

TEST_CASE("text codec error paths") {
    CHECK_THROWS_AS(gpc::text_encode(""), gpc::InvalidArgument);
    CHECK_THROWS_AS(gpc::text_encode("TH3RE"), gpc::UnsupportedSecretChar);
    try {
        gpc::text_encode("TH3RE");
    } catch (const gpc::UnsupportedSecretChar& e) {
        CHECK(e.position == 2);
    }

    gpc::PayloadSequence zero;
    zero.modality = gpc::Modality::text;
    zero.values = {0};
    CHECK_THROWS_AS(gpc::text_decode(zero), gpc::ValueOutOfRange);
    zero.values = {27};
    CHECK_THROWS_AS(gpc::text_decode(zero), gpc::ValueOutOfRange);
    zero.modality = gpc::Modality::image;
    zero.values = {1};
    CHECK_THROWS_AS(gpc::text_decode(zero), gpc::InvalidArgument);
}

TEST_CASE("intensity quantizer endpoints and midpoint") {
    CHECK(gpc::quantize_intensity(0, 26) == 0);
    CHECK(gpc::quantize_intensity(255, 26) == 26);
    CHECK(gpc::quantize_intensity(128, 26) == 13);  // 128*26/255 = 13.05...
    CHECK(gpc::dequantize_intensity(0, 26) == 0);
    CHECK(gpc::dequantize_intensity(26, 26) == 255);
    CHECK(gpc::dequantize_intensity(13, 26) == 128);  // 127.5 rounds away from zero
}

TEST_CASE("quantizer is monotone and bounded over all intensities") {
    int prev = 0;
    for (int x = 0; x <= 255; ++x) {
        int q = gpc::quantize_intensity(x, 26);
        CHECK(q >= prev);
        CHECK(q >= 0);
        CHECK(q <= 26);
        prev = q;
    }
}

TEST_CASE("round-trip error is exactly bounded by 5 at p_max 26") {
    // brute force over every 8-bit intensity
    int max_err = 0;
    for (int x = 0; x <= 255; ++x) {
        int back = gpc::dequantize_intensity(gpc::quantize_intensity(x, 26), 26);
        max_err = std::max(max_err, std::abs(x - back));
    }
    CHECK(max_err == 5);
    // and the closed-form bound agrees: ceil(255 / (2*26)) = 5
    CHECK((255 + 2 * 26 - 1) / (2 * 26) == 5);
}

TEST_CASE("quantizer endpoints hold for other p_max values") {
    for (int p_max : {1, 2, 7, 26, 100, 255}) {
        CHECK(gpc::quantize_intensity(0, p_max) == 0);
        CHECK(gpc::quantize_intensity(255, p_max) == p_max);
        int bound = (255 + 2 * p_max - 1) / (2 * p_max);
        for (int x = 0; x <= 255; ++x) {
            int back = gpc::dequantize_intensity(gpc::quantize_intensity(x, p_max), p_max);
            CHECK(std::abs(x - back) <= bound);
        }
    }
}

TEST_CASE("image encode flattens planes R, then G, then B") {
    gpc::RgbImage white(1, 1);
    white.pixels = {255, 255, 255};
    CHECK(gpc::image_encode(white).values == std::vector<int>{26, 26, 26});

    gpc::RgbImage img(2, 1);  // 1 row, 2 cols
    img.at(0, 0, 0) = 0;
    img.at(0, 1, 0) = 255;  // R = [0, 255]
    // G and B stay 0
    CHECK(gpc::image_encode(img).values == std::vector<int>{0, 26, 0, 0, 0, 0});
}

TEST_CASE("image round trip stays within the quantizer bound") {
    auto img = testutil::random_rgb(23, 17, 77);
    auto seq = gpc::image_encode(img);
    auto back = gpc::image_decode(seq);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        CHECK(std::abs(int(img.pixels[i]) - int(back.pixels[i])) <= 5);
}

TEST_CASE("image decode validates shape") {
    auto seq = gpc::image_encode(testutil::random_rgb(4, 4, 1));
    seq.values.pop_back();
    CHECK_THROWS_AS(gpc::image_decode(seq), gpc::ShapeMismatch);
}

TEST_CASE("audio encode: silence and constants are degenerate") {
    std::vector<double> zeros(2048, 0.0);
    auto seq = gpc::audio_encode(zeros);
    CHECK(seq.audio.degenerate);
    CHECK(seq.values == std::vector<int>(seq.values.size(), 0));
    CHECK(seq.values.size() == 3);  // (2048-1024)/512 + 1

    std::vector<double> constant(2048, 0.25);
    auto cseq = gpc::audio_encode(constant);
    CHECK(cseq.audio.degenerate);
    CHECK(cseq.audio.s_min == Catch::Approx(0.25).epsilon(1e-12));
    for (int v : cseq.values) CHECK(v == 0);
}

TEST_CASE("audio encode: min-max endpoints map to 0 and p_max") {
    // frame 0 = [0.1 x1024] -> rms 0.1; frame 1 = [0.1 x512, 0.7 x512] -> rms 0.5
    std::vector<double> samples(1536, 0.1);
    for (std::size_t i = 1024; i < 1536; ++i) samples[i] = 0.7;
    auto seq = gpc::audio_encode(samples);
    REQUIRE(seq.values.size() == 2);
    CHECK(seq.audio.s_min == Catch::Approx(0.1).margin(1e-12));
    CHECK(seq.audio.s_max == Catch::Approx(0.5).margin(1e-12));
    CHECK(seq.values[0] == 0);
    CHECK(seq.values[1] == 26);
}

TEST_CASE("audio encode rejects signals shorter than one frame") {
    std::vector<double> tiny(500, 0.5);
    CHECK_THROWS_AS(gpc::audio_encode(tiny), gpc::TooShort);
}

TEST_CASE("audio values always land in [0, p_max]") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> samples(16000);
    for (auto& s : samples) s = uni(rng);
    auto seq = gpc::audio_encode(samples);
    for (int v : seq.values) {
        CHECK(v >= 0);
        CHECK(v <= 26);
    }
}

TEST_CASE("audio decode with reference frames reproduces RMS targets") {
    // slow AM tone: envelope varies little per frame, so the overlap-add
    // blend stays within one quantization step of the per-frame target
    const int sr = 16000;
    std::vector<double> samples(4 * sr);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double t = double(i) / sr;
        double env = 0.4 + 0.02 * std::sin(2.0 * M_PI * t / 4.0);
        samples[i] = env * std::sin(2.0 * M_PI * 220.0 * t);
    }
    auto seq = gpc::audio_encode(samples);
    REQUIRE_FALSE(seq.audio.degenerate);
    auto shat = gpc::audio_rms_targets(seq);
    auto recon = gpc::audio_decode(seq, &samples);
    REQUIRE(recon.size() == (seq.values.size() - 1) * 512 + 1024);

    double q = (seq.audio.s_max - seq.audio.s_min) / seq.p_max;
    for (std::size_t j = 0; j < seq.values.size(); ++j) {
        double rms = gpc::frame_rms(recon, j * 512, 1024);
        CHECK(std::abs(rms - shat[j]) <= q + 1e-9);
    }
}

TEST_CASE("audio decode of an exact payload reproduces the signal") {
    // constant signal: every scale factor is exactly 1, so reconstruction
    // against the reference frames must be the identity on the covered region
    std::vector<double> steady(3072, 0.5);
    auto seq = gpc::audio_encode(steady);
    REQUIRE(seq.audio.degenerate);
    auto recon = gpc::audio_decode(seq, &steady);
    REQUIRE(recon.size() == steady.size());
    for (std::size_t i = 0; i < recon.size(); ++i)
        CHECK(recon[i] == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("audio decode without reference uses a unit-RMS carrier") {
    gpc::PayloadSequence seq;
    seq.modality = gpc::Modality::audio;
    seq.p_max = 26;
    seq.audio = {1024, 512, 16000, 0.2, 0.4, false};
    seq.values = std::vector<int>(8, 13);  // S_hat = 0.3 for every frame
    auto recon = gpc::audio_decode(seq);
    REQUIRE(recon.size() == 7 * 512 + 1024);
    for (std::size_t j = 1; j + 1 < seq.values.size(); ++j) {
        double rms = gpc::frame_rms(recon, j * 512, 1024);
        CHECK(rms == Catch::Approx(0.3).margin(1e-3));
    }
}

TEST_CASE("audio decode of silence is silence") {
    gpc::PayloadSequence seq;
    seq.modality = gpc::Modality::audio;
    seq.p_max = 26;
    seq.audio = {1024, 512, 16000, 0.0, 0.0, true};
    seq.values = std::vector<int>(4, 0);
    for (double s : gpc::audio_decode(seq)) CHECK(s == 0.0);
}

TEST_CASE("audio decode validates the reference frame count") {
    gpc::PayloadSequence seq;
    seq.modality = gpc::Modality::audio;
    seq.p_max = 26;
    seq.audio = {1024, 512, 16000, 0.1, 0.5, false};
    seq.values = {3, 7};
    std::vector<double> wrong(5000, 0.1);  // yields 8 frames, not 2
    CHECK_THROWS_AS(gpc::audio_decode(seq, &wrong), gpc::FrameCountMismatch);
}

TEST_CASE("video encode concatenates per-frame image encodings") {
    gpc::RgbImage black(1, 1);
    auto seq1 = gpc::video_encode({black});
    CHECK(seq1.values == std::vector<int>{0, 0, 0});

    auto f0 = testutil::random_rgb(3, 2, 5);
    auto f1 = testutil::random_rgb(3, 2, 6);
    auto vid = gpc::video_encode({f0, f1});
    auto i0 = gpc::image_encode(f0);
    auto i1 = gpc::image_encode(f1);
    std::vector<int> expect = i0.values;
    expect.insert(expect.end(), i1.values.begin(), i1.values.end());
    CHECK(vid.values == expect);
}

TEST_CASE("video decode has no temporal coupling") {
    std::vector<gpc::RgbImage> frames;
    for (int t = 0; t < 4; ++t) frames.push_back(testutil::random_rgb(5, 4, 100 + t));
    auto seq = gpc::video_encode(frames);
    auto back = gpc::video_decode(seq);
    REQUIRE(back.size() == 4);

    // frame 2 decoded alone equals frame 2 of the full decode
    gpc::PayloadSequence single;
    single.modality = gpc::Modality::video;
    single.p_max = seq.p_max;
    single.video = {1, seq.video.height, seq.video.width};
    std::size_t per = std::size_t(seq.video.height) * seq.video.width * 3;
    single.values.assign(seq.values.begin() + 2 * per, seq.values.begin() + 3 * per);
    auto alone = gpc::video_decode(single);
    CHECK(alone[0].pixels == back[2].pixels);

    // per-pixel error bound holds across all frames
    for (int t = 0; t < 4; ++t)
        for (std::size_t i = 0; i < frames[t].pixels.size(); ++i)
            CHECK(std::abs(int(frames[t].pixels[i]) - int(back[t].pixels[i])) <= 5);
}

TEST_CASE("video codec error paths") {
    CHECK_THROWS_AS(gpc::video_encode({}), gpc::EmptyVideo);
    auto a = testutil::random_rgb(2, 2, 1);
    auto b = testutil::random_rgb(3, 2, 2);
    CHECK_THROWS_AS(gpc::video_encode({a, b}), gpc::ShapeMismatch);

    auto seq = gpc::video_encode({a});
    seq.values.pop_back();
    CHECK_THROWS_AS(gpc::video_decode(seq), gpc::ShapeMismatch);
}
