// SPDX-License-Identifier: Apache-2.0
#pragma once

// Fidelity metrics: CER/BER for text, MSE/MAE/RMSE/PSNR/SSIM for images,
// time-domain error and SNR for audio, per-frame series for video, plus the
// canonical-vs-encoded page diagnostics (difference heatmap, per-glyph
// counts).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gpc/codec.hpp"
#include "gpc/errors.hpp"
#include "gpc/image.hpp"

namespace gpc {

struct MetricsReport {
    Modality modality = Modality::text;
    std::map<std::string, double> scalars;
    std::vector<std::pair<std::string, std::vector<double>>> series;
};

// ----------------------------------------------------------------- text

/// Levenshtein distance / reference length.
inline double cer(const std::string& reference, const std::string& hypothesis) {
    if (reference.empty()) throw EmptyReference("CER needs a non-empty reference");
    std::size_t n = reference.size(), m = hypothesis.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return static_cast<double>(prev[m]) / static_cast<double>(n);
}

/// Characters map to 5-bit codes of (ord - 64); BER = wrong bits / total
/// bits. Positions missing from the shorter string count all 5 bits wrong.
inline double ber(const std::string& reference, const std::string& hypothesis) {
    std::size_t n = std::max(reference.size(), hypothesis.size());
    if (n == 0) return 0.0;
    auto code = [](char c) -> unsigned {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        return static_cast<unsigned>(c - 64) & 0x1F;
    };
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= reference.size() || i >= hypothesis.size()) {
            wrong += 5;
        } else {
            unsigned x = code(reference[i]) ^ code(hypothesis[i]);
            wrong += static_cast<std::size_t>(std::popcount(x));
        }
    }
    return static_cast<double>(wrong) / static_cast<double>(5 * n);
}

// ---------------------------------------------------------------- images

inline double psnr_from_mse(double mse) {
    if (mse <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace detail {

// Mean SSIM over all 7x7 windows fully inside the plane (uniform weights,
// K1 = 0.01, K2 = 0.03, L = 255).
inline double ssim_plane(const std::vector<double>& a, const std::vector<double>& b, int h,
                         int w) {
    constexpr int kWin = 7;
    constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
    constexpr double kC2 = (0.03 * 255) * (0.03 * 255);
    if (h < kWin || w < kWin)
        throw ShapeMismatch("SSIM needs images at least 7x7");

    // integral images for the five window sums
    int iw = w + 1;
    std::vector<double> ia((h + 1) * iw, 0), ib((h + 1) * iw, 0), iaa((h + 1) * iw, 0),
        ibb((h + 1) * iw, 0), iab((h + 1) * iw, 0);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            std::size_t src = std::size_t(r) * w + c;
            std::size_t dst = std::size_t(r + 1) * iw + (c + 1);
            std::size_t up = dst - iw, left = dst - 1, diag = up - 1;
            ia[dst] = a[src] + ia[up] + ia[left] - ia[diag];
            ib[dst] = b[src] + ib[up] + ib[left] - ib[diag];
            iaa[dst] = a[src] * a[src] + iaa[up] + iaa[left] - iaa[diag];
            ibb[dst] = b[src] * b[src] + ibb[up] + ibb[left] - ibb[diag];
            iab[dst] = a[src] * b[src] + iab[up] + iab[left] - iab[diag];
        }
    auto window_sum = [&](const std::vector<double>& ii, int r, int c) {
        std::size_t r0 = std::size_t(r) * iw, r1 = std::size_t(r + kWin) * iw;
        return ii[r1 + c + kWin] - ii[r1 + c] - ii[r0 + c + kWin] + ii[r0 + c];
    };

    const double inv_n = 1.0 / (kWin * kWin);
    // sample variance/covariance, matching the usual SSIM convention
    const double norm = 1.0 / (kWin * kWin - 1);
    double acc = 0.0;
    std::size_t count = 0;
    for (int r = 0; r + kWin <= h; ++r)
        for (int c = 0; c + kWin <= w; ++c) {
            double sa = window_sum(ia, r, c), sb = window_sum(ib, r, c);
            double mua = sa * inv_n, mub = sb * inv_n;
            // expressions kept symmetric in (a, b) so SSIM(a,b) == SSIM(b,a) exactly
            double va = (window_sum(iaa, r, c) - (sa * sa) * inv_n) * norm;
            double vb = (window_sum(ibb, r, c) - (sb * sb) * inv_n) * norm;
            double cab = (window_sum(iab, r, c) - (sa * sb) * inv_n) * norm;
            double num = (2 * mua * mub + kC1) * (2 * cab + kC2);
            double den = (mua * mua + mub * mub + kC1) * (va + vb + kC2);
            acc += num / den;
            ++count;
        }
    return acc / static_cast<double>(count);
}

}  // namespace detail

struct ImageMetrics {
    double mse = 0, mae = 0, rmse = 0, psnr = 0, ssim_avg = 0;
    std::vector<double> ssim_per_channel;
};

/// Joint MSE/MAE/RMSE over all channels; PSNR from MSE; SSIM per channel.
inline ImageMetrics image_metrics(const RgbImage& a, const RgbImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw ShapeMismatch("image metrics need identical shapes");
    ImageMetrics m;
    double se = 0, ae = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        double d = double(a.pixels[i]) - double(b.pixels[i]);
        se += d * d;
        ae += std::abs(d);
    }
    m.mse = se / double(a.pixels.size());
    m.mae = ae / double(a.pixels.size());
    m.rmse = std::sqrt(m.mse);
    m.psnr = psnr_from_mse(m.mse);

    std::vector<double> pa(a.pixel_count()), pb(a.pixel_count());
    for (int ch = 0; ch < 3; ++ch) {
        for (std::size_t i = 0; i < a.pixel_count(); ++i) {
            pa[i] = a.pixels[3 * i + ch];
            pb[i] = b.pixels[3 * i + ch];
        }
        m.ssim_per_channel.push_back(detail::ssim_plane(pa, pb, a.height, a.width));
    }
    double s = 0;
    for (double v : m.ssim_per_channel) s += v;
    m.ssim_avg = s / double(m.ssim_per_channel.size());
    return m;
}

/// Grayscale overload (single plane evaluated as one channel).
inline ImageMetrics image_metrics(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw ShapeMismatch("image metrics need identical shapes");
    ImageMetrics m;
    double se = 0, ae = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        double d = double(a.pixels[i]) - double(b.pixels[i]);
        se += d * d;
        ae += std::abs(d);
    }
    m.mse = se / double(a.pixels.size());
    m.mae = ae / double(a.pixels.size());
    m.rmse = std::sqrt(m.mse);
    m.psnr = psnr_from_mse(m.mse);
    std::vector<double> pa(a.pixels.begin(), a.pixels.end()), pb(b.pixels.begin(), b.pixels.end());
    m.ssim_per_channel.push_back(detail::ssim_plane(pa, pb, a.height, a.width));
    m.ssim_avg = m.ssim_per_channel[0];
    return m;
}

// ---------------------------------------------------------------- audio

struct AudioMetrics {
    double mae = 0, mse = 0, snr_db = 0;
    bool truncated = false;  // inputs had different lengths
};

inline AudioMetrics audio_metrics(const std::vector<double>& x, const std::vector<double>& xhat) {
    AudioMetrics m;
    std::size_t n = std::min(x.size(), xhat.size());
    m.truncated = x.size() != xhat.size();
    if (n == 0) throw ZeroReferenceSignal("audio metrics need samples");
    double sig = 0, err2 = 0, err1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = x[i] - xhat[i];
        sig += x[i] * x[i];
        err2 += e * e;
        err1 += std::abs(e);
    }
    if (sig == 0.0) throw ZeroReferenceSignal("SNR undefined for an all-zero reference");
    m.mse = err2 / double(n);
    m.mae = err1 / double(n);
    m.snr_db = err2 == 0.0 ? std::numeric_limits<double>::infinity()
                           : 10.0 * std::log10(sig / err2);
    return m;
}

// --------------------------------------------------------------- payload

struct PayloadError {
    double mean_abs = 0;
    long long max_abs = 0;
    bool exact_match = true;
};

inline PayloadError payload_error(const PayloadSequence& sent, const PayloadSequence& received) {
    if (sent.values.size() != received.values.size())
        throw LengthMismatch("payload lengths differ: " + std::to_string(sent.values.size()) +
                             " vs " + std::to_string(received.values.size()));
    PayloadError pe;
    if (sent.values.empty()) return pe;
    long long total = 0;
    for (std::size_t i = 0; i < sent.values.size(); ++i) {
        long long d = std::llabs(static_cast<long long>(sent.values[i]) - received.values[i]);
        total += d;
        pe.max_abs = std::max(pe.max_abs, d);
    }
    pe.mean_abs = double(total) / double(sent.values.size());
    pe.exact_match = total == 0;
    return pe;
}

// ----------------------------------------------------------- page diffs

struct DiffHeatmap {
    GrayImage heatmap;                 // 255 where encoded > canonical, else 0
    std::vector<int> per_glyph_counts; // reading order, every cell in the grid
};

/// Pixelwise brightened-pixel map plus per-glyph sums over the tile grid.
/// Per-glyph sums agree with the channel's extract counts by construction.
inline DiffHeatmap diff_heatmap(const GrayImage& canonical_page, const GrayImage& encoded_page,
                                int tile_width, int tile_height, int glyphs_per_row,
                                int glyph_count) {
    if (canonical_page.width != encoded_page.width ||
        canonical_page.height != encoded_page.height)
        throw ShapeMismatch("pages have different dimensions");
    DiffHeatmap out;
    out.heatmap = GrayImage(canonical_page.width, canonical_page.height, 0);
    for (std::size_t i = 0; i < canonical_page.pixels.size(); ++i)
        if (encoded_page.pixels[i] > canonical_page.pixels[i]) out.heatmap.pixels[i] = 255;

    out.per_glyph_counts.assign(glyph_count, 0);
    for (int k = 0; k < glyph_count; ++k) {
        int base_r = (k / glyphs_per_row) * tile_height;
        int base_c = (k % glyphs_per_row) * tile_width;
        int count = 0;
        for (int r = 0; r < tile_height; ++r)
            for (int c = 0; c < tile_width; ++c)
                if (out.heatmap.at(base_r + r, base_c + c) == 255) ++count;
        out.per_glyph_counts[k] = count;
    }
    return out;
}

// ---------------------------------------------------------------- video

struct VideoMetrics {
    std::vector<double> psnr;  // per frame
    std::vector<double> ssim;  // per frame (channel average)
    double psnr_mean = 0, psnr_std = 0;
    double ssim_mean = 0, ssim_std = 0;
};

namespace detail {
inline std::pair<double, double> mean_std(const std::vector<double>& v) {
    bool all_inf = true;
    for (double x : v)
        if (std::isfinite(x)) all_inf = false;
    if (all_inf) return {std::numeric_limits<double>::infinity(), 0.0};
    double mean = 0;
    std::size_t n = 0;
    for (double x : v)
        if (std::isfinite(x)) {
            mean += x;
            ++n;
        }
    mean /= double(n);
    double var = 0;
    for (double x : v)
        if (std::isfinite(x)) var += (x - mean) * (x - mean);
    return {mean, std::sqrt(var / double(n))};
}
}  // namespace detail

/// Per-frame PSNR/SSIM; temporal consistency is reported as the standard
/// deviation of the per-frame series.
inline VideoMetrics video_metrics(const std::vector<RgbImage>& a, const std::vector<RgbImage>& b) {
    if (a.size() != b.size())
        throw LengthMismatch("frame counts differ: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    if (a.empty()) throw EmptyVideo("video metrics need at least one frame");
    VideoMetrics vm;
    for (std::size_t t = 0; t < a.size(); ++t) {
        ImageMetrics m = image_metrics(a[t], b[t]);
        vm.psnr.push_back(m.psnr);
        vm.ssim.push_back(m.ssim_avg);
    }
    std::tie(vm.psnr_mean, vm.psnr_std) = detail::mean_std(vm.psnr);
    std::tie(vm.ssim_mean, vm.ssim_std) = detail::mean_std(vm.ssim);
    return vm;
}

}  // namespace gpc
