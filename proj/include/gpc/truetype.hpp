// SPDX-License-Identifier: Apache-2.0
#pragma once

// Minimal TrueType outline loader and anti-aliased rasterizer.
//
// Scope: glyf-flavored fonts, cmap formats 4/12, simple and composite
// glyphs. Rendering uses a fixed supersampling grid (8x8 subsamples per
// pixel, non-zero winding), which makes output a pure function of the
// font bytes and requested geometry: fully covered pixels are exactly 0,
// background is exactly 255, partially covered contour pixels are gray.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gpc/errors.hpp"
#include "gpc/image.hpp"

namespace gpc::truetype {

namespace detail {

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint8_t u8(std::size_t off) const {
        check(off, 1);
        return data_[off];
    }
    std::uint16_t u16(std::size_t off) const {
        check(off, 2);
        return static_cast<std::uint16_t>((data_[off] << 8) | data_[off + 1]);
    }
    std::int16_t i16(std::size_t off) const { return static_cast<std::int16_t>(u16(off)); }
    std::uint32_t u32(std::size_t off) const {
        check(off, 4);
        return (std::uint32_t(data_[off]) << 24) | (std::uint32_t(data_[off + 1]) << 16) |
               (std::uint32_t(data_[off + 2]) << 8) | std::uint32_t(data_[off + 3]);
    }
    std::size_t size() const { return size_; }

private:
    void check(std::size_t off, std::size_t n) const {
        if (off + n > size_) throw UnsupportedFormat("font file: out-of-bounds read");
    }
    const std::uint8_t* data_;
    std::size_t size_;
};

struct Point {
    double x = 0;
    double y = 0;
    bool on_curve = true;
};

// One glyph outline as closed contours of points in font units.
struct Outline {
    std::vector<std::vector<Point>> contours;
};

struct Segment {
    double x0, y0, x1, y1;
};

}  // namespace detail

class Font {
public:
    explicit Font(std::vector<std::uint8_t> data) : data_(std::move(data)) { parse(); }

    bool has_glyph(char32_t cp) const { return glyph_index(cp) != 0; }

    std::string family_name() const { return family_name_; }

    int units_per_em() const { return units_per_em_; }

    /// Renders one codepoint into a square tile, ink bounding box centered.
    /// pixel_em is the em size in pixels (points at 72 dpi).
    GrayImage render_glyph(char32_t cp, double pixel_em, int tile_side) const {
        if (tile_side < 1) throw InvalidArgument("tile side must be >= 1");
        if (pixel_em <= 0) throw InvalidArgument("pixel em must be positive");
        GrayImage tile(tile_side, tile_side, 255);

        std::uint16_t gid = glyph_index(cp);
        if (gid == 0 && cp != U' ') throw UnsupportedFormat("codepoint not in font");

        detail::Outline outline;
        load_outline(gid, outline, 0);
        if (outline.contours.empty()) return tile;  // blank glyph (space)

        double scale = pixel_em / units_per_em_;
        auto segments = flatten(outline, scale);
        if (segments.empty()) return tile;

        double minx = segments[0].x0, maxx = segments[0].x0;
        double miny = segments[0].y0, maxy = segments[0].y0;
        for (const auto& s : segments) {
            minx = std::min({minx, s.x0, s.x1});
            maxx = std::max({maxx, s.x0, s.x1});
            miny = std::min({miny, s.y0, s.y1});
            maxy = std::max({maxy, s.y0, s.y1});
        }
        // Integer centering offset keeps the subsample phase identical for
        // every glyph, so rasters depend only on outline shape.
        double dx = std::round((tile_side - (maxx - minx)) / 2.0 - minx);
        double dy = std::round((tile_side - (maxy - miny)) / 2.0 - miny);
        for (auto& s : segments) {
            s.x0 += dx;
            s.x1 += dx;
            s.y0 += dy;
            s.y1 += dy;
        }

        rasterize(segments, tile);
        return tile;
    }

private:
    static constexpr int kSupersample = 8;  // 8x8 subsamples -> 64 coverage levels

    void parse() {
        detail::Reader r(data_.data(), data_.size());
        std::uint32_t version = r.u32(0);
        if (version != 0x00010000 && version != 0x74727565)  // 1.0 or 'true'
            throw UnsupportedFormat("not a TrueType font");
        std::uint16_t num_tables = r.u16(4);
        for (std::uint16_t i = 0; i < num_tables; ++i) {
            std::size_t rec = 12 + std::size_t(i) * 16;
            std::uint32_t tag = r.u32(rec);
            std::uint32_t off = r.u32(rec + 8);
            std::uint32_t len = r.u32(rec + 12);
            if (off + std::uint64_t(len) > data_.size())
                throw UnsupportedFormat("font table out of bounds");
            switch (tag) {
                case 0x68656164: head_ = off; break;  // head
                case 0x6d617870: maxp_ = off; break;  // maxp
                case 0x636d6170: cmap_ = off; break;  // cmap
                case 0x6c6f6361: loca_ = off; loca_len_ = len; break;  // loca
                case 0x676c7966: glyf_ = off; glyf_len_ = len; break;  // glyf
                case 0x6e616d65: name_ = off; break;  // name
                default: break;
            }
        }
        if (!head_ || !maxp_ || !cmap_ || !loca_ || !glyf_)
            throw UnsupportedFormat("font missing required tables (glyf outlines expected)");

        units_per_em_ = r.u16(head_ + 18);
        if (units_per_em_ == 0) throw UnsupportedFormat("font: unitsPerEm is zero");
        long_loca_ = r.i16(head_ + 50) != 0;
        num_glyphs_ = r.u16(maxp_ + 4);
        find_cmap_subtable(r);
        if (name_) family_name_ = read_family_name(r);
        if (family_name_.empty()) family_name_ = "unknown";
    }

    void find_cmap_subtable(const detail::Reader& r) {
        std::uint16_t n = r.u16(cmap_ + 2);
        std::uint32_t best = 0;
        for (std::uint16_t i = 0; i < n; ++i) {
            std::size_t rec = cmap_ + 4 + std::size_t(i) * 8;
            std::uint16_t platform = r.u16(rec);
            std::uint16_t encoding = r.u16(rec + 2);
            std::uint32_t off = r.u32(rec + 4);
            bool unicode = (platform == 0) ||
                           (platform == 3 && (encoding == 1 || encoding == 10));
            if (unicode) {
                std::uint16_t format = r.u16(cmap_ + off);
                if (format == 4 || format == 12) {
                    best = cmap_ + off;
                    if (format == 4) break;  // prefer the BMP table; A-Z lives there
                }
            }
        }
        if (!best) throw UnsupportedFormat("font: no usable unicode cmap subtable");
        cmap_sub_ = best;
    }

    std::string read_family_name(const detail::Reader& r) const {
        std::uint16_t count = r.u16(name_ + 2);
        std::uint16_t string_off = r.u16(name_ + 4);
        for (std::uint16_t i = 0; i < count; ++i) {
            std::size_t rec = name_ + 6 + std::size_t(i) * 12;
            std::uint16_t platform = r.u16(rec);
            std::uint16_t name_id = r.u16(rec + 6);
            if (name_id != 1) continue;
            std::uint16_t len = r.u16(rec + 8);
            std::uint16_t off = r.u16(rec + 10);
            std::size_t base = name_ + string_off + off;
            std::string out;
            if (platform == 3 || platform == 0) {  // UTF-16BE
                for (std::uint16_t k = 0; k + 1 < len; k += 2) {
                    std::uint16_t u = r.u16(base + k);
                    if (u >= 0x20 && u < 0x7F) out.push_back(static_cast<char>(u));
                }
            } else {  // mac roman, ASCII subset
                for (std::uint16_t k = 0; k < len; ++k) {
                    std::uint8_t c = r.u8(base + k);
                    if (c >= 0x20 && c < 0x7F) out.push_back(static_cast<char>(c));
                }
            }
            if (!out.empty()) return out;
        }
        return {};
    }

    std::uint16_t glyph_index(char32_t cp) const {
        detail::Reader r(data_.data(), data_.size());
        std::uint16_t format = r.u16(cmap_sub_);
        if (format == 4) {
            if (cp > 0xFFFF) return 0;
            std::uint16_t segcount2 = r.u16(cmap_sub_ + 6);
            std::size_t ends = cmap_sub_ + 14;
            std::size_t starts = ends + segcount2 + 2;
            std::size_t deltas = starts + segcount2;
            std::size_t ranges = deltas + segcount2;
            for (std::uint16_t seg = 0; seg * 2 < segcount2; ++seg) {
                std::uint16_t end = r.u16(ends + seg * 2);
                if (cp > end) continue;
                std::uint16_t start = r.u16(starts + seg * 2);
                if (cp < start) return 0;
                std::int16_t delta = r.i16(deltas + seg * 2);
                std::uint16_t range_off = r.u16(ranges + seg * 2);
                if (range_off == 0)
                    return static_cast<std::uint16_t>((cp + delta) & 0xFFFF);
                std::size_t gi_off = ranges + seg * 2 + range_off + 2 * (cp - start);
                std::uint16_t gi = r.u16(gi_off);
                if (gi == 0) return 0;
                return static_cast<std::uint16_t>((gi + delta) & 0xFFFF);
            }
            return 0;
        }
        if (format == 12) {
            std::uint32_t ngroups = r.u32(cmap_sub_ + 12);
            for (std::uint32_t g = 0; g < ngroups; ++g) {
                std::size_t rec = cmap_sub_ + 16 + std::size_t(g) * 12;
                std::uint32_t start = r.u32(rec);
                std::uint32_t end = r.u32(rec + 4);
                if (cp >= start && cp <= end)
                    return static_cast<std::uint16_t>(r.u32(rec + 8) + (cp - start));
            }
            return 0;
        }
        return 0;
    }

    // loca lookup; returns {offset, length} into glyf, length 0 = empty glyph.
    std::pair<std::size_t, std::size_t> glyph_location(std::uint16_t gid) const {
        if (gid >= num_glyphs_) throw UnsupportedFormat("glyph id out of range");
        detail::Reader r(data_.data(), data_.size());
        std::size_t o1, o2;
        if (long_loca_) {
            o1 = r.u32(loca_ + std::size_t(gid) * 4);
            o2 = r.u32(loca_ + std::size_t(gid) * 4 + 4);
        } else {
            o1 = std::size_t(r.u16(loca_ + std::size_t(gid) * 2)) * 2;
            o2 = std::size_t(r.u16(loca_ + std::size_t(gid) * 2 + 2)) * 2;
        }
        if (o2 < o1 || o2 > glyf_len_) throw UnsupportedFormat("font: bad loca entry");
        return {glyf_ + o1, o2 - o1};
    }

    void load_outline(std::uint16_t gid, detail::Outline& out, int depth) const {
        if (depth > 5) throw UnsupportedFormat("font: composite glyph nesting too deep");
        auto [off, len] = glyph_location(gid);
        if (len == 0) return;  // empty glyph

        detail::Reader r(data_.data(), data_.size());
        std::int16_t ncontours = r.i16(off);
        if (ncontours >= 0) {
            load_simple(r, off, ncontours, out);
        } else {
            load_composite(r, off, out, depth);
        }
    }

    void load_simple(const detail::Reader& r, std::size_t off, int ncontours,
                     detail::Outline& out) const {
        std::vector<std::uint16_t> contour_ends(ncontours);
        std::size_t p = off + 10;
        for (int i = 0; i < ncontours; ++i, p += 2) contour_ends[i] = r.u16(p);
        std::size_t npoints = ncontours ? contour_ends.back() + 1 : 0;
        std::uint16_t instr_len = r.u16(p);
        p += 2 + instr_len;

        std::vector<std::uint8_t> flags;
        flags.reserve(npoints);
        while (flags.size() < npoints) {
            std::uint8_t f = r.u8(p++);
            flags.push_back(f);
            if (f & 0x08) {  // repeat
                std::uint8_t rep = r.u8(p++);
                for (int k = 0; k < rep && flags.size() < npoints; ++k) flags.push_back(f);
            }
        }

        std::vector<int> xs(npoints), ys(npoints);
        int v = 0;
        for (std::size_t i = 0; i < npoints; ++i) {
            std::uint8_t f = flags[i];
            if (f & 0x02) {
                std::uint8_t d = r.u8(p++);
                v += (f & 0x10) ? d : -int(d);
            } else if (!(f & 0x10)) {
                v += r.i16(p);
                p += 2;
            }
            xs[i] = v;
        }
        v = 0;
        for (std::size_t i = 0; i < npoints; ++i) {
            std::uint8_t f = flags[i];
            if (f & 0x04) {
                std::uint8_t d = r.u8(p++);
                v += (f & 0x20) ? d : -int(d);
            } else if (!(f & 0x20)) {
                v += r.i16(p);
                p += 2;
            }
            ys[i] = v;
        }

        std::size_t start = 0;
        for (int c = 0; c < ncontours; ++c) {
            std::size_t end = contour_ends[c];
            std::vector<detail::Point> contour;
            for (std::size_t i = start; i <= end && i < npoints; ++i)
                contour.push_back({double(xs[i]), double(ys[i]), (flags[i] & 0x01) != 0});
            if (contour.size() >= 2) out.contours.push_back(std::move(contour));
            start = end + 1;
        }
    }

    void load_composite(const detail::Reader& r, std::size_t off, detail::Outline& out,
                        int depth) const {
        std::size_t p = off + 10;
        bool more = true;
        while (more) {
            std::uint16_t flags = r.u16(p);
            std::uint16_t child_gid = r.u16(p + 2);
            p += 4;
            more = (flags & 0x0020) != 0;
            if (!(flags & 0x0002))
                throw UnsupportedFormat("font: point-matching composites not supported");
            double tx, ty;
            if (flags & 0x0001) {
                tx = r.i16(p);
                ty = r.i16(p + 2);
                p += 4;
            } else {
                tx = static_cast<std::int8_t>(r.u8(p));
                ty = static_cast<std::int8_t>(r.u8(p + 1));
                p += 2;
            }
            double a = 1, b = 0, c = 0, d = 1;  // F2Dot14 component transform
            if (flags & 0x0008) {
                a = d = r.i16(p) / 16384.0;
                p += 2;
            } else if (flags & 0x0040) {
                a = r.i16(p) / 16384.0;
                d = r.i16(p + 2) / 16384.0;
                p += 4;
            } else if (flags & 0x0080) {
                a = r.i16(p) / 16384.0;
                b = r.i16(p + 2) / 16384.0;
                c = r.i16(p + 4) / 16384.0;
                d = r.i16(p + 6) / 16384.0;
                p += 8;
            }
            detail::Outline child;
            load_outline(child_gid, child, depth + 1);
            for (auto& contour : child.contours) {
                for (auto& pt : contour) {
                    double x = a * pt.x + c * pt.y + tx;
                    double y = b * pt.x + d * pt.y + ty;
                    pt.x = x;
                    pt.y = y;
                }
                out.contours.push_back(std::move(contour));
            }
        }
    }

    // Expands quadratic curves into line segments in pixel space (y down).
    static std::vector<detail::Segment> flatten(const detail::Outline& outline, double scale) {
        std::vector<detail::Segment> segs;
        auto emit = [&](double x0, double y0, double x1, double y1) {
            if (y0 != y1) segs.push_back({x0, y0, x1, y1});  // horizontal edges never cross scanlines
        };
        auto quad = [&](double x0, double y0, double cx, double cy, double x1, double y1) {
            double dev = std::hypot(x0 - 2 * cx + x1, y0 - 2 * cy + y1) / 4.0;
            int n = std::clamp(static_cast<int>(std::ceil(std::sqrt(dev / 0.05))), 1, 64);
            double px = x0, py = y0;
            for (int i = 1; i <= n; ++i) {
                double t = double(i) / n, mt = 1.0 - t;
                double qx = mt * mt * x0 + 2 * mt * t * cx + t * t * x1;
                double qy = mt * mt * y0 + 2 * mt * t * cy + t * t * y1;
                emit(px, py, qx, qy);
                px = qx;
                py = qy;
            }
        };

        for (const auto& contour : outline.contours) {
            std::size_t n = contour.size();
            // scaled, y-flipped working copy
            std::vector<detail::Point> pts(n);
            for (std::size_t i = 0; i < n; ++i)
                pts[i] = {contour[i].x * scale, -contour[i].y * scale, contour[i].on_curve};

            // starting on-curve point (synthesized from a midpoint if absent)
            std::size_t s0 = n;
            for (std::size_t i = 0; i < n; ++i)
                if (pts[i].on_curve) {
                    s0 = i;
                    break;
                }
            detail::Point first;
            std::size_t base, count;
            if (s0 == n) {
                first = {(pts[n - 1].x + pts[0].x) / 2, (pts[n - 1].y + pts[0].y) / 2, true};
                base = 0;
                count = n;
            } else {
                first = pts[s0];
                base = s0 + 1;
                count = n - 1;
            }

            detail::Point prev = first;
            bool have_ctrl = false;
            detail::Point ctrl{};
            for (std::size_t k = 0; k < count; ++k) {
                const detail::Point& pt = pts[(base + k) % n];
                if (pt.on_curve) {
                    if (have_ctrl) {
                        quad(prev.x, prev.y, ctrl.x, ctrl.y, pt.x, pt.y);
                        have_ctrl = false;
                    } else {
                        emit(prev.x, prev.y, pt.x, pt.y);
                    }
                    prev = pt;
                } else {
                    if (have_ctrl) {
                        // two consecutive control points imply an on-curve midpoint
                        detail::Point mid{(ctrl.x + pt.x) / 2, (ctrl.y + pt.y) / 2, true};
                        quad(prev.x, prev.y, ctrl.x, ctrl.y, mid.x, mid.y);
                        prev = mid;
                    }
                    ctrl = pt;
                    have_ctrl = true;
                }
            }
            if (have_ctrl)
                quad(prev.x, prev.y, ctrl.x, ctrl.y, first.x, first.y);
            else
                emit(prev.x, prev.y, first.x, first.y);
        }
        return segs;
    }

    // Non-zero winding scanline fill on a fixed subsample grid.
    static void rasterize(const std::vector<detail::Segment>& segs, GrayImage& tile) {
        const int S = kSupersample;
        const int w = tile.width, h = tile.height;
        std::vector<std::uint16_t> coverage(std::size_t(w) * h, 0);
        std::vector<std::pair<double, int>> crossings;

        for (int sy = 0; sy < h * S; ++sy) {
            double ys = (sy + 0.5) / S;
            crossings.clear();
            for (const auto& s : segs) {
                double ymin = std::min(s.y0, s.y1), ymax = std::max(s.y0, s.y1);
                if (ys < ymin || ys >= ymax) continue;
                double t = (ys - s.y0) / (s.y1 - s.y0);
                double x = s.x0 + t * (s.x1 - s.x0);
                crossings.emplace_back(x, s.y1 > s.y0 ? 1 : -1);
            }
            if (crossings.empty()) continue;
            std::sort(crossings.begin(), crossings.end());

            int row = sy / S;
            int winding = 0;
            for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
                winding += crossings[i].second;
                if (winding == 0) continue;
                double xa = crossings[i].first;
                double xb = crossings[i + 1].first;
                int j0 = std::max(0, static_cast<int>(std::ceil(xa * S - 0.5)));
                int j1 = std::min(w * S - 1, static_cast<int>(std::ceil(xb * S - 0.5)) - 1);
                for (int j = j0; j <= j1; ++j)
                    ++coverage[std::size_t(row) * w + (j / S)];
            }
        }

        const int full = S * S;
        for (std::size_t i = 0; i < coverage.size(); ++i) {
            int cov = coverage[i];
            tile.pixels[i] = static_cast<std::uint8_t>(255 - (cov * 255 + full / 2) / full);
        }
    }

    std::vector<std::uint8_t> data_;
    std::size_t head_ = 0, maxp_ = 0, cmap_ = 0, loca_ = 0, glyf_ = 0, name_ = 0;
    std::size_t loca_len_ = 0, glyf_len_ = 0;
    std::size_t cmap_sub_ = 0;
    int units_per_em_ = 0;
    bool long_loca_ = false;
    std::uint16_t num_glyphs_ = 0;
    std::string family_name_;
};

}  // namespace gpc::truetype
