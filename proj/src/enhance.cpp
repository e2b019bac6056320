#include "tsr/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tsr/error.hpp"

namespace tsr {

namespace {

void require_single_channel(const Image& img, const char* op) {
    if (img.channels() != 1)
        throw Error(ErrorCode::NotSingleChannel,
                    std::string(op) + " needs a single-channel image, got " + std::to_string(img.channels()));
}

Histogram histogram_of(const Image& img) {
    Histogram h{};
    for (std::uint8_t v : img.data()) ++h[v];
    return h;
}

// Tile partition along one axis: uniform tiles, last one takes the remainder.
// Positions are kept in half-pixel units so blend weights are exact ratios.
struct Axis {
    std::vector<int> start;
    std::vector<int> size;
    std::vector<std::int64_t> center2;

    Axis(int extent, int tiles) {
        const int base = extent / tiles;
        for (int i = 0; i < tiles; ++i) {
            const int s = i * base;
            const int n = i + 1 == tiles ? extent - s : base;
            start.push_back(s);
            size.push_back(n);
            center2.push_back(2 * s + n);
        }
    }

    // Bracketing tiles for pixel index p; the upper tile's weight is num/den.
    struct Span {
        int lo, hi;
        std::int64_t num, den;
    };

    Span locate(int p) const {
        const std::int64_t pos = 2 * static_cast<std::int64_t>(p) + 1;
        const int last = static_cast<int>(center2.size()) - 1;
        if (pos <= center2.front()) return {0, 0, 0, 1};
        if (pos >= center2.back()) return {last, last, 0, 1};
        int lo = 0;
        while (center2[static_cast<std::size_t>(lo) + 1] <= pos) ++lo;
        const std::int64_t c0 = center2[static_cast<std::size_t>(lo)];
        return {lo, lo + 1, pos - c0, center2[static_cast<std::size_t>(lo) + 1] - c0};
    }
};

}  // namespace

Image equalize_hist(const Image& channel) {
    require_single_channel(channel, "equalize_hist");
    const Histogram hist = histogram_of(channel);
    const std::size_t n = channel.pixel_count();

    std::array<std::uint64_t, 256> cdf{};
    std::uint64_t run = 0;
    for (std::size_t v = 0; v < 256; ++v) cdf[v] = run += hist[v];
    std::uint64_t cdf_min = 0;
    for (std::size_t v = 0; v < 256; ++v)
        if (cdf[v] != 0) {
            cdf_min = cdf[v];
            break;
        }

    std::array<std::uint8_t, 256> lut{};
    if (n > cdf_min) {
        const std::uint64_t span = n - cdf_min;
        for (std::size_t v = 0; v < 256; ++v)
            lut[v] = cdf[v] < cdf_min ? 0
                                      : static_cast<std::uint8_t>((510 * (cdf[v] - cdf_min) + span) / (2 * span));
    }

    Image out = channel;
    for (auto& v : out.data()) v = lut[v];
    return out;
}

double dynamic_clip_limit(double stddev) noexcept {
    if (stddev < 50.0) return 4.0;
    if (stddev < 100.0) return 2.0;
    return 1.0;
}

std::uint32_t clip_count(double clip_limit, std::size_t tile_pixels) noexcept {
    const double c = std::floor(clip_limit * static_cast<double>(tile_pixels) / 256.0);
    return c < 1.0 ? 1u : static_cast<std::uint32_t>(c);
}

void clip_and_redistribute(Histogram& hist, std::uint32_t limit) noexcept {
    std::uint64_t excess = 0;
    for (auto& b : hist)
        if (b > limit) {
            excess += b - limit;
            b = limit;
        }
    const auto share = static_cast<std::uint32_t>(excess / 256);
    const auto rest = static_cast<std::size_t>(excess % 256);
    for (auto& b : hist) b += share;
    for (std::size_t i = 0; i < rest; ++i) ++hist[i];
}

std::array<std::uint8_t, 256> tile_mapping(const Histogram& hist, std::size_t tile_pixels) noexcept {
    std::array<std::uint8_t, 256> lut{};
    if (tile_pixels == 0) return lut;
    // round(cdf * 255 / n) in integers so exact halves always round up.
    const std::uint64_t n = tile_pixels;
    std::uint64_t cdf = 0;
    for (std::size_t v = 0; v < 256; ++v) {
        cdf += hist[v];
        lut[v] = static_cast<std::uint8_t>(std::min<std::uint64_t>(255, (510 * cdf + n) / (2 * n)));
    }
    return lut;
}

Image clahe(const Image& channel, const ClaheConfig& cfg) {
    require_single_channel(channel, "clahe");
    if (!(cfg.clip_limit > 0.0) || cfg.tile_cols < 1 || cfg.tile_rows < 1)
        throw Error(ErrorCode::InvalidConfig, "clip_limit must be > 0 and the tile grid >= 1x1");
    if (channel.width() < cfg.tile_cols || channel.height() < cfg.tile_rows)
        throw Error(ErrorCode::ImageSmallerThanGrid,
                    std::to_string(channel.width()) + "x" + std::to_string(channel.height()) +
                        " image cannot hold a " + std::to_string(cfg.tile_cols) + "x" +
                        std::to_string(cfg.tile_rows) + " tile grid");

    const Axis ax(channel.width(), cfg.tile_cols);
    const Axis ay(channel.height(), cfg.tile_rows);

    std::vector<std::array<std::uint8_t, 256>> luts(static_cast<std::size_t>(cfg.tile_cols * cfg.tile_rows));
    for (int ty = 0; ty < cfg.tile_rows; ++ty)
        for (int tx = 0; tx < cfg.tile_cols; ++tx) {
            Histogram hist{};
            const int x0 = ax.start[static_cast<std::size_t>(tx)];
            const int y0 = ay.start[static_cast<std::size_t>(ty)];
            const int w = ax.size[static_cast<std::size_t>(tx)];
            const int h = ay.size[static_cast<std::size_t>(ty)];
            for (int y = y0; y < y0 + h; ++y)
                for (int x = x0; x < x0 + w; ++x) ++hist[channel.at(x, y)];
            const auto pixels = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
            clip_and_redistribute(hist, clip_count(cfg.clip_limit, pixels));
            luts[static_cast<std::size_t>(ty * cfg.tile_cols + tx)] = tile_mapping(hist, pixels);
        }

    // Bilinear blend evaluated exactly in integers, rounded half up.
    Image out(channel.width(), channel.height(), ColorSpace::Gray);
    for (int y = 0; y < channel.height(); ++y) {
        const Axis::Span sy = ay.locate(y);
        for (int x = 0; x < channel.width(); ++x) {
            const Axis::Span sx = ax.locate(x);
            const std::uint8_t v = channel.at(x, y);
            auto m = [&](int ty, int tx) -> std::int64_t {
                return luts[static_cast<std::size_t>(ty * cfg.tile_cols + tx)][v];
            };
            const std::int64_t top = m(sy.lo, sx.lo) * (sx.den - sx.num) + m(sy.lo, sx.hi) * sx.num;
            const std::int64_t bot = m(sy.hi, sx.lo) * (sx.den - sx.num) + m(sy.hi, sx.hi) * sx.num;
            const std::int64_t num = top * (sy.den - sy.num) + bot * sy.num;
            const std::int64_t den = sx.den * sy.den;
            out.at(x, y) = static_cast<std::uint8_t>(std::min<std::int64_t>(255, (2 * num + den) / (2 * den)));
        }
    }
    return out;
}

double dynamic_clip_limit_for(const Image& img) { return dynamic_clip_limit(luminance_stddev(img)); }

Image apply_clahe_dynamic(const Image& img) {
    const ClaheConfig cfg{dynamic_clip_limit_for(img), 8, 8};
    switch (img.color_space()) {
        case ColorSpace::Gray: return clahe(img, cfg);
        case ColorSpace::Bgr: {
            auto planes = split(bgr_to_yuv(img));
            planes[0] = clahe(planes[0], cfg);
            return yuv_to_bgr(merge(planes, ColorSpace::Yuv));
        }
        default:
            throw Error(ErrorCode::WrongColorSpace, "apply_clahe_dynamic expects BGR or GRAY input, got " +
                                                        std::string(to_string(img.color_space())));
    }
}

}  // namespace tsr
