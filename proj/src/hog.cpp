#include "tsr/hog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tsr/error.hpp"

namespace tsr {

void HogConfig::validate() const {
    const bool ok = window > 0 && block > 0 && stride > 0 && cell > 0 && bins > 0 && window % cell == 0 &&
                    block % cell == 0 && stride % cell == 0 && block <= window && (window - block) % stride == 0 &&
                    hys_clip > 0.0 && epsilon > 0.0;
    if (!ok) throw Error(ErrorCode::InvalidConfig, "inconsistent HOG geometry");
}

GradientField compute_gradients(const Image& img) {
    const int w = img.width();
    const int h = img.height();
    GradientField g{w, h, std::vector<double>(img.pixel_count()), std::vector<double>(img.pixel_count())};

    for (int y = 0; y < h; ++y) {
        const int yu = y > 0 ? y - 1 : 0;
        const int yd = y + 1 < h ? y + 1 : h - 1;
        for (int x = 0; x < w; ++x) {
            const int xl = x > 0 ? x - 1 : 0;
            const int xr = x + 1 < w ? x + 1 : w - 1;
            int best_dx = 0, best_dy = 0, best_sq = -1;
            for (int c = 0; c < img.channels(); ++c) {
                const int dx = img.at(xr, y, c) - img.at(xl, y, c);
                const int dy = img.at(x, yd, c) - img.at(x, yu, c);
                const int sq = dx * dx + dy * dy;
                if (sq > best_sq) {
                    best_sq = sq;
                    best_dx = dx;
                    best_dy = dy;
                }
            }
            double deg = 0.0;
            if (best_sq > 0) {
                deg = std::atan2(static_cast<double>(best_dy), static_cast<double>(best_dx)) * 180.0 /
                      std::numbers::pi;
                if (deg < 0.0) deg += 180.0;
                if (deg >= 180.0) deg -= 180.0;
            }
            const auto i = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
            g.magnitude[i] = std::sqrt(static_cast<double>(best_sq));
            g.angle[i] = deg;
        }
    }
    return g;
}

std::vector<double> cell_histograms(const Image& img, const HogConfig& cfg) {
    cfg.validate();
    if (img.width() != cfg.window || img.height() != cfg.window)
        throw Error(ErrorCode::WrongWindowSize, "HOG window is " + std::to_string(cfg.window) + "x" +
                                                    std::to_string(cfg.window) + ", image is " +
                                                    std::to_string(img.width()) + "x" +
                                                    std::to_string(img.height()));
    const GradientField g = compute_gradients(img);
    const int cells = cfg.cells_per_axis();
    const int bins = cfg.bins;
    const double bin_width = 180.0 / bins;
    std::vector<double> hist(static_cast<std::size_t>(cells * cells * bins), 0.0);

    for (int y = 0; y < cfg.window; ++y)
        for (int x = 0; x < cfg.window; ++x) {
            const auto i = static_cast<std::size_t>(y * cfg.window + x);
            const double mag = g.magnitude[i];
            if (mag == 0.0) continue;
            // Bin centers sit at (b + 0.5) * bin_width; votes split linearly
            // between the two nearest centers, wrapping at 0/180.
            const double pos = g.angle[i] / bin_width - 0.5;
            const double lower = std::floor(pos);
            const double frac = pos - lower;
            const int b0 = (static_cast<int>(lower) + bins) % bins;
            const int b1 = (b0 + 1) % bins;
            const auto base = static_cast<std::size_t>(((y / cfg.cell) * cells + x / cfg.cell) * bins);
            hist[base + static_cast<std::size_t>(b0)] += mag * (1.0 - frac);
            hist[base + static_cast<std::size_t>(b1)] += mag * frac;
        }
    return hist;
}

FeatureVector hog_descriptor(const Image& img, const HogConfig& cfg) {
    const std::vector<double> hist = cell_histograms(img, cfg);
    const int cells = cfg.cells_per_axis();
    const int per_block = cfg.cells_per_block_axis();
    const int step = cfg.stride / cfg.cell;
    const int blocks = cfg.blocks_per_axis();
    const auto bins = static_cast<std::size_t>(cfg.bins);
    const double eps2 = cfg.epsilon * cfg.epsilon;

    FeatureVector out;
    out.reserve(cfg.descriptor_len());
    std::vector<double> block(static_cast<std::size_t>(per_block * per_block) * bins);

    for (int by = 0; by < blocks; ++by)
        for (int bx = 0; bx < blocks; ++bx) {
            std::size_t k = 0;
            for (int cy = 0; cy < per_block; ++cy)
                for (int cx = 0; cx < per_block; ++cx) {
                    const auto cell =
                        static_cast<std::size_t>((by * step + cy) * cells + (bx * step + cx)) * bins;
                    for (std::size_t b = 0; b < bins; ++b) block[k++] = hist[cell + b];
                }

            // L2-Hys: normalize, clamp, normalize again.
            double sq = 0.0;
            for (double v : block) sq += v * v;
            double inv = 1.0 / std::sqrt(sq + eps2);
            sq = 0.0;
            for (double& v : block) {
                v = std::min(v * inv, cfg.hys_clip);
                sq += v * v;
            }
            inv = 1.0 / std::sqrt(sq + eps2);
            for (double v : block) out.push_back(static_cast<float>(v * inv));
        }
    return out;
}

}  // namespace tsr
