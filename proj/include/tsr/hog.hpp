#pragma once

#include <vector>

#include "tsr/imgcore.hpp"

namespace tsr {

/// Descriptor geometry. Defaults are the traffic-sign configuration:
/// 32px window, 16px blocks at stride 8, 8px cells, 9 unsigned bins.
struct HogConfig {
    int window = 32;
    int block = 16;
    int stride = 8;
    int cell = 8;
    int bins = 9;
    double hys_clip = 0.2;
    double epsilon = 1e-5;

    /// Throws InvalidConfig when the divisibility constraints do not hold.
    void validate() const;

    int blocks_per_axis() const noexcept { return (window - block) / stride + 1; }
    int cells_per_block_axis() const noexcept { return block / cell; }
    int cells_per_axis() const noexcept { return window / cell; }
    std::size_t descriptor_len() const noexcept {
        const auto b = static_cast<std::size_t>(blocks_per_axis());
        const auto c = static_cast<std::size_t>(cells_per_block_axis());
        return b * b * c * c * static_cast<std::size_t>(bins);
    }
};

using FeatureVector = std::vector<float>;

/// Per-pixel gradient: magnitude and unsigned orientation in [0, 180).
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> magnitude;
    std::vector<double> angle;
};

/// Centered differences with replicate borders. On multi-channel input each
/// pixel takes the channel with the largest magnitude (lowest index on ties).
GradientField compute_gradients(const Image& img);

/// Unnormalized per-cell orientation histograms, cells in row-major order,
/// `cfg.bins` values each.
std::vector<double> cell_histograms(const Image& img, const HogConfig& cfg);

/// Full descriptor: 2x2-cell blocks, L2-Hys normalized, concatenated in
/// row-major block order. Throws WrongWindowSize unless the image is
/// window x window.
FeatureVector hog_descriptor(const Image& img, const HogConfig& cfg = {});

}  // namespace tsr
