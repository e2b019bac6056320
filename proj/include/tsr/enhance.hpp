#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "tsr/imgcore.hpp"

namespace tsr {

struct ClaheConfig {
    double clip_limit = 2.0;
    int tile_cols = 8;
    int tile_rows = 8;
};

using Histogram = std::array<std::uint32_t, 256>;

/// Global histogram equalization, cdf_min-shifted. A constant image maps
/// to all zeros.
Image equalize_hist(const Image& channel);

/// Contrast step function: 4.0 below 50, 2.0 below 100, 1.0 otherwise.
double dynamic_clip_limit(double stddev) noexcept;

/// Absolute per-bin cap for a tile of `tile_pixels` samples:
/// max(1, floor(clip_limit * tile_pixels / 256)).
std::uint32_t clip_count(double clip_limit, std::size_t tile_pixels) noexcept;

/// Caps every bin at `limit` and spreads the removed mass back: an even
/// share to all 256 bins, then the remainder one sample per bin starting
/// at bin 0. The total count is unchanged.
void clip_and_redistribute(Histogram& hist, std::uint32_t limit) noexcept;

/// Tile equalization lookup: m(v) = round(cdf(v) / tile_pixels * 255).
std::array<std::uint8_t, 256> tile_mapping(const Histogram& hist, std::size_t tile_pixels) noexcept;

/// Contrast-limited adaptive histogram equalization on one GRAY plane.
/// Edge tiles absorb the remainder when the size is not divisible by the
/// grid; output pixels blend the mappings of the nearest tile centers.
Image clahe(const Image& channel, const ClaheConfig& cfg);

/// CLAHE on the luminance with the clip limit picked from its standard
/// deviation and an 8x8 grid. BGR input is processed via Y of YUV and
/// converted back; GRAY is processed directly.
Image apply_clahe_dynamic(const Image& img);

/// Clip limit `apply_clahe_dynamic` would select for this image.
double dynamic_clip_limit_for(const Image& img);

}  // namespace tsr
