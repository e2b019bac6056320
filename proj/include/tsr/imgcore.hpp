#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace tsr {

enum class ColorSpace { Gray, Bgr, Yuv, Hsv };

std::string_view to_string(ColorSpace cs) noexcept;

/// Interleaved 8-bit raster. Channel count is implied by the color space:
/// GRAY has one channel, every other space has three. HSV stores hue as
/// angle/2 so it fits in [0, 179].
class Image {
public:
    Image() = default;

    /// Zero-filled image. Throws ZeroDimension if either side is 0.
    Image(int width, int height, ColorSpace cs);

    /// Takes ownership of `data`; its length must equal width*height*channels.
    Image(int width, int height, ColorSpace cs, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return cs_ == ColorSpace::Gray ? 1 : 3; }
    ColorSpace color_space() const noexcept { return cs_; }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    std::uint8_t at(int x, int y, int c = 0) const noexcept {
        return data_[index(x, y, c)];
    }
    std::uint8_t& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }

    /// Relabels the samples without touching them. Channel count must not change.
    Image with_color_space(ColorSpace cs) const;

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int x, int y, int c) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x)) *
                   static_cast<std::size_t>(channels()) +
               static_cast<std::size_t>(c);
    }

    int width_ = 0;
    int height_ = 0;
    ColorSpace cs_ = ColorSpace::Gray;
    std::vector<std::uint8_t> data_;
};

/// Round half-up, then clamp to [0, 255].
std::uint8_t saturate_u8(double v) noexcept;

// --- Netpbm -------------------------------------------------------------

/// Decodes binary P5 (GRAY) or P6 (returned as BGR) with maxval 255.
Image decode_ppm(std::span<const std::uint8_t> bytes);

/// Reads a file and decodes it. IoError when the file cannot be read.
Image read_ppm(const std::string& path);

/// Writes P5 for GRAY and P6 (RGB order on disk) for BGR.
std::vector<std::uint8_t> encode_ppm(const Image& img);

// --- Geometry -------------------------------------------------------------

Image resize_bilinear(const Image& img, int out_w, int out_h);

/// Copies the inclusive pixel box [x1, x2] x [y1, y2], clamped to the image.
Image crop(const Image& img, int x1, int y1, int x2, int y2);

// --- Color -------------------------------------------------------------

Image bgr_to_gray(const Image& img);
Image gray_to_bgr(const Image& img);
Image bgr_to_yuv(const Image& img);
Image yuv_to_bgr(const Image& img);
Image bgr_to_hsv(const Image& img);
Image hsv_to_bgr(const Image& img);

/// Splits a 3-channel image into three GRAY planes; `merge` is the inverse
/// and stamps the result with `cs`.
std::vector<Image> split(const Image& img);
Image merge(std::span<const Image> planes, ColorSpace cs);

// --- Filtering / statistics ----------------------------------------------

/// Separable [1,2,1]/4 in both axes, replicate border.
Image gaussian_blur_3x3(const Image& img);

/// Population standard deviation of the luminance plane (Y of YUV for BGR,
/// channel 0 for YUV, the only channel for GRAY).
double luminance_stddev(const Image& img);

}  // namespace tsr
