#include "tsr/error.hpp"
#include "tsr/imgcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tsr {

namespace {

void require(const Image& img, ColorSpace cs, const char* op) {
    if (img.color_space() != cs)
        throw Error(ErrorCode::WrongColorSpace, std::string(op) + " expects " +
                                                    std::string(to_string(cs)) + " input, got " +
                                                    std::string(to_string(img.color_space())));
}

// BT.601 full-range luma.
double luma(double b, double g, double r) noexcept { return 0.299 * r + 0.587 * g + 0.114 * b; }

}  // namespace

Image bgr_to_gray(const Image& img) {
    require(img, ColorSpace::Bgr, "bgr_to_gray");
    Image out(img.width(), img.height(), ColorSpace::Gray);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i)
        dst[i] = saturate_u8(luma(src[3 * i], src[3 * i + 1], src[3 * i + 2]));
    return out;
}

Image gray_to_bgr(const Image& img) {
    require(img, ColorSpace::Gray, "gray_to_bgr");
    Image out(img.width(), img.height(), ColorSpace::Bgr);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
    return out;
}

Image bgr_to_yuv(const Image& img) {
    require(img, ColorSpace::Bgr, "bgr_to_yuv");
    Image out(img.width(), img.height(), ColorSpace::Yuv);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double b = src[3 * i], g = src[3 * i + 1], r = src[3 * i + 2];
        dst[3 * i] = saturate_u8(luma(b, g, r));
        dst[3 * i + 1] = saturate_u8(-0.168736 * r - 0.331264 * g + 0.5 * b + 128.0);
        dst[3 * i + 2] = saturate_u8(0.5 * r - 0.418688 * g - 0.081312 * b + 128.0);
    }
    return out;
}

Image yuv_to_bgr(const Image& img) {
    require(img, ColorSpace::Yuv, "yuv_to_bgr");
    Image out(img.width(), img.height(), ColorSpace::Bgr);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double y = src[3 * i], u = src[3 * i + 1] - 128.0, v = src[3 * i + 2] - 128.0;
        dst[3 * i] = saturate_u8(y + 1.772 * u);
        dst[3 * i + 1] = saturate_u8(y - 0.344136 * u - 0.714136 * v);
        dst[3 * i + 2] = saturate_u8(y + 1.402 * v);
    }
    return out;
}

// Hexcone model. Hue is stored as degrees/2.
Image bgr_to_hsv(const Image& img) {
    require(img, ColorSpace::Bgr, "bgr_to_hsv");
    Image out(img.width(), img.height(), ColorSpace::Hsv);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const int b = src[3 * i], g = src[3 * i + 1], r = src[3 * i + 2];
        const int v = std::max({r, g, b});
        const int diff = v - std::min({r, g, b});
        double hue = 0.0;
        if (diff != 0) {
            if (v == r)
                hue = 60.0 * (g - b) / diff;
            else if (v == g)
                hue = 120.0 + 60.0 * (b - r) / diff;
            else
                hue = 240.0 + 60.0 * (r - g) / diff;
            if (hue < 0.0) hue += 360.0;
        }
        std::uint8_t h = saturate_u8(hue / 2.0);
        if (h >= 180) h = static_cast<std::uint8_t>(h - 180);
        dst[3 * i] = h;
        dst[3 * i + 1] = v == 0 ? 0 : saturate_u8(255.0 * diff / v);
        dst[3 * i + 2] = static_cast<std::uint8_t>(v);
    }
    return out;
}

Image hsv_to_bgr(const Image& img) {
    require(img, ColorSpace::Hsv, "hsv_to_bgr");
    Image out(img.width(), img.height(), ColorSpace::Bgr);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double hue = (src[3 * i] % 180) * 2.0;
        const double s = src[3 * i + 1] / 255.0;
        const double v = src[3 * i + 2] / 255.0;
        const double chroma = v * s;
        const double sector = hue / 60.0;
        const double x = chroma * (1.0 - std::abs(std::fmod(sector, 2.0) - 1.0));
        double r = 0, g = 0, b = 0;
        switch (static_cast<int>(sector)) {
            case 0: r = chroma; g = x; break;
            case 1: r = x; g = chroma; break;
            case 2: g = chroma; b = x; break;
            case 3: g = x; b = chroma; break;
            case 4: r = x; b = chroma; break;
            default: r = chroma; b = x; break;
        }
        const double m = v - chroma;
        dst[3 * i] = saturate_u8((b + m) * 255.0);
        dst[3 * i + 1] = saturate_u8((g + m) * 255.0);
        dst[3 * i + 2] = saturate_u8((r + m) * 255.0);
    }
    return out;
}

}  // namespace tsr
