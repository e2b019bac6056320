#include "tsr/imgcore.hpp"

#include <cmath>

namespace tsr {

Image gaussian_blur_3x3(const Image& img) {
    const int w = img.width();
    const int h = img.height();
    const int ch = img.channels();
    // Integer [1,2,1] passes; the 1/16 scale is applied once at the end so
    // the only rounding is the final one.
    std::vector<int> rows(img.data().size());
    auto row_at = [&](int x, int y, int c) -> int& {
        return rows[(static_cast<std::size_t>(y) * w + x) * ch + c];
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int xl = x > 0 ? x - 1 : 0;
            const int xr = x + 1 < w ? x + 1 : w - 1;
            for (int c = 0; c < ch; ++c)
                row_at(x, y, c) = img.at(xl, y, c) + 2 * img.at(x, y, c) + img.at(xr, y, c);
        }

    Image out(w, h, img.color_space());
    for (int y = 0; y < h; ++y) {
        const int yu = y > 0 ? y - 1 : 0;
        const int yd = y + 1 < h ? y + 1 : h - 1;
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < ch; ++c) {
                const int sum = row_at(x, yu, c) + 2 * row_at(x, y, c) + row_at(x, yd, c);
                out.at(x, y, c) = static_cast<std::uint8_t>((sum + 8) / 16);
            }
    }
    return out;
}

double luminance_stddev(const Image& img) {
    Image luma;
    int channel = 0;
    switch (img.color_space()) {
        case ColorSpace::Bgr: luma = bgr_to_yuv(img); break;
        case ColorSpace::Hsv: luma = img; channel = 2; break;
        default: luma = img; break;
    }
    const int ch = luma.channels();
    const auto data = luma.data();
    const std::size_t n = luma.pixel_count();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += data[i * ch + channel];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = data[i * ch + channel] - mean;
        var += d * d;
    }
    return std::sqrt(var / static_cast<double>(n));
}

}  // namespace tsr
