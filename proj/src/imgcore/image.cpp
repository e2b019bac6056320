#include "tsr/error.hpp"
#include "tsr/imgcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tsr {

std::string_view to_string(ColorSpace cs) noexcept {
    switch (cs) {
        case ColorSpace::Gray: return "GRAY";
        case ColorSpace::Bgr: return "BGR";
        case ColorSpace::Yuv: return "YUV";
        case ColorSpace::Hsv: return "HSV";
    }
    return "?";
}

Image::Image(int width, int height, ColorSpace cs) : width_(width), height_(height), cs_(cs) {
    if (width < 1 || height < 1)
        throw Error(ErrorCode::ZeroDimension,
                    "image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                        std::to_string(height));
    data_.assign(pixel_count() * static_cast<std::size_t>(channels()), 0);
}

Image::Image(int width, int height, ColorSpace cs, std::vector<std::uint8_t> data)
    : width_(width), height_(height), cs_(cs), data_(std::move(data)) {
    if (width < 1 || height < 1)
        throw Error(ErrorCode::ZeroDimension,
                    "image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                        std::to_string(height));
    if (data_.size() != pixel_count() * static_cast<std::size_t>(channels()))
        throw Error(ErrorCode::TruncatedPayload,
                    "sample buffer holds " + std::to_string(data_.size()) + " bytes, expected " +
                        std::to_string(pixel_count() * static_cast<std::size_t>(channels())));
}

Image Image::with_color_space(ColorSpace cs) const {
    if ((cs == ColorSpace::Gray) != (cs_ == ColorSpace::Gray))
        throw Error(ErrorCode::WrongColorSpace, "cannot relabel " + std::string(to_string(cs_)) +
                                                    " as " + std::string(to_string(cs)));
    Image out = *this;
    out.cs_ = cs;
    return out;
}

std::uint8_t saturate_u8(double v) noexcept {
    const double r = std::floor(v + 0.5);
    if (!(r > 0.0)) return 0;
    if (r > 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1)
        throw Error(ErrorCode::ZeroDimension, "resize target must be >= 1x1, got " +
                                                  std::to_string(out_w) + "x" +
                                                  std::to_string(out_h));
    const int in_w = img.width();
    const int in_h = img.height();
    const int ch = img.channels();
    Image out(out_w, out_h, img.color_space());

    // Source sample positions along one axis, clamped to the valid range.
    struct Tap {
        int i0, i1;
        double f;
    };
    auto taps = [](int in, int outn) {
        std::vector<Tap> t(static_cast<std::size_t>(outn));
        const double scale = static_cast<double>(in) / static_cast<double>(outn);
        for (int d = 0; d < outn; ++d) {
            double s = (d + 0.5) * scale - 0.5;
            s = std::clamp(s, 0.0, static_cast<double>(in - 1));
            const int i0 = static_cast<int>(std::floor(s));
            const int i1 = std::min(i0 + 1, in - 1);
            t[static_cast<std::size_t>(d)] = {i0, i1, s - i0};
        }
        return t;
    };
    const auto xs = taps(in_w, out_w);
    const auto ys = taps(in_h, out_h);

    for (int y = 0; y < out_h; ++y) {
        const Tap& ty = ys[static_cast<std::size_t>(y)];
        for (int x = 0; x < out_w; ++x) {
            const Tap& tx = xs[static_cast<std::size_t>(x)];
            for (int c = 0; c < ch; ++c) {
                const double top = img.at(tx.i0, ty.i0, c) * (1.0 - tx.f) + img.at(tx.i1, ty.i0, c) * tx.f;
                const double bot = img.at(tx.i0, ty.i1, c) * (1.0 - tx.f) + img.at(tx.i1, ty.i1, c) * tx.f;
                out.at(x, y, c) = saturate_u8(top * (1.0 - ty.f) + bot * ty.f);
            }
        }
    }
    return out;
}

Image crop(const Image& img, int x1, int y1, int x2, int y2) {
    x1 = std::clamp(x1, 0, img.width() - 1);
    y1 = std::clamp(y1, 0, img.height() - 1);
    x2 = std::clamp(x2, x1, img.width() - 1);
    y2 = std::clamp(y2, y1, img.height() - 1);
    Image out(x2 - x1 + 1, y2 - y1 + 1, img.color_space());
    for (int y = y1; y <= y2; ++y)
        for (int x = x1; x <= x2; ++x)
            for (int c = 0; c < img.channels(); ++c) out.at(x - x1, y - y1, c) = img.at(x, y, c);
    return out;
}

std::vector<Image> split(const Image& img) {
    std::vector<Image> planes;
    const int ch = img.channels();
    planes.reserve(static_cast<std::size_t>(ch));
    for (int c = 0; c < ch; ++c) {
        Image p(img.width(), img.height(), ColorSpace::Gray);
        auto src = img.data();
        auto dst = p.data();
        for (std::size_t i = 0; i < img.pixel_count(); ++i)
            dst[i] = src[i * static_cast<std::size_t>(ch) + static_cast<std::size_t>(c)];
        planes.push_back(std::move(p));
    }
    return planes;
}

Image merge(std::span<const Image> planes, ColorSpace cs) {
    const std::size_t ch = cs == ColorSpace::Gray ? 1 : 3;
    if (planes.size() != ch)
        throw Error(ErrorCode::WrongColorSpace, "merge into " + std::string(to_string(cs)) +
                                                    " needs " + std::to_string(ch) + " planes");
    Image out(planes[0].width(), planes[0].height(), cs);
    auto dst = out.data();
    for (std::size_t c = 0; c < ch; ++c) {
        const Image& p = planes[c];
        if (p.channels() != 1 || p.width() != out.width() || p.height() != out.height())
            throw Error(ErrorCode::DimensionMismatch, "merge planes must be equal-sized GRAY images");
        auto src = p.data();
        for (std::size_t i = 0; i < out.pixel_count(); ++i) dst[i * ch + c] = src[i];
    }
    return out;
}

}  // namespace tsr
