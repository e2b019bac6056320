#include "tsr/error.hpp"
#include "tsr/imgcore.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

namespace tsr {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then parses an unsigned decimal.
    std::optional<long> next_number() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) return std::nullopt;
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000) return std::nullopt;
            ++pos_;
        }
        return v;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    bool consume_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) return false;
        ++pos_;
        return true;
    }

    std::size_t pos() const noexcept { return pos_; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

}  // namespace

Image decode_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        throw Error(ErrorCode::UnsupportedMagic, "expected binary netpbm magic P5 or P6");
    const bool color = bytes[1] == '6';

    HeaderReader rd(bytes);
    const auto w = rd.next_number();
    const auto h = rd.next_number();
    const auto maxval = rd.next_number();
    if (!w || !h || !maxval || *w < 1 || *h < 1)
        throw Error(ErrorCode::MalformedHeader, "width, height and maxval must be positive integers");
    if (*maxval != 255)
        throw Error(ErrorCode::MaxvalNot255, "maxval is " + std::to_string(*maxval));
    if (!rd.consume_single_space())
        throw Error(ErrorCode::MalformedHeader, "missing whitespace after maxval");

    const std::size_t ch = color ? 3 : 1;
    const std::size_t need = static_cast<std::size_t>(*w) * static_cast<std::size_t>(*h) * ch;
    const std::size_t have = bytes.size() - rd.pos();
    if (have < need)
        throw Error(ErrorCode::TruncatedPayload, "header promises " + std::to_string(need) +
                                                     " samples, file holds " + std::to_string(have));

    std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(rd.pos()),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(rd.pos() + need));
    if (color) {
        for (std::size_t i = 0; i < need; i += 3) std::swap(data[i], data[i + 2]);
    }
    return Image(static_cast<int>(*w), static_cast<int>(*h), color ? ColorSpace::Bgr : ColorSpace::Gray,
                 std::move(data));
}

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_ppm(bytes);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.detail());
    }
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
    const bool gray = img.channels() == 1;
    if (!gray && img.color_space() != ColorSpace::Bgr)
        throw Error(ErrorCode::WrongColorSpace, "PPM encoding needs GRAY or BGR input");
    const std::string header = std::string(gray ? "P5\n" : "P6\n") + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const auto data = img.data();
    const std::size_t off = out.size();
    out.insert(out.end(), data.begin(), data.end());
    if (!gray) {
        for (std::size_t i = off; i < out.size(); i += 3) std::swap(out[i], out[i + 2]);
    }
    return out;
}

}  // namespace tsr
