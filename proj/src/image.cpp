#include "rbepwt/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <string>

#include "rbepwt/error.hpp"

namespace rbepwt {

bool is_canonical(const PointSet& points) {
    return std::adjacent_find(points.begin(), points.end(),
                              [](Coord a, Coord b) { return !(a < b); }) == points.end();
}

GrayImage::GrayImage(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != width * height)
        fail(ErrorKind::InvalidArgument, "pixel count does not match image dimensions");
}

namespace {

bool is_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Skips whitespace and '#' comments, then reads one token.
std::string next_header_token(std::istream& in) {
    std::string token;
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    while (ch != EOF && !std::isspace(ch) && ch != '#') {
        token.push_back(static_cast<char>(ch));
        ch = in.get();
    }
    if (ch == '#') in.unget();
    return token;
}

std::size_t parse_dimension(const std::string& token, const char* what) {
    if (!is_digits(token))
        fail(ErrorKind::Format, std::string("malformed header: bad ") + what);
    const unsigned long value = std::stoul(token);
    if (value == 0) fail(ErrorKind::Format, std::string("malformed header: zero ") + what);
    return value;
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
    const std::string magic = next_header_token(in);
    if (magic != "P2" && magic != "P5") fail(ErrorKind::Format, "malformed header: not a P2/P5 PGM");
    const std::size_t width = parse_dimension(next_header_token(in), "width");
    const std::size_t height = parse_dimension(next_header_token(in), "height");
    const std::string maxval = next_header_token(in);
    if (!is_digits(maxval))
        fail(ErrorKind::Format, "malformed header: bad maxval");
    if (maxval != "255") fail(ErrorKind::Format, "unsupported maxval " + maxval + " (expected 255)");

    const std::size_t count = width * height;
    std::vector<double> pixels;
    pixels.reserve(count);
    if (magic == "P5") {
        // Exactly one whitespace byte separates the header from the raster;
        // next_header_token already consumed it.
        std::vector<char> raw(count);
        in.read(raw.data(), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) fail(ErrorKind::Format, "truncated payload");
        for (char c : raw) pixels.push_back(static_cast<unsigned char>(c));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::string token = next_header_token(in);
            if (token.empty()) fail(ErrorKind::Format, "truncated payload");
            if (!is_digits(token))
                fail(ErrorKind::Format, "malformed payload value '" + token + "'");
            const unsigned long value = std::stoul(token);
            if (value > 255) fail(ErrorKind::Format, "payload value exceeds maxval");
            pixels.push_back(static_cast<double>(value));
        }
    }
    return GrayImage(width, height, std::move(pixels));
}

GrayImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    return read_pgm(in);
}

std::uint8_t quantize_pixel(double value) noexcept {
    if (!(value >= 0.0)) return 0;  // also catches NaN
    const double rounded = std::floor(value + 0.5);
    return static_cast<std::uint8_t>(std::min(rounded, 255.0));
}

void write_pgm(const GrayImage& img, std::ostream& out) {
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    std::string raster(img.size(), '\0');
    std::transform(img.pixels().begin(), img.pixels().end(), raster.begin(),
                   [](double v) { return static_cast<char>(quantize_pixel(v)); });
    out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    write_pgm(img, out);
    if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace rbepwt
