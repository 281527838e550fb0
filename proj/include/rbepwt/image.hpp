#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace rbepwt {

struct Coord {
    std::uint32_t row = 0;
    std::uint32_t col = 0;

    // Row-major order.
    friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

// Sorted row-major, no duplicates.
using PointSet = std::vector<Coord>;

constexpr std::size_t row_major_rank(Coord c, std::size_t width) noexcept {
    return static_cast<std::size_t>(c.row) * width + c.col;
}

constexpr Coord coord_of_rank(std::size_t rank, std::size_t width) noexcept {
    return {static_cast<std::uint32_t>(rank / width), static_cast<std::uint32_t>(rank % width)};
}

bool is_canonical(const PointSet& points);

/// Rectangular grid of real-valued gray levels, stored row-major.
///
/// Codec inputs live in [0, 255]; decoded or intermediate images may leave
/// that range and are only clamped when written out.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height, double fill = 0.0);
    GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    double& operator()(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }
    double operator()(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
    double& at(Coord c) { return pixels_[row_major_rank(c, width_)]; }
    double at(Coord c) const { return pixels_[row_major_rank(c, width_)]; }

    const std::vector<double>& pixels() const noexcept { return pixels_; }
    std::vector<double>& pixels() noexcept { return pixels_; }

    bool contains(Coord c) const noexcept { return c.row < height_ && c.col < width_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> pixels_;
};

// PGM (P2 or P5, maxval 255). Throws Error{Format} on malformed headers,
// unsupported maxval or a short payload.
GrayImage read_pgm(std::istream& in);
GrayImage load_image(const std::filesystem::path& path);

// Writes binary P5; values are rounded half-up and clamped to [0, 255].
void write_pgm(const GrayImage& img, std::ostream& out);
void save_image(const GrayImage& img, const std::filesystem::path& path);

std::uint8_t quantize_pixel(double value) noexcept;

}  // namespace rbepwt
