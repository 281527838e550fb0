#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rbepwt/image.hpp"
#include "rbepwt/paths.hpp"
#include "rbepwt/segmentation.hpp"
#include "rbepwt/wavelet.hpp"

namespace rbepwt {

enum class PathMode : std::uint8_t { Easy = 0, Grad = 1, Epwt = 2 };

std::string_view path_mode_name(PathMode mode) noexcept;
PathMode parse_path_mode(std::string_view name);

struct PathFinderKind {
    PathMode mode = PathMode::Easy;
    Distance distance = Distance::Euclidean;

    friend bool operator==(const PathFinderKind&, const PathFinderKind&) = default;
};

// Path position -> index into the row-major point list of that level.
using Permutation = std::vector<std::uint32_t>;

/// Address of one coefficient. Level 0 is the lowest-level approximation
/// vector; level l >= 1 is the detail vector of level l (level L is the
/// finest). Ordering (level, index) is the canonical coefficient order.
struct CoeffId {
    std::size_t level = 0;
    std::size_t index = 0;

    friend auto operator<=>(const CoeffId&, const CoeffId&) = default;
};

struct EncodedImage {
    PathFinderKind kind;
    WaveletKind bank = WaveletKind::Haar;
    std::size_t levels = 0;
    std::size_t width = 0;
    std::size_t height = 0;
    LabelMap labels;
    std::vector<RegionGradient> gradients;     // one per label, grad mode only
    std::optional<std::vector<std::uint8_t>> support;  // row-major 0/1 mask; empty = whole grid
    std::vector<double> approx_lowest;
    std::vector<std::vector<double>> details;  // details[l-1] belongs to level l
    std::vector<Permutation> stored_perms;     // stored_perms[l-1], epwt mode only

    std::size_t coefficient_count() const noexcept;
    std::size_t support_size() const noexcept;

    const std::vector<double>& vector_at(std::size_t level) const;
    std::vector<double>& vector_at(std::size_t level);
    double coefficient(CoeffId id) const;
    double& coefficient(CoeffId id);
    bool valid(CoeffId id) const noexcept;

    // Coefficients in canonical order, and the inverse.
    std::vector<double> flatten() const;
    void assign_flat(std::span<const double> values);
    CoeffId id_of_flat(std::size_t flat) const;
    std::size_t flat_of(CoeffId id) const;

    friend bool operator==(const EncodedImage&, const EncodedImage&) = default;
};

// floor(log2(point_count)); equals 2 log2(N) for N x N power-of-two images.
std::size_t max_levels(std::size_t point_count) noexcept;

// Point counts per level: result[l-1] = |I^l|.
std::vector<std::size_t> level_sizes(std::size_t support_size, std::size_t levels);

struct EncodeOptions {
    std::optional<std::vector<std::uint8_t>> support;
};

/// Multi-level transform along region paths (easy/grad) or data-driven
/// paths (epwt). For epwt the label map is carried but ignored.
EncodedImage encode(const GrayImage& img, const LabelMap& lm, PathFinderKind kind, WaveletKind bank,
                    std::size_t levels, const EncodeOptions& options = {});

struct TracedEncoding {
    EncodedImage encoded;
    std::vector<Permutation> perms;  // perms[l-1], as used while encoding
};

TracedEncoding encode_traced(const GrayImage& img, const LabelMap& lm, PathFinderKind kind, WaveletKind bank,
                             std::size_t levels, const EncodeOptions& options = {});

GrayImage decode(const EncodedImage& enc);

/// Rebuilds every level's permutation from geometry alone (label map, support,
/// stored gradients). Not available for epwt, whose paths depend on data.
std::vector<Permutation> recompute_paths(const LabelMap& lm, PathFinderKind kind, std::size_t levels,
                                         std::span<const RegionGradient> gradients,
                                         const std::optional<std::vector<std::uint8_t>>& support = std::nullopt);

// Stored permutations for epwt, recomputed ones otherwise.
std::vector<Permutation> level_permutations(const EncodedImage& enc);

// Row-major point lists per level: result[l-1] = I^l.
std::vector<PointSet> level_points(const EncodedImage& enc, std::span<const Permutation> perms);

// The level-l path as coordinates.
PointPath level_path(const EncodedImage& enc, std::size_t level);

// Throws Error{Format} when lengths or metadata are inconsistent.
void validate(const EncodedImage& enc);

}  // namespace rbepwt
