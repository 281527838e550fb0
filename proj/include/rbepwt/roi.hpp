#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rbepwt/codec.hpp"

namespace rbepwt {

/// Coefficients influenced by a set of pixels, sorted in canonical order.
/// Closed under the parent relation of the Haar coefficient tree.
struct AncestorSet {
    std::vector<CoeffId> ids;

    std::size_t size() const noexcept { return ids.size(); }
    bool contains(CoeffId id) const;
};

// Throws Error{Precondition} unless enc is a full-depth Haar encoding of a
// square power-of-two image without a support mask.
void require_roi_capable(const EncodedImage& enc);

AncestorSet ancestors(const EncodedImage& enc, std::span<const std::uint32_t> roi_labels);

// Pixel-set variant; `pixels` are row-major ranks.
AncestorSet ancestors_of_pixels(const EncodedImage& enc, std::span<const std::size_t> pixels);

/// Keeps the ceil(roi_fraction |A|) largest coefficients of the ROI ancestors A
/// and the ceil(rest_fraction |B|) largest of the remaining ones B; zeroes the rest.
EncodedImage roi_threshold(const EncodedImage& enc, std::span<const std::uint32_t> roi_labels,
                           double roi_fraction, double rest_fraction);

EncodedImage keep_ancestors_only(const EncodedImage& enc, std::span<const std::uint32_t> roi_labels);

// ceil(fraction * count), forgiving floating-point noise just above an integer.
std::size_t fraction_count(double fraction, std::size_t count);

}  // namespace rbepwt
