#include "rbepwt/roi.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "rbepwt/error.hpp"

namespace rbepwt {

bool AncestorSet::contains(CoeffId id) const { return std::binary_search(ids.begin(), ids.end(), id); }

void require_roi_capable(const EncodedImage& enc) {
    if (enc.bank != WaveletKind::Haar)
        fail(ErrorKind::Precondition, "region-of-interest coding is only defined for the Haar wavelet");
    if (enc.width != enc.height || !std::has_single_bit(enc.width))
        fail(ErrorKind::Precondition, "region-of-interest coding needs a square power-of-two image");
    if (enc.support) fail(ErrorKind::Precondition, "region-of-interest coding needs a full-grid encoding");
    if (enc.levels != max_levels(enc.width * enc.height))
        fail(ErrorKind::Precondition, "region-of-interest coding needs the full number of levels (" +
                                          std::to_string(max_levels(enc.width * enc.height)) + ")");
}

AncestorSet ancestors_of_pixels(const EncodedImage& enc, std::span<const std::size_t> pixels) {
    require_roi_capable(enc);
    const std::vector<Permutation> perms = level_permutations(enc);

    auto inverse = [](const Permutation& p) {
        std::vector<std::uint32_t> inv(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) inv[p[k]] = static_cast<std::uint32_t>(k);
        return inv;
    };

    // Path positions at the current level; without a mask the level-L point
    // index is the pixel's row-major rank.
    const std::vector<std::uint32_t> top = inverse(perms[enc.levels - 1]);
    std::vector<std::size_t> positions;
    for (std::size_t px : pixels) {
        if (px >= top.size()) fail(ErrorKind::InvalidArgument, "pixel outside the image");
        positions.push_back(top[px]);
    }

    AncestorSet out;
    for (std::size_t level = enc.levels; level >= 1; --level) {
        std::vector<std::size_t> parents;
        parents.reserve(positions.size());
        for (std::size_t j : positions) parents.push_back(j / 2);
        std::sort(parents.begin(), parents.end());
        parents.erase(std::unique(parents.begin(), parents.end()), parents.end());

        for (std::size_t k : parents) out.ids.push_back({level, k});
        if (level == 1) {
            for (std::size_t k : parents) out.ids.push_back({0, k});
            break;
        }
        // Approximation k lives on at point perm[2k], i.e. at its next-level position.
        const Permutation& perm = perms[level - 1];
        std::vector<std::uint32_t> kept(perm.size() / 2 + perm.size() % 2);
        for (std::size_t k = 0; k < kept.size(); ++k) kept[k] = perm[2 * k];
        std::vector<std::uint32_t> sorted = kept;
        std::sort(sorted.begin(), sorted.end());
        const std::vector<std::uint32_t> below = inverse(perms[level - 2]);
        positions.clear();
        for (std::size_t k : parents) {
            const auto rank = std::lower_bound(sorted.begin(), sorted.end(), kept[k]) - sorted.begin();
            positions.push_back(below[static_cast<std::size_t>(rank)]);
        }
    }
    std::sort(out.ids.begin(), out.ids.end());
    return out;
}

AncestorSet ancestors(const EncodedImage& enc, std::span<const std::uint32_t> roi_labels) {
    for (std::uint32_t label : roi_labels)
        if (label >= enc.labels.region_count())
            fail(ErrorKind::InvalidArgument, "unknown region label " + std::to_string(label));
    std::vector<bool> wanted(enc.labels.region_count(), false);
    for (std::uint32_t label : roi_labels) wanted[label] = true;
    std::vector<std::size_t> pixels;
    for (std::size_t i = 0; i < enc.labels.size(); ++i)
        if (wanted[enc.labels.labels()[i]]) pixels.push_back(i);
    return ancestors_of_pixels(enc, pixels);
}

namespace {

void check_fraction(double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) fail(ErrorKind::InvalidArgument, "fractions must lie in [0, 1]");
}

}  // namespace

std::size_t fraction_count(double fraction, std::size_t count) {
    check_fraction(fraction);
    const double raw = std::ceil(fraction * static_cast<double>(count) - 1e-9);
    return std::min(count, static_cast<std::size_t>(std::max(raw, 0.0)));
}

EncodedImage roi_threshold(const EncodedImage& enc, std::span<const std::uint32_t> roi_labels,
                           double roi_fraction, double rest_fraction) {
    check_fraction(roi_fraction);
    check_fraction(rest_fraction);
    const std::size_t n = enc.coefficient_count();
    const AncestorSet anc = ancestors(enc, roi_labels);

    const std::vector<double> flat = enc.flatten();
    std::vector<bool> in_roi(n, false);
    for (CoeffId id : anc.ids) in_roi[enc.flat_of(id)] = true;
    std::vector<std::size_t> group_a, group_b;
    for (std::size_t i = 0; i < n; ++i) (in_roi[i] ? group_a : group_b).push_back(i);

    std::vector<double> kept(n, 0.0);
    auto keep_largest = [&](std::vector<std::size_t>& group, double fraction) {
        const std::size_t count = fraction_count(fraction, group.size());
        std::stable_sort(group.begin(), group.end(),
                         [&](std::size_t x, std::size_t y) { return std::abs(flat[x]) > std::abs(flat[y]); });
        for (std::size_t i = 0; i < count; ++i) kept[group[i]] = flat[group[i]];
    };
    keep_largest(group_a, roi_fraction);
    keep_largest(group_b, rest_fraction);

    EncodedImage out = enc;
    out.assign_flat(kept);
    return out;
}

EncodedImage keep_ancestors_only(const EncodedImage& enc, std::span<const std::uint32_t> roi_labels) {
    const AncestorSet anc = ancestors(enc, roi_labels);
    std::vector<double> flat = enc.flatten();
    std::vector<double> kept(flat.size(), 0.0);
    for (CoeffId id : anc.ids) {
        const std::size_t i = enc.flat_of(id);
        kept[i] = flat[i];
    }
    EncodedImage out = enc;
    out.assign_flat(kept);
    return out;
}

}  // namespace rbepwt
