#include "rbepwt/codec.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "rbepwt/error.hpp"

namespace rbepwt {

std::string_view path_mode_name(PathMode mode) noexcept {
    switch (mode) {
        case PathMode::Easy: return "easy";
        case PathMode::Grad: return "grad";
        case PathMode::Epwt: return "epwt";
    }
    return "?";
}

PathMode parse_path_mode(std::string_view name) {
    if (name == "easy") return PathMode::Easy;
    if (name == "grad") return PathMode::Grad;
    if (name == "epwt") return PathMode::Epwt;
    fail(ErrorKind::InvalidArgument, "unknown path mode '" + std::string(name) + "'");
}

std::size_t EncodedImage::coefficient_count() const noexcept {
    std::size_t n = approx_lowest.size();
    for (const auto& d : details) n += d.size();
    return n;
}

std::size_t EncodedImage::support_size() const noexcept {
    if (!support) return width * height;
    return static_cast<std::size_t>(std::count(support->begin(), support->end(), std::uint8_t{1}));
}

const std::vector<double>& EncodedImage::vector_at(std::size_t level) const {
    if (level > details.size()) fail(ErrorKind::InvalidArgument, "coefficient level out of range");
    return level == 0 ? approx_lowest : details[level - 1];
}

std::vector<double>& EncodedImage::vector_at(std::size_t level) {
    if (level > details.size()) fail(ErrorKind::InvalidArgument, "coefficient level out of range");
    return level == 0 ? approx_lowest : details[level - 1];
}

bool EncodedImage::valid(CoeffId id) const noexcept {
    return id.level <= details.size() && id.index < (id.level == 0 ? approx_lowest : details[id.level - 1]).size();
}

double EncodedImage::coefficient(CoeffId id) const {
    if (!valid(id)) fail(ErrorKind::InvalidArgument, "invalid coefficient id");
    return vector_at(id.level)[id.index];
}

double& EncodedImage::coefficient(CoeffId id) {
    if (!valid(id)) fail(ErrorKind::InvalidArgument, "invalid coefficient id");
    return vector_at(id.level)[id.index];
}

std::vector<double> EncodedImage::flatten() const {
    std::vector<double> flat(approx_lowest);
    for (const auto& d : details) flat.insert(flat.end(), d.begin(), d.end());
    return flat;
}

void EncodedImage::assign_flat(std::span<const double> values) {
    if (values.size() != coefficient_count()) fail(ErrorKind::InvalidArgument, "flat coefficient count mismatch");
    auto it = values.begin();
    for (std::size_t level = 0; level <= details.size(); ++level) {
        auto& v = vector_at(level);
        std::copy(it, it + static_cast<std::ptrdiff_t>(v.size()), v.begin());
        it += static_cast<std::ptrdiff_t>(v.size());
    }
}

CoeffId EncodedImage::id_of_flat(std::size_t flat) const {
    for (std::size_t level = 0; level <= details.size(); ++level) {
        const std::size_t n = vector_at(level).size();
        if (flat < n) return {level, flat};
        flat -= n;
    }
    fail(ErrorKind::InvalidArgument, "flat coefficient index out of range");
}

std::size_t EncodedImage::flat_of(CoeffId id) const {
    if (!valid(id)) fail(ErrorKind::InvalidArgument, "invalid coefficient id");
    std::size_t flat = id.index;
    for (std::size_t level = 0; level < id.level; ++level) flat += vector_at(level).size();
    return flat;
}

std::size_t max_levels(std::size_t point_count) noexcept {
    return point_count == 0 ? 0 : static_cast<std::size_t>(std::bit_width(point_count) - 1);
}

std::vector<std::size_t> level_sizes(std::size_t support_size, std::size_t levels) {
    std::vector<std::size_t> sizes(levels);
    std::size_t n = support_size;
    for (std::size_t l = levels; l >= 1; --l) {
        sizes[l - 1] = n;
        n = (n + 1) / 2;
    }
    return sizes;
}

namespace {

struct Domain {
    PointSet points;                   // I^L, row-major
    std::vector<std::uint32_t> labels;  // aligned to points
};

Domain make_domain(const LabelMap& lm, const std::optional<std::vector<std::uint8_t>>& support) {
    if (support && support->size() != lm.size())
        fail(ErrorKind::InvalidArgument, "support mask size does not match the label map");
    Domain d;
    for (std::size_t i = 0; i < lm.size(); ++i) {
        if (support && (*support)[i] == 0) continue;
        if (support && (*support)[i] != 1) fail(ErrorKind::InvalidArgument, "support mask entries must be 0 or 1");
        d.points.push_back(coord_of_rank(i, lm.width()));
        d.labels.push_back(lm.labels()[i]);
    }
    return d;
}

void check_levels(std::size_t levels, std::size_t point_count) {
    if (levels == 0) fail(ErrorKind::Precondition, "at least one level is required");
    if (levels > max_levels(point_count))
        fail(ErrorKind::Precondition, "too many levels: 2^" + std::to_string(levels) + " exceeds " +
                                          std::to_string(point_count) + " points");
}

std::uint32_t index_of(const PointSet& points, Coord c) {
    return static_cast<std::uint32_t>(std::lower_bound(points.begin(), points.end(), c) - points.begin());
}

// Glued region paths over the current level's points, as canonical indices.
Permutation region_path(const PointSet& points, const std::vector<std::uint32_t>& labels, std::uint32_t region_count,
                        PathFinderKind kind, std::span<const RegionGradient> gradients) {
    std::vector<PointSet> regions(region_count);
    for (std::size_t i = 0; i < points.size(); ++i) regions[labels[i]].push_back(points[i]);
    Permutation perm;
    perm.reserve(points.size());
    for (std::uint32_t label = 0; label < region_count; ++label) {
        const PointSet& region = regions[label];
        if (region.empty()) continue;
        const PointPath path = kind.mode == PathMode::Grad ? grad_path(region, gradients[label], kind.distance)
                                                           : easy_path(region, kind.distance);
        for (Coord c : path) perm.push_back(index_of(points, c));
    }
    return perm;
}

// Canonical indices kept by decimation, and the next level's points and labels.
struct Decimated {
    std::vector<std::uint32_t> kept_rank;  // path position 2k -> index in the next level
    PointSet points;
    std::vector<std::uint32_t> labels;
};

Decimated decimate_level(const Permutation& perm, const PointSet& points, const std::vector<std::uint32_t>& labels) {
    std::vector<std::uint32_t> kept;
    kept.reserve((perm.size() + 1) / 2);
    for (std::size_t k = 0; k < perm.size(); k += 2) kept.push_back(perm[k]);
    std::vector<std::uint32_t> sorted = kept;
    std::sort(sorted.begin(), sorted.end());

    Decimated out;
    out.kept_rank.reserve(kept.size());
    for (std::uint32_t idx : kept)
        out.kept_rank.push_back(static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), idx) - sorted.begin()));
    out.points.reserve(sorted.size());
    for (std::uint32_t idx : sorted) {
        if (!points.empty()) out.points.push_back(points[idx]);
        if (!labels.empty()) out.labels.push_back(labels[idx]);
    }
    return out;
}

std::vector<std::uint32_t> kept_ranks(const Permutation& perm) {
    return decimate_level(perm, {}, {}).kept_rank;
}

}  // namespace

TracedEncoding encode_traced(const GrayImage& img, const LabelMap& lm, PathFinderKind kind, WaveletKind bank,
                             std::size_t levels, const EncodeOptions& options) {
    if (img.width() != lm.width() || img.height() != lm.height())
        fail(ErrorKind::InvalidArgument, "label map dimensions do not match the image");
    if (img.width() > 0xFFFF || img.height() > 0xFFFF) fail(ErrorKind::Precondition, "image dimensions exceed 65535");
    Domain domain = make_domain(lm, options.support);
    check_levels(levels, domain.points.size());
    const FilterBank& fb = filter_bank(bank);

    TracedEncoding out;
    EncodedImage& enc = out.encoded;
    enc.kind = kind;
    enc.bank = bank;
    enc.levels = levels;
    enc.width = img.width();
    enc.height = img.height();
    enc.labels = lm;
    enc.support = options.support;
    enc.details.resize(levels);
    out.perms.resize(levels);

    if (kind.mode == PathMode::Grad) {
        std::vector<PointSet> regions(lm.region_count());
        for (std::size_t i = 0; i < domain.points.size(); ++i) regions[domain.labels[i]].push_back(domain.points[i]);
        enc.gradients.reserve(regions.size());
        for (const PointSet& region : regions)
            enc.gradients.push_back(region.empty() ? RegionGradient{} : compute_region_gradient(img, region));
    }

    PointSet points = std::move(domain.points);
    std::vector<std::uint32_t> labels = std::move(domain.labels);
    std::vector<double> values(points.size());  // f^l, row-major over points
    for (std::size_t i = 0; i < points.size(); ++i) values[i] = img.at(points[i]);

    for (std::size_t level = levels; level >= 1; --level) {
        Permutation perm = kind.mode == PathMode::Epwt
                               ? [&] {
                                     const PointPath path = epwt_path(points, values, kind.distance);
                                     Permutation p;
                                     p.reserve(path.size());
                                     for (Coord c : path) p.push_back(index_of(points, c));
                                     return p;
                                 }()
                               : region_path(points, labels, lm.region_count(), kind, enc.gradients);

        std::vector<double> signal(perm.size());
        for (std::size_t k = 0; k < perm.size(); ++k) signal[k] = values[perm[k]];
        CoeffPair cp = dwt_periodic(signal, fb);
        enc.details[level - 1] = std::move(cp.detail);

        Decimated next = decimate_level(perm, points, labels);
        values.assign(next.points.size(), 0.0);
        for (std::size_t k = 0; k < cp.approx.size(); ++k) values[next.kept_rank[k]] = cp.approx[k];
        points = std::move(next.points);
        labels = std::move(next.labels);
        out.perms[level - 1] = std::move(perm);
        if (level == 1) enc.approx_lowest = std::move(cp.approx);
    }
    if (kind.mode == PathMode::Epwt) enc.stored_perms = out.perms;
    return out;
}

EncodedImage encode(const GrayImage& img, const LabelMap& lm, PathFinderKind kind, WaveletKind bank,
                    std::size_t levels, const EncodeOptions& options) {
    return encode_traced(img, lm, kind, bank, levels, options).encoded;
}

std::vector<Permutation> recompute_paths(const LabelMap& lm, PathFinderKind kind, std::size_t levels,
                                         std::span<const RegionGradient> gradients,
                                         const std::optional<std::vector<std::uint8_t>>& support) {
    if (kind.mode == PathMode::Epwt)
        fail(ErrorKind::Precondition, "epwt paths depend on gray values and cannot be recomputed");
    if (kind.mode == PathMode::Grad && gradients.size() != lm.region_count())
        fail(ErrorKind::InvalidArgument, "grad mode needs one gradient per region");
    Domain domain = make_domain(lm, support);
    check_levels(levels, domain.points.size());

    std::vector<Permutation> perms(levels);
    PointSet points = std::move(domain.points);
    std::vector<std::uint32_t> labels = std::move(domain.labels);
    for (std::size_t level = levels; level >= 1; --level) {
        Permutation perm = region_path(points, labels, lm.region_count(), kind, gradients);
        Decimated next = decimate_level(perm, points, labels);
        points = std::move(next.points);
        labels = std::move(next.labels);
        perms[level - 1] = std::move(perm);
    }
    return perms;
}

std::vector<Permutation> level_permutations(const EncodedImage& enc) {
    if (enc.kind.mode == PathMode::Epwt) return enc.stored_perms;
    return recompute_paths(enc.labels, enc.kind, enc.levels, enc.gradients, enc.support);
}

void validate(const EncodedImage& enc) {
    auto corrupt = [](const std::string& what) { fail(ErrorKind::Format, "corrupt stream: " + what); };
    if (enc.width == 0 || enc.height == 0) corrupt("zero image dimension");
    if (enc.labels.width() != enc.width || enc.labels.height() != enc.height) corrupt("label map dimensions");
    if (enc.support && enc.support->size() != enc.width * enc.height) corrupt("support mask size");
    const std::size_t n = enc.support_size();
    if (enc.levels == 0 || enc.levels > max_levels(n)) corrupt("level count");
    if (enc.details.size() != enc.levels) corrupt("detail vector count");
    const std::vector<std::size_t> sizes = level_sizes(n, enc.levels);
    for (std::size_t l = 1; l <= enc.levels; ++l)
        if (enc.details[l - 1].size() != sizes[l - 1] / 2) corrupt("detail length at level " + std::to_string(l));
    if (enc.approx_lowest.size() != (sizes[0] + 1) / 2) corrupt("approximation length");
    const std::size_t expected_gradients = enc.kind.mode == PathMode::Grad ? enc.labels.region_count() : 0;
    if (enc.gradients.size() != expected_gradients) corrupt("gradient count");
    if ((enc.kind.mode == PathMode::Epwt) != !enc.stored_perms.empty()) corrupt("permutations present iff epwt mode");
    if (enc.kind.mode == PathMode::Epwt) {
        if (enc.stored_perms.size() != enc.levels) corrupt("permutation count");
        for (std::size_t l = 1; l <= enc.levels; ++l) {
            const Permutation& p = enc.stored_perms[l - 1];
            if (p.size() != sizes[l - 1]) corrupt("permutation length at level " + std::to_string(l));
            std::vector<bool> seen(p.size(), false);
            for (std::uint32_t v : p) {
                if (v >= p.size() || seen[v]) corrupt("permutation at level " + std::to_string(l) + " is not a bijection");
                seen[v] = true;
            }
        }
    }
}

GrayImage decode(const EncodedImage& enc) {
    validate(enc);
    const FilterBank& fb = filter_bank(enc.bank);
    const std::vector<Permutation> perms = level_permutations(enc);

    std::vector<double> approx = enc.approx_lowest;
    std::vector<double> values;
    for (std::size_t level = 1; level <= enc.levels; ++level) {
        const Permutation& perm = perms[level - 1];
        const std::vector<double> signal = idwt_periodic({approx, enc.details[level - 1]}, fb, perm.size());
        values.assign(perm.size(), 0.0);
        for (std::size_t k = 0; k < perm.size(); ++k) values[perm[k]] = signal[k];
        if (level < enc.levels) {
            const std::vector<std::uint32_t> ranks = kept_ranks(perms[level]);
            approx.resize(ranks.size());
            for (std::size_t k = 0; k < ranks.size(); ++k) approx[k] = values[ranks[k]];
        }
    }

    GrayImage out(enc.width, enc.height, 0.0);
    std::size_t next = 0;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!enc.support || (*enc.support)[i] == 1) out.pixels()[i] = values[next++];
    return out;
}

std::vector<PointSet> level_points(const EncodedImage& enc, std::span<const Permutation> perms) {
    if (perms.size() != enc.levels) fail(ErrorKind::InvalidArgument, "one permutation per level expected");
    std::vector<PointSet> out(enc.levels);
    out[enc.levels - 1] = make_domain(enc.labels, enc.support).points;
    for (std::size_t level = enc.levels; level >= 2; --level)
        out[level - 2] = decimate_level(perms[level - 1], out[level - 1], {}).points;
    return out;
}

PointPath level_path(const EncodedImage& enc, std::size_t level) {
    if (level == 0 || level > enc.levels) fail(ErrorKind::InvalidArgument, "level out of range");
    const std::vector<Permutation> perms = level_permutations(enc);
    const std::vector<PointSet> points = level_points(enc, perms);
    PointPath path;
    for (std::uint32_t idx : perms[level - 1]) path.points.push_back(points[level - 1][idx]);
    return path;
}

}  // namespace rbepwt
