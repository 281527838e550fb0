#include "rbepwt/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "rbepwt/error.hpp"

namespace rbepwt {

LabelMap::LabelMap(std::size_t width, std::size_t height, std::vector<std::uint32_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
    if (width == 0 || height == 0) fail(ErrorKind::InvalidArgument, "label map must be non-empty");
    if (labels_.size() != width * height)
        fail(ErrorKind::InvalidArgument, "label count does not match label map dimensions");
    const std::uint32_t max_label = *std::max_element(labels_.begin(), labels_.end());
    std::vector<bool> seen(static_cast<std::size_t>(max_label) + 1, false);
    for (std::uint32_t l : labels_) seen[l] = true;
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        fail(ErrorKind::InvalidArgument, "labels are not contiguous from 0");
    region_count_ = max_label + 1;
}

LabelMap LabelMap::single_region(std::size_t width, std::size_t height) {
    return LabelMap(width, height, std::vector<std::uint32_t>(width * height, 0));
}

LabelMap canonicalize_labels(std::size_t width, std::size_t height, const std::vector<std::uint32_t>& raw) {
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    std::vector<std::uint32_t> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(raw[i], static_cast<std::uint32_t>(remap.size()));
        out[i] = it->second;
    }
    return LabelMap(width, height, std::move(out));
}

Tau Tau::scale_over_size(double k) {
    return Tau{[k](const ComponentStats& c) { return k / static_cast<double>(c.size); }, false};
}

Tau Tau::area_over_perimeter() {
    return Tau{[](const ComponentStats& c) {
                   // A component covering the whole grid has no boundary.
                   if (c.perimeter == 0) return std::numeric_limits<double>::infinity();
                   return static_cast<double>(c.size) / static_cast<double>(c.perimeter);
               },
               true};
}

namespace {

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
    const auto period = static_cast<std::ptrdiff_t>(2 * n);
    std::ptrdiff_t m = i % period;
    if (m < 0) m += period;
    if (m >= static_cast<std::ptrdiff_t>(n)) m = period - 1 - m;
    return static_cast<std::size_t>(m);
}

std::vector<double> gaussian_kernel(double sigma) {
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    for (std::ptrdiff_t m = -radius; m <= radius; ++m)
        kernel[static_cast<std::size_t>(m + radius)] = std::exp(-0.5 * static_cast<double>(m * m) / (sigma * sigma));
    const double total = std::accumulate(kernel.begin(), kernel.end(), 0.0);
    for (double& k : kernel) k /= total;
    return kernel;
}

}  // namespace

GrayImage gaussian_smooth(const GrayImage& img, double sigma) {
    if (sigma < 0.0) fail(ErrorKind::InvalidArgument, "sigma must be non-negative");
    if (sigma == 0.0) return img;

    const std::vector<double> kernel = gaussian_kernel(sigma);
    const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    const std::size_t w = img.width();
    const std::size_t h = img.height();

    GrayImage rows(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double acc = 0.0;
            for (std::ptrdiff_t m = -radius; m <= radius; ++m)
                acc += kernel[static_cast<std::size_t>(m + radius)] *
                       img(r, reflect_index(static_cast<std::ptrdiff_t>(c) + m, w));
            rows(r, c) = acc;
        }
    }
    GrayImage out(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double acc = 0.0;
            for (std::ptrdiff_t m = -radius; m <= radius; ++m)
                acc += kernel[static_cast<std::size_t>(m + radius)] *
                       rows(reflect_index(static_cast<std::ptrdiff_t>(r) + m, h), c);
            out(r, c) = acc;
        }
    }
    return out;
}

std::vector<WeightedEdge> build_graph(const GrayImage& img) {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    std::vector<WeightedEdge> edges;
    if (w == 0 || h == 0) return edges;
    edges.reserve(4 * w * h);
    auto add = [&](Coord a, Coord b) { edges.push_back({a, b, std::abs(img.at(a) - img.at(b))}); };
    for (std::uint32_t r = 0; r < h; ++r) {
        for (std::uint32_t c = 0; c < w; ++c) {
            const Coord p{r, c};
            if (c + 1 < w) add(p, {r, c + 1});
            if (r + 1 < h) {
                if (c > 0) add(p, {r + 1, c - 1});
                add(p, {r + 1, c});
                if (c + 1 < w) add(p, {r + 1, c + 1});
            }
        }
    }
    return edges;
}

void sort_edges(std::vector<WeightedEdge>& edges, std::size_t width) {
    std::sort(edges.begin(), edges.end(), [width](const WeightedEdge& x, const WeightedEdge& y) {
        if (x.w != y.w) return x.w < y.w;
        const auto xa = row_major_rank(x.a, width), ya = row_major_rank(y.a, width);
        if (xa != ya) return xa < ya;
        return row_major_rank(x.b, width) < row_major_rank(y.b, width);
    });
}

namespace {

class DisjointSets {
public:
    DisjointSets(std::size_t width, std::size_t height, bool track_perimeter)
        : parent_(width * height), size_(width * height, 1), internal_(width * height, 0.0),
          track_perimeter_(track_perimeter) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
        if (!track_perimeter_) return;
        perimeter_.assign(width * height, 0);
        adjacency_.resize(width * height);
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                const std::size_t i = r * width + c;
                auto link = [&](std::size_t j) {
                    adjacency_[i][j] = 1;
                    ++perimeter_[i];
                };
                if (c > 0) link(i - 1);
                if (c + 1 < width) link(i + 1);
                if (r > 0) link(i - width);
                if (r + 1 < height) link(i + width);
            }
        }
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    ComponentStats stats(std::size_t root) const {
        return {size_[root], track_perimeter_ ? perimeter_[root] : 0};
    }
    double internal(std::size_t root) const { return internal_[root]; }

    // Joins two distinct roots through an edge of weight w; returns the new root.
    std::size_t join(std::size_t a, std::size_t b, double w) {
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        internal_[a] = std::max({internal_[a], internal_[b], w});
        if (track_perimeter_) merge_adjacency(a, b);
        return a;
    }

private:
    void merge_adjacency(std::size_t keep, std::size_t gone) {
        auto& keep_adj = adjacency_[keep];
        auto& gone_adj = adjacency_[gone];
        std::size_t shared = 0;
        if (auto it = keep_adj.find(gone); it != keep_adj.end()) {
            shared = it->second;
            keep_adj.erase(it);
        }
        gone_adj.erase(keep);
        for (const auto& [neighbour, count] : gone_adj) {
            keep_adj[neighbour] += count;
            auto& other = adjacency_[neighbour];
            other.erase(gone);
            other[keep] += count;
        }
        gone_adj.clear();
        perimeter_[keep] = perimeter_[keep] + perimeter_[gone] - 2 * shared;
    }

    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::vector<double> internal_;
    bool track_perimeter_;
    std::vector<std::size_t> perimeter_;
    std::vector<std::unordered_map<std::size_t, std::size_t>> adjacency_;
};

}  // namespace

SegmentationDetail fh_segment_detailed(const GrayImage& img, const SegParams& params, const Tau& tau) {
    if (params.k < 0.0 || params.sigma < 0.0) fail(ErrorKind::InvalidArgument, "segmentation parameters must be non-negative");
    if (img.empty()) fail(ErrorKind::InvalidArgument, "cannot segment an empty image");

    const std::size_t w = img.width();
    const std::size_t h = img.height();
    std::vector<WeightedEdge> edges = build_graph(gaussian_smooth(img, params.sigma));
    sort_edges(edges, w);

    DisjointSets sets(w, h, tau.needs_perimeter);
    for (const WeightedEdge& e : edges) {
        const std::size_t ra = sets.find(row_major_rank(e.a, w));
        const std::size_t rb = sets.find(row_major_rank(e.b, w));
        if (ra == rb) continue;
        const double ia = sets.internal(ra) + tau.fn(sets.stats(ra));
        const double ib = sets.internal(rb) + tau.fn(sets.stats(rb));
        if (e.w <= std::min(ia, ib)) sets.join(ra, rb, e.w);
    }

    auto snapshot = [&] {
        std::vector<std::uint32_t> roots(w * h);
        for (std::size_t i = 0; i < roots.size(); ++i) roots[i] = static_cast<std::uint32_t>(sets.find(i));
        return roots;
    };

    SegmentationDetail out;
    const std::vector<std::uint32_t> main_roots = snapshot();
    out.main_pass = canonicalize_labels(w, h, main_roots);
    out.internal_difference.assign(out.main_pass.region_count(), 0.0);
    for (std::size_t i = 0; i < main_roots.size(); ++i)
        out.internal_difference[out.main_pass.labels()[i]] = sets.internal(main_roots[i]);

    if (params.min_size > 0) {
        for (const WeightedEdge& e : edges) {
            const std::size_t ra = sets.find(row_major_rank(e.a, w));
            const std::size_t rb = sets.find(row_major_rank(e.b, w));
            if (ra != rb && (sets.stats(ra).size < params.min_size || sets.stats(rb).size < params.min_size))
                sets.join(ra, rb, e.w);
        }
    }
    out.final = canonicalize_labels(w, h, snapshot());
    return out;
}

LabelMap fh_segment(const GrayImage& img, const SegParams& params, const Tau& tau) {
    return fh_segment_detailed(img, params, tau).final;
}

LabelMap fh_segment(const GrayImage& img, const SegParams& params) {
    return fh_segment(img, params, Tau::scale_over_size(params.k));
}

std::size_t perimeter(const LabelMap& lm) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < lm.height(); ++r) {
        for (std::size_t c = 0; c < lm.width(); ++c) {
            if (c + 1 < lm.width() && lm(r, c) != lm(r, c + 1)) ++count;
            if (r + 1 < lm.height() && lm(r, c) != lm(r + 1, c)) ++count;
        }
    }
    return count;
}

PointSet region_points(const LabelMap& lm, std::uint32_t label) {
    if (label >= lm.region_count())
        fail(ErrorKind::InvalidArgument, "unknown region label " + std::to_string(label));
    PointSet points;
    for (std::size_t i = 0; i < lm.size(); ++i)
        if (lm.labels()[i] == label) points.push_back(coord_of_rank(i, lm.width()));
    return points;
}

std::vector<PointSet> all_region_points(const LabelMap& lm) {
    std::vector<PointSet> regions(lm.region_count());
    for (std::size_t i = 0; i < lm.size(); ++i) regions[lm.labels()[i]].push_back(coord_of_rank(i, lm.width()));
    return regions;
}

void write_label_map(const LabelMap& lm, std::ostream& out) {
    out << "P2-label\n" << lm.width() << ' ' << lm.height() << ' ' << lm.region_count() << '\n';
    for (std::size_t r = 0; r < lm.height(); ++r) {
        for (std::size_t c = 0; c < lm.width(); ++c) out << (c ? " " : "") << lm(r, c);
        out << '\n';
    }
}

namespace {

bool next_token(std::istream& in, std::string& token) {
    while (in >> token) {
        if (token.front() != '#') return true;
        std::string rest;
        std::getline(in, rest);
    }
    return false;
}

std::size_t parse_count(std::istream& in, const char* what) {
    std::string token;
    if (!next_token(in, token)) fail(ErrorKind::Format, std::string("label map truncated before ") + what);
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(token, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != token.size() || token.front() == '-')
        fail(ErrorKind::Format, std::string("label map: bad ") + what + " '" + token + "'");
    return static_cast<std::size_t>(value);
}

}  // namespace

LabelMap read_label_map(std::istream& in) {
    std::string magic;
    if (!next_token(in, magic) || magic != "P2-label") fail(ErrorKind::Format, "label map: bad magic");
    const std::size_t w = parse_count(in, "width");
    const std::size_t h = parse_count(in, "height");
    const std::size_t r = parse_count(in, "region count");
    if (w == 0 || h == 0) fail(ErrorKind::Format, "label map: zero dimension");
    std::vector<std::uint32_t> labels(w * h);
    for (auto& l : labels) {
        const std::size_t v = parse_count(in, "label");
        if (v >= r) fail(ErrorKind::Format, "label map: label exceeds region count");
        l = static_cast<std::uint32_t>(v);
    }
    try {
        LabelMap lm(w, h, std::move(labels));
        if (lm.region_count() != r) fail(ErrorKind::Format, "label map: region count mismatch");
        return lm;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Format) throw;
        fail(ErrorKind::Format, std::string("label map: ") + e.what());
    }
}

void save_label_map(const LabelMap& lm, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    write_label_map(lm, out);
}

LabelMap load_label_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    return read_label_map(in);
}

}  // namespace rbepwt
