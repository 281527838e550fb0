#pragma once

// Test-only fixtures and independent oracles. Nothing here calls into the
// code path it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "rbepwt/codec.hpp"
#include "rbepwt/image.hpp"
#include "rbepwt/paths.hpp"
#include "rbepwt/segmentation.hpp"
#include "rbepwt/wavelet.hpp"

namespace rbepwt::testing {

inline GrayImage random_image(std::size_t w, std::size_t h, std::mt19937& rng, bool integer = false) {
    std::uniform_real_distribution<double> u(0.0, 255.0);
    GrayImage img(w, h);
    for (double& v : img.pixels()) v = integer ? std::floor(u(rng) + 0.5) : u(rng);
    return img;
}

// Nearest-seed (Voronoi) partition with `regions` random seeds.
inline LabelMap random_segmentation(std::size_t w, std::size_t h, std::size_t regions, std::mt19937& rng) {
    std::uniform_int_distribution<std::uint32_t> rr(0, static_cast<std::uint32_t>(h - 1));
    std::uniform_int_distribution<std::uint32_t> rc(0, static_cast<std::uint32_t>(w - 1));
    std::vector<Coord> seeds(regions);
    for (Coord& s : seeds) s = {rr(rng), rc(rng)};
    std::vector<std::uint32_t> raw(w * h);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const Coord p = coord_of_rank(i, w);
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            const std::uint64_t d = distance_key(p, seeds[s], Distance::Euclidean);
            if (d < best) {
                best = d;
                raw[i] = static_cast<std::uint32_t>(s);
            }
        }
    }
    return canonicalize_labels(w, h, raw);
}

// Labels drawn independently per pixel; regions are scattered and disconnected.
inline LabelMap scattered_segmentation(std::size_t w, std::size_t h, std::uint32_t regions, std::mt19937& rng) {
    std::uniform_int_distribution<std::uint32_t> u(0, regions - 1);
    std::vector<std::uint32_t> raw(w * h);
    for (auto& l : raw) l = u(rng);
    return canonicalize_labels(w, h, raw);
}

inline PointSet random_region(std::size_t w, std::size_t h, double density, std::mt19937& rng) {
    std::bernoulli_distribution keep(density);
    PointSet points;
    for (std::uint32_t r = 0; r < h; ++r)
        for (std::uint32_t c = 0; c < w; ++c)
            if (keep(rng)) points.push_back({r, c});
    if (points.empty()) points.push_back({0, 0});
    return points;
}

// Bundled 64x64 cartoon: four constant regions with distinct gray levels.
inline GrayImage cartoon64() { return load_image(std::filesystem::path(RBEPWT_DATA_DIR) / "cartoon64.pgm"); }

// ---- wavelet oracles -------------------------------------------------------

// Dense n x n analysis matrix (approx rows first, then detail rows) built
// straight from the periodic convolution definition.
inline std::vector<std::vector<double>> circulant_analysis(const FilterBank& fb, std::size_t n) {
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    auto add_row = [&](std::vector<double>& row, const Filter& f, std::size_t k) {
        for (std::size_t i = 0; i < f.taps.size(); ++i) {
            long idx = static_cast<long>(2 * k) + f.offset + static_cast<long>(i);
            idx = ((idx % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
            row[static_cast<std::size_t>(idx)] += f.taps[i];
        }
    };
    for (std::size_t k = 0; k < n / 2; ++k) {
        add_row(m[k], fb.analysis_low, k);
        add_row(m[n / 2 + k], fb.analysis_high, k);
    }
    return m;
}

inline std::vector<double> mat_vec(const std::vector<std::vector<double>>& m, const std::vector<double>& x) {
    std::vector<double> y(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
    return y;
}

// ---- path oracles ----------------------------------------------------------

inline std::uint64_t oracle_distance(Coord a, Coord b, Distance metric) {
    const long long dr = static_cast<long long>(a.row) - b.row;
    const long long dc = static_cast<long long>(a.col) - b.col;
    if (metric == Distance::Chebyshev) return static_cast<std::uint64_t>(std::max(std::llabs(dr), std::llabs(dc)));
    return static_cast<std::uint64_t>(dr * dr + dc * dc);
}

// Literal O(n^2) transcription of the easy-path greedy walk.
inline std::vector<Coord> easy_path_oracle(PointSet region, Distance metric) {
    std::sort(region.begin(), region.end());
    std::vector<Coord> path{region.front()};
    std::set<Coord> q(region.begin() + 1, region.end());
    Coord p = region.front();
    double vx = 1, vy = 0;
    while (!q.empty()) {
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (Coord c : q) best = std::min(best, oracle_distance(p, c, metric));
        std::vector<Coord> cands;
        for (Coord c : q)
            if (oracle_distance(p, c, metric) == best) cands.push_back(c);
        double ux = vx, uy = vy;
        for (int turn = 0; turn < 4 && cands.size() > 1; ++turn) {
            double top = -1e300;
            for (Coord c : cands) top = std::max(top, (double(c.col) - p.col) * ux + (double(c.row) - p.row) * uy);
            std::vector<Coord> keep;
            for (Coord c : cands)
                if ((double(c.col) - p.col) * ux + (double(c.row) - p.row) * uy == top) keep.push_back(c);
            cands = keep;
            const double nx = -uy, ny = ux;
            ux = nx;
            uy = ny;
        }
        const Coord next = *std::min_element(cands.begin(), cands.end());
        vx = double(next.col) - p.col;
        vy = double(next.row) - p.row;
        p = next;
        path.push_back(p);
        q.erase(p);
    }
    return path;
}

// Region-wise alternating parity recursion over region paths: region 0 keeps
// its even positions; region k keeps even positions iff
// (|R_{k-1}| even) XOR (R_{k-1} kept its odd positions). `use_decimated_size`
// selects whether |R_{k-1}| is taken before or after decimation.
inline std::vector<PointSet> parity_rule_oracle(const std::vector<PointPath>& region_paths,
                                                bool use_decimated_size = false) {
    std::vector<PointSet> kept;
    bool prev_odd = false;
    std::size_t prev_size = 0;
    for (std::size_t k = 0; k < region_paths.size(); ++k) {
        const bool take_even = k == 0 ? true : ((prev_size % 2 == 0) != prev_odd);
        PointSet s;
        for (std::size_t i = take_even ? 0 : 1; i < region_paths[k].size(); i += 2) s.push_back(region_paths[k][i]);
        std::sort(s.begin(), s.end());
        prev_odd = !take_even;
        prev_size = use_decimated_size ? s.size() : region_paths[k].size();
        kept.push_back(std::move(s));
    }
    return kept;
}

// ---- segmentation oracles --------------------------------------------------

// Max edge weight of a minimum spanning tree of the subgraph induced by
// `members` on the 8-neighbour graph of `img` (Prim, dense).
inline double mst_max_edge(const GrayImage& img, const std::vector<Coord>& members) {
    if (members.size() < 2) return 0.0;
    std::map<Coord, std::size_t> index;
    for (std::size_t i = 0; i < members.size(); ++i) index[members[i]] = i;
    std::vector<double> key(members.size(), std::numeric_limits<double>::infinity());
    std::vector<bool> in_tree(members.size(), false);
    key[0] = 0.0;
    double worst = 0.0;
    for (std::size_t it = 0; it < members.size(); ++it) {
        std::size_t u = members.size();
        for (std::size_t i = 0; i < members.size(); ++i)
            if (!in_tree[i] && (u == members.size() || key[i] < key[u])) u = i;
        in_tree[u] = true;
        worst = std::max(worst, key[u]);
        const Coord p = members[u];
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (!dr && !dc) continue;
                const long r = long(p.row) + dr, c = long(p.col) + dc;
                if (r < 0 || c < 0 || r >= long(img.height()) || c >= long(img.width())) continue;
                const Coord q{std::uint32_t(r), std::uint32_t(c)};
                auto found = index.find(q);
                if (found == index.end() || in_tree[found->second]) continue;
                key[found->second] = std::min(key[found->second], std::abs(img.at(p) - img.at(q)));
            }
        }
    }
    return worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs_diff(const GrayImage& a, const GrayImage& b) { return max_abs_diff(a.pixels(), b.pixels()); }

}  // namespace rbepwt::testing
