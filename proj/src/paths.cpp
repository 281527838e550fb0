#include "rbepwt/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

#include "rbepwt/error.hpp"

namespace rbepwt {

std::uint64_t distance_key(Coord a, Coord b, Distance metric) noexcept {
    const std::int64_t dr = static_cast<std::int64_t>(a.row) - b.row;
    const std::int64_t dc = static_cast<std::int64_t>(a.col) - b.col;
    if (metric == Distance::Chebyshev) return static_cast<std::uint64_t>(std::max(std::abs(dr), std::abs(dc)));
    return static_cast<std::uint64_t>(dr * dr + dc * dc);
}

namespace {

// Points not yet on the path, indexed by an occupancy grid over their
// bounding box so that nearest-neighbour queries scan outward ring by ring.
class AvailablePoints {
public:
    explicit AvailablePoints(const PointSet& points) {
        min_row_ = max_row_ = points.front().row;
        min_col_ = max_col_ = points.front().col;
        for (Coord c : points) {
            min_row_ = std::min(min_row_, c.row);
            max_row_ = std::max(max_row_, c.row);
            min_col_ = std::min(min_col_, c.col);
            max_col_ = std::max(max_col_, c.col);
        }
        box_width_ = static_cast<std::size_t>(max_col_ - min_col_) + 1;
        slot_.assign(box_width_ * (static_cast<std::size_t>(max_row_ - min_row_) + 1), kAbsent);
        list_ = points;
        for (std::size_t i = 0; i < list_.size(); ++i) slot_[cell(list_[i])] = i;
    }

    bool empty() const noexcept { return list_.empty(); }

    void remove(Coord c) {
        const std::size_t i = slot_[cell(c)];
        const Coord last = list_.back();
        list_[i] = last;
        slot_[cell(last)] = i;
        list_.pop_back();
        slot_[cell(c)] = kAbsent;
    }

    // Every available point at minimal distance from p, row-major sorted.
    std::vector<Coord> nearest(Coord p, Distance metric) const {
        std::vector<Coord> found;
        if (list_.size() <= kBruteForceLimit) {
            std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
            for (Coord c : list_) consider(p, c, metric, best, found);
        } else {
            ring_search(p, metric, found);
        }
        std::sort(found.begin(), found.end());
        return found;
    }

private:
    static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
    static constexpr std::size_t kBruteForceLimit = 48;

    std::size_t cell(Coord c) const noexcept {
        return static_cast<std::size_t>(c.row - min_row_) * box_width_ + (c.col - min_col_);
    }

    bool available(std::int64_t row, std::int64_t col) const noexcept {
        if (row < min_row_ || row > max_row_ || col < min_col_ || col > max_col_) return false;
        return slot_[cell({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col)})] != kAbsent;
    }

    static void consider(Coord p, Coord c, Distance metric, std::uint64_t& best, std::vector<Coord>& found) {
        const std::uint64_t d = distance_key(p, c, metric);
        if (d < best) {
            best = d;
            found.clear();
        }
        if (d == best) found.push_back(c);
    }

    void ring_search(Coord p, Distance metric, std::vector<Coord>& found) const {
        const std::int64_t pr = p.row, pc = p.col;
        const std::int64_t max_radius = std::max({pr - min_row_, std::int64_t{max_row_} - pr,
                                                  pc - min_col_, std::int64_t{max_col_} - pc});
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::int64_t r = 1; r <= max_radius; ++r) {
            // Everything on Chebyshev ring r is at Euclidean distance >= r.
            if (!found.empty() && (metric == Distance::Chebyshev || static_cast<std::uint64_t>(r * r) > best)) break;
            auto visit = [&](std::int64_t row, std::int64_t col) {
                if (available(row, col))
                    consider(p, {static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col)}, metric, best, found);
            };
            for (std::int64_t col = pc - r; col <= pc + r; ++col) {
                visit(pr - r, col);
                visit(pr + r, col);
            }
            for (std::int64_t row = pr - r + 1; row <= pr + r - 1; ++row) {
                visit(row, pc - r);
                visit(row, pc + r);
            }
        }
    }

    std::uint32_t min_row_, max_row_, min_col_, max_col_;
    std::size_t box_width_ = 0;
    std::vector<std::size_t> slot_;
    std::vector<Coord> list_;
};

Vec2 step(Coord from, Coord to) noexcept {
    return {static_cast<double>(to.col) - from.col, static_cast<double>(to.row) - from.row};
}

double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }

// Narrows `candidates` to the maximisers of <c - p, v> (or its absolute
// value), rotating v by a quarter turn while ties remain. Four orientations
// exhaust every distinct ordering; what is still tied after that resolves to
// the row-major-smallest candidate (candidates arrive sorted).
Coord break_direction_tie(std::vector<Coord> candidates, Coord p, Vec2 v, bool absolute) {
    constexpr double kTieTolerance = 1e-9;
    for (int turn = 0; turn < 4 && candidates.size() > 1; ++turn, v = rot90(v)) {
        auto score = [&](Coord c) {
            const double s = dot(step(p, c), v);
            return absolute ? std::abs(s) : s;
        };
        double best = -std::numeric_limits<double>::infinity();
        for (Coord c : candidates) best = std::max(best, score(c));
        std::erase_if(candidates, [&](Coord c) { return score(c) < best - kTieTolerance; });
    }
    return candidates.front();
}

void require_region(const PointSet& region) {
    if (region.empty()) fail(ErrorKind::InvalidArgument, "path finder needs a non-empty region");
}

}  // namespace

PointPath easy_path(const PointSet& region, Distance metric) {
    require_region(region);
    PointPath path;
    path.points.reserve(region.size());
    AvailablePoints available(region);

    Coord p = *std::min_element(region.begin(), region.end());
    Vec2 v{1.0, 0.0};
    path.points.push_back(p);
    available.remove(p);
    while (!available.empty()) {
        const Coord next = break_direction_tie(available.nearest(p, metric), p, v, false);
        v = step(p, next);
        p = next;
        path.points.push_back(p);
        available.remove(p);
    }
    return path;
}

PointPath grad_path(const PointSet& region, RegionGradient g, Distance metric) {
    require_region(region);
    const double norm = std::hypot(g.gx, g.gy);
    if (norm < 1e-12) return easy_path(region, metric);

    // Only the direction of g matters.
    const Vec2 w = rot90(Vec2{g.gx / norm, g.gy / norm});
    PointPath path;
    path.points.reserve(region.size());
    AvailablePoints available(region);

    Coord p = *std::min_element(region.begin(), region.end());
    Vec2 v = w;
    path.points.push_back(p);
    available.remove(p);
    while (!available.empty()) {
        const Coord next = break_direction_tie(available.nearest(p, metric), p, v, true);
        const Vec2 s = step(p, next);
        v = dot(s, Vec2{-w.x, -w.y}) > dot(s, w) ? Vec2{-w.x, -w.y} : w;
        p = next;
        path.points.push_back(p);
        available.remove(p);
    }
    return path;
}

PointPath epwt_path(const PointSet& points, std::span<const double> values, Distance metric) {
    if (points.empty()) fail(ErrorKind::InvalidArgument, "epwt_path needs at least one point");
    if (points.size() != values.size()) fail(ErrorKind::InvalidArgument, "epwt_path: values not aligned to points");
    if (!is_canonical(points)) fail(ErrorKind::InvalidArgument, "epwt_path: points must be in row-major order");

    auto value_of = [&](Coord c) {
        const auto it = std::lower_bound(points.begin(), points.end(), c);
        return values[static_cast<std::size_t>(it - points.begin())];
    };

    PointPath path;
    path.points.reserve(points.size());
    AvailablePoints available(points);
    Coord p = points.front();
    Vec2 direction{1.0, 0.0};
    path.points.push_back(p);
    available.remove(p);
    while (!available.empty()) {
        std::vector<Coord> candidates = available.nearest(p, metric);
        const double here = value_of(p);
        double best = std::numeric_limits<double>::infinity();
        for (Coord c : candidates) best = std::min(best, std::abs(value_of(c) - here));
        std::erase_if(candidates, [&](Coord c) { return std::abs(value_of(c) - here) != best; });
        if (candidates.size() > 1) {
            double best_turn = -std::numeric_limits<double>::infinity();
            for (Coord c : candidates) best_turn = std::max(best_turn, dot(step(p, c), direction));
            std::erase_if(candidates, [&](Coord c) { return dot(step(p, c), direction) != best_turn; });
        }
        const Coord next = candidates.front();
        direction = step(p, next);
        p = next;
        path.points.push_back(p);
        available.remove(p);
    }
    return path;
}

RegionGradient compute_region_gradient(const GrayImage& img, const PointSet& region) {
    require_region(region);
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    double sx = 0.0, sy = 0.0;
    for (Coord c : region) {
        if (!img.contains(c)) fail(ErrorKind::InvalidArgument, "region point outside image");
        const std::size_t r = c.row, col = c.col;
        if (w > 1) {
            if (col == 0) sx += img(r, 1) - img(r, 0);
            else if (col + 1 == w) sx += img(r, col) - img(r, col - 1);
            else sx += 0.5 * (img(r, col + 1) - img(r, col - 1));
        }
        if (h > 1) {
            if (r == 0) sy += img(1, col) - img(0, col);
            else if (r + 1 == h) sy += img(r, col) - img(r - 1, col);
            else sy += 0.5 * (img(r + 1, col) - img(r - 1, col));
        }
    }
    const auto n = static_cast<double>(region.size());
    return {sx / n, sy / n};
}

PointPath glue_paths(std::span<const PointPath> paths) {
    PointPath glued;
    for (const PointPath& p : paths) glued.points.insert(glued.points.end(), p.begin(), p.end());
    std::vector<Coord> sorted = glued.points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail(ErrorKind::InvalidArgument, "glue_paths: overlapping path supports");
    return glued;
}

Decimation decimate(const PointPath& path) {
    Decimation out;
    out.path_order.reserve((path.size() + 1) / 2);
    for (std::size_t i = 0; i < path.size(); i += 2) out.path_order.push_back(path[i]);
    out.kept = out.path_order;
    std::sort(out.kept.begin(), out.kept.end());
    return out;
}

bool is_bijection_onto(const PointPath& path, const PointSet& support) {
    if (path.size() != support.size()) return false;
    std::vector<Coord> a = path.points;
    std::vector<Coord> b = support;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b && std::adjacent_find(a.begin(), a.end()) == a.end();
}

void write_path_csv(const PointPath& path, std::ostream& out) {
    out << "step,row,col\n";
    for (std::size_t i = 0; i < path.size(); ++i) out << i << ',' << path[i].row << ',' << path[i].col << '\n';
}

}  // namespace rbepwt
