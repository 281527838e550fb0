#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rbepwt/image.hpp"

namespace rbepwt {

enum class Distance { Euclidean, Chebyshev };

/// Direction in the (col, row) plane: x runs along columns, y along rows.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

// Counterclockwise quarter turn in (col, row) coordinates.
constexpr Vec2 rot90(Vec2 v) noexcept { return {-v.y, v.x}; }

/// Average discretised gradient of a region: gx along columns, gy along rows.
struct RegionGradient {
    double gx = 0.0;
    double gy = 0.0;

    friend bool operator==(const RegionGradient&, const RegionGradient&) = default;
};

/// Ordered visit of a point set; never repeats a point.
struct PointPath {
    std::vector<Coord> points;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    const Coord& operator[](std::size_t i) const { return points[i]; }
    auto begin() const noexcept { return points.begin(); }
    auto end() const noexcept { return points.end(); }

    friend bool operator==(const PointPath&, const PointPath&) = default;
};

// Squared Euclidean distance or Chebyshev distance, both exact integers.
std::uint64_t distance_key(Coord a, Coord b, Distance metric) noexcept;

/// Greedy nearest-available walk through `region`, preferring the straightest
/// continuation. Starts at the row-major-smallest point with preferred
/// direction (1, 0). Reads geometry only.
PointPath easy_path(const PointSet& region, Distance metric = Distance::Euclidean);

/// Like easy_path, but keeps the walk as perpendicular as possible to the
/// region's average gradient. Falls back to easy_path for |g| < 1e-12.
PointPath grad_path(const PointSet& region, RegionGradient g, Distance metric = Distance::Euclidean);

/// Data-driven greedy path: among the nearest available points pick the one
/// whose value differs least from the current one; ties go to the smallest
/// direction change, then row-major order. `values` is aligned to `points`.
PointPath epwt_path(const PointSet& points, std::span<const double> values,
                    Distance metric = Distance::Euclidean);

RegionGradient compute_region_gradient(const GrayImage& img, const PointSet& region);

// Concatenation in the given (region label) order. Throws if supports overlap.
PointPath glue_paths(std::span<const PointPath> paths);

struct Decimation {
    PointSet kept;                 // canonical order
    std::vector<Coord> path_order;  // path[0], path[2], path[4], ...
};

Decimation decimate(const PointPath& path);

// True iff `path` visits every point of `support` exactly once.
bool is_bijection_onto(const PointPath& path, const PointSet& support);

// CSV "step,row,col" with a header line.
void write_path_csv(const PointPath& path, std::ostream& out);

}  // namespace rbepwt
