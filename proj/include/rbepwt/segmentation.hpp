#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

#include "rbepwt/image.hpp"

namespace rbepwt {

/// Per-pixel region labels. Labels are exactly {0, ..., region_count-1},
/// each used at least once.
class LabelMap {
public:
    LabelMap() = default;
    // Validates the label invariant; throws Error{InvalidArgument} otherwise.
    LabelMap(std::size_t width, std::size_t height, std::vector<std::uint32_t> labels);

    static LabelMap single_region(std::size_t width, std::size_t height);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return labels_.size(); }
    std::uint32_t region_count() const noexcept { return region_count_; }

    std::uint32_t operator()(std::size_t row, std::size_t col) const { return labels_[row * width_ + col]; }
    std::uint32_t at(Coord c) const { return labels_[row_major_rank(c, width_)]; }
    const std::vector<std::uint32_t>& labels() const noexcept { return labels_; }

    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::uint32_t region_count_ = 0;
    std::vector<std::uint32_t> labels_;
};

// Relabels so that labels appear in order of first row-major occurrence.
LabelMap canonicalize_labels(std::size_t width, std::size_t height, const std::vector<std::uint32_t>& raw);

struct ComponentStats {
    std::size_t size = 0;
    std::size_t perimeter = 0;  // unit-distance pairs leaving the component; tracked only on request
};

/// Threshold term added to Int(C) in the boundary predicate.
struct Tau {
    std::function<double(const ComponentStats&)> fn;
    bool needs_perimeter = false;

    static Tau scale_over_size(double k);
    static Tau area_over_perimeter();
};

struct SegParams {
    double k = 200.0;
    double sigma = 2.0;
    std::size_t min_size = 10;
};

struct WeightedEdge {
    Coord a;  // lower row-major rank
    Coord b;
    double w = 0.0;
};

GrayImage gaussian_smooth(const GrayImage& img, double sigma);

// One edge per unordered 8-neighbour pair, w = |gray(a) - gray(b)|.
std::vector<WeightedEdge> build_graph(const GrayImage& img);

// Sorts by weight, then the rank of the lower endpoint, then of the upper one.
void sort_edges(std::vector<WeightedEdge>& edges, std::size_t width);

struct SegmentationDetail {
    LabelMap main_pass;                      // components before the min_size merge
    std::vector<double> internal_difference;  // Int(C) per main_pass label
    LabelMap final;
};

SegmentationDetail fh_segment_detailed(const GrayImage& img, const SegParams& params, const Tau& tau);
LabelMap fh_segment(const GrayImage& img, const SegParams& params);
LabelMap fh_segment(const GrayImage& img, const SegParams& params, const Tau& tau);

// Number of unordered 4-neighbour pixel pairs with differing labels.
std::size_t perimeter(const LabelMap& lm);

PointSet region_points(const LabelMap& lm, std::uint32_t label);

// Every region's points, indexed by label, each in row-major order.
std::vector<PointSet> all_region_points(const LabelMap& lm);

// "P2-label" text: header "P2-label", then width height region_count, then
// the labels row-major. '#' comments allowed.
void write_label_map(const LabelMap& lm, std::ostream& out);
LabelMap read_label_map(std::istream& in);
void save_label_map(const LabelMap& lm, const std::filesystem::path& path);
LabelMap load_label_map(const std::filesystem::path& path);

}  // namespace rbepwt
