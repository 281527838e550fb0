#include "rbepwt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <vector>

#include "rbepwt/error.hpp"

namespace rbepwt {

void keep_n_largest_values(std::span<double> values, std::size_t n) {
    if (n > values.size()) fail(ErrorKind::InvalidArgument, "cannot keep more coefficients than exist");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto larger = [&](std::size_t a, std::size_t b) {
        const double ma = std::abs(values[a]), mb = std::abs(values[b]);
        return ma != mb ? ma > mb : a < b;
    };
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(), larger);
    for (auto it = order.begin() + static_cast<std::ptrdiff_t>(n); it != order.end(); ++it) values[*it] = 0.0;
}

EncodedImage keep_n_largest(const EncodedImage& enc, std::size_t n) {
    std::vector<double> flat = enc.flatten();
    keep_n_largest_values(flat, n);
    EncodedImage out = enc;
    out.assign_flat(flat);
    return out;
}

std::size_t count_nonzero(std::span<const double> values) noexcept {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return v != 0.0; }));
}

std::size_t count_nonzero(const EncodedImage& enc) { return count_nonzero(enc.flatten()); }

namespace {

double squared_error(const GrayImage& f, const GrayImage& g) {
    if (f.width() != g.width() || f.height() != g.height())
        fail(ErrorKind::InvalidArgument, "images must have equal dimensions");
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f.pixels()[i] - g.pixels()[i];
        sum += d * d;
    }
    return sum;
}

}  // namespace

double psnr_paper(const GrayImage& f, const GrayImage& g) {
    const double se = squared_error(f, g);
    if (se == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log2(255.0 / std::sqrt(se));
}

double psnr_std(const GrayImage& f, const GrayImage& g) {
    const double se = squared_error(f, g);
    if (se == 0.0) fail(ErrorKind::InvalidArgument, "PSNR of identical images is infinite");
    const double mse = se / static_cast<double>(f.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

GrayImage basis_element(const EncodedImage& enc_template, CoeffId id) {
    if (!enc_template.valid(id)) fail(ErrorKind::InvalidArgument, "invalid coefficient id");
    EncodedImage unit = enc_template;
    std::vector<double> flat(unit.coefficient_count(), 0.0);
    flat[unit.flat_of(id)] = 1.0;
    unit.assign_flat(flat);
    return decode(unit);
}

GrayImage rescale_for_display(const GrayImage& img) {
    if (img.empty()) return img;
    const auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
    const double span = *hi - *lo;
    GrayImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i)
        out.pixels()[i] = span > 0.0 ? 255.0 * (img.pixels()[i] - *lo) / span : 128.0;
    return out;
}

std::string format_metrics_row(const MetricsRow& row) {
    auto number = [](double v) -> std::string {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", v);
        return buf;
    };
    return row.image + ',' + row.mode + ',' + row.bank + ',' + row.n_coeffs + ',' + number(row.psnr_paper) + ',' +
           number(row.psnr_std);
}

}  // namespace rbepwt
