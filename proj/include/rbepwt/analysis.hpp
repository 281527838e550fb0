#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "rbepwt/codec.hpp"
#include "rbepwt/image.hpp"

namespace rbepwt {

// Zeroes all but the n largest magnitudes; ties go to the lower index.
void keep_n_largest_values(std::span<double> values, std::size_t n);

// Joint n-term thresholding over every coefficient, in canonical CoeffId order.
EncodedImage keep_n_largest(const EncodedImage& enc, std::size_t n);

std::size_t count_nonzero(std::span<const double> values) noexcept;
std::size_t count_nonzero(const EncodedImage& enc);

// 20 log2(255 / ||f - g||_2), +infinity for identical images.
double psnr_paper(const GrayImage& f, const GrayImage& g);

// Conventional 10 log10(255^2 / MSE) in dB; identical images are an error.
double psnr_std(const GrayImage& f, const GrayImage& g);

/// Decoded image of the unit coefficient vector e_id, sharing the template's
/// segmentation, paths and filter bank. Unclamped.
GrayImage basis_element(const EncodedImage& enc_template, CoeffId id);

// Affine map of the value range onto [0, 255] (constant images map to 128).
GrayImage rescale_for_display(const GrayImage& img);

inline constexpr std::string_view kMetricsCsvHeader = "image,mode,bank,n_coeffs,psnr_paper,psnr_std";

struct MetricsRow {
    std::string image;
    std::string mode = "-";
    std::string bank = "-";
    std::string n_coeffs = "-";
    double psnr_paper = 0.0;
    double psnr_std = 0.0;
};

std::string format_metrics_row(const MetricsRow& row);

}  // namespace rbepwt
