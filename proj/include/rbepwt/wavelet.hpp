#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rbepwt/image.hpp"

namespace rbepwt {

enum class WaveletKind { Haar, Cdf97 };

std::string_view wavelet_name(WaveletKind kind) noexcept;
WaveletKind parse_wavelet(std::string_view name);

/// Filter taps; taps[i] sits at index `offset + i`.
struct Filter {
    int offset = 0;
    std::vector<double> taps;

    double dc_gain() const noexcept;
};

/// Two-channel filter bank used with periodic boundary handling.
///
/// Analysis at output k reads signal samples 2k + m, m over the filter's
/// support; synthesis scatters coefficient k back onto samples 2k + m.
/// Both banks are normalised so that the analysis low-pass has DC gain sqrt(2).
struct FilterBank {
    WaveletKind kind = WaveletKind::Haar;
    Filter analysis_low;
    Filter analysis_high;
    Filter synthesis_low;
    Filter synthesis_high;
};

// Shared, immutable instances. The CDF 9/7 bank is checked for perfect
// reconstruction on first use.
const FilterBank& filter_bank(WaveletKind kind);

struct CoeffPair {
    std::vector<double> approx;
    std::vector<double> detail;
};

/// Single-level periodic analysis. For odd lengths the last sample bypasses
/// the filters and is appended to `approx`, so |approx| = ceil(n/2) and
/// |detail| = floor(n/2).
CoeffPair dwt_periodic(std::span<const double> signal, const FilterBank& fb);

// Inverse of dwt_periodic for an original length n.
std::vector<double> idwt_periodic(const CoeffPair& cp, const FilterBank& fb, std::size_t n);

// Max abs reconstruction error of the bank over a fixed family of test
// signals of every even length in [2, 64].
double reconstruction_error(const FilterBank& fb, std::size_t signal_count);

/// Mallat-layout 2-D separable decomposition of a square power-of-two image.
/// After `levels` steps the LL band occupies the top-left (size >> levels)^2 block.
struct TensorCoefficients {
    std::size_t size = 0;
    std::size_t levels = 0;
    WaveletKind bank = WaveletKind::Haar;
    std::vector<double> values;  // row-major size x size
};

TensorCoefficients tensor_dwt2(const GrayImage& img, const FilterBank& fb, std::size_t levels);
GrayImage tensor_idwt2(const TensorCoefficients& coeffs);

}  // namespace rbepwt
