#include "rbepwt/wavelet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "rbepwt/error.hpp"

namespace rbepwt {

std::string_view wavelet_name(WaveletKind kind) noexcept {
    return kind == WaveletKind::Haar ? "haar" : "cdf97";
}

WaveletKind parse_wavelet(std::string_view name) {
    if (name == "haar") return WaveletKind::Haar;
    if (name == "cdf97") return WaveletKind::Cdf97;
    fail(ErrorKind::InvalidArgument, "unknown wavelet '" + std::string(name) + "'");
}

double Filter::dc_gain() const noexcept { return std::accumulate(taps.begin(), taps.end(), 0.0); }

namespace {

std::size_t wrap(std::ptrdiff_t i, std::size_t n) noexcept {
    const auto sn = static_cast<std::ptrdiff_t>(n);
    std::ptrdiff_t m = i % sn;
    return static_cast<std::size_t>(m < 0 ? m + sn : m);
}

FilterBank make_haar() {
    const double r = 1.0 / std::sqrt(2.0);
    FilterBank fb;
    fb.kind = WaveletKind::Haar;
    fb.analysis_low = {0, {r, r}};
    fb.analysis_high = {0, {r, -r}};
    fb.synthesis_low = {0, {r, r}};
    fb.synthesis_high = {0, {r, -r}};
    return fb;
}

// CDF 9/7 lifting factorisation (irreversible JPEG 2000 kernel).
constexpr double kAlpha = -1.586134342059924;
constexpr double kBeta = -0.052980118572961;
constexpr double kGamma = 0.882911075530934;
constexpr double kDelta = 0.443506852043971;

constexpr std::size_t kProbeLength = 32;  // wider than any tap support
constexpr std::size_t kProbeHalf = kProbeLength / 2;

using Probe = std::array<double, kProbeLength>;

// Periodic forward lifting; returns (even, odd) channels.
std::pair<std::array<double, kProbeHalf>, std::array<double, kProbeHalf>> lift_forward(const Probe& x) {
    std::array<double, kProbeHalf> s{}, d{};
    for (std::size_t n = 0; n < kProbeHalf; ++n) {
        s[n] = x[2 * n];
        d[n] = x[2 * n + 1];
    }
    auto next = [](std::size_t n) { return (n + 1) % kProbeHalf; };
    auto prev = [](std::size_t n) { return (n + kProbeHalf - 1) % kProbeHalf; };
    for (std::size_t n = 0; n < kProbeHalf; ++n) d[n] += kAlpha * (s[n] + s[next(n)]);
    for (std::size_t n = 0; n < kProbeHalf; ++n) s[n] += kBeta * (d[n] + d[prev(n)]);
    for (std::size_t n = 0; n < kProbeHalf; ++n) d[n] += kGamma * (s[n] + s[next(n)]);
    for (std::size_t n = 0; n < kProbeHalf; ++n) s[n] += kDelta * (d[n] + d[prev(n)]);
    return {s, d};
}

Probe lift_inverse(std::array<double, kProbeHalf> s, std::array<double, kProbeHalf> d) {
    auto next = [](std::size_t n) { return (n + 1) % kProbeHalf; };
    auto prev = [](std::size_t n) { return (n + kProbeHalf - 1) % kProbeHalf; };
    for (std::size_t n = 0; n < kProbeHalf; ++n) s[n] -= kDelta * (d[n] + d[prev(n)]);
    for (std::size_t n = 0; n < kProbeHalf; ++n) d[n] -= kGamma * (s[n] + s[next(n)]);
    for (std::size_t n = 0; n < kProbeHalf; ++n) s[n] -= kBeta * (d[n] + d[prev(n)]);
    for (std::size_t n = 0; n < kProbeHalf; ++n) d[n] -= kAlpha * (s[n] + s[next(n)]);
    Probe x{};
    for (std::size_t n = 0; n < kProbeHalf; ++n) {
        x[2 * n] = s[n];
        x[2 * n + 1] = d[n];
    }
    return x;
}

// Collects the non-negligible entries of a periodic response as a filter,
// reading indices above half the probe length as negative offsets.
Filter to_filter(const Probe& response, double scale) {
    int lo = 0, hi = -1;
    std::array<double, kProbeLength> centred{};
    for (std::size_t i = 0; i < kProbeLength; ++i) {
        const int m = i < kProbeHalf ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(kProbeLength);
        centred[static_cast<std::size_t>(m + static_cast<int>(kProbeHalf))] = response[i];
    }
    for (int m = -static_cast<int>(kProbeHalf); m < static_cast<int>(kProbeHalf); ++m) {
        if (std::abs(centred[static_cast<std::size_t>(m + static_cast<int>(kProbeHalf))]) > 1e-14) {
            if (hi < lo) lo = m;
            hi = m;
        }
    }
    Filter f{lo, {}};
    for (int m = lo; m <= hi; ++m) f.taps.push_back(scale * centred[static_cast<std::size_t>(m + static_cast<int>(kProbeHalf))]);
    return f;
}

// Taps are read off the lifting scheme's impulse responses, so the
// convolution filters inherit its exact invertibility.
FilterBank make_cdf97() {
    Probe analysis_low{}, analysis_high{};
    for (std::size_t m = 0; m < kProbeLength; ++m) {
        Probe impulse{};
        impulse[m] = 1.0;
        const auto [s, d] = lift_forward(impulse);
        analysis_low[m] = s[0];
        analysis_high[m] = d[0];
    }
    std::array<double, kProbeHalf> unit{}, zero{};
    unit[0] = 1.0;
    const Probe synthesis_low = lift_inverse(unit, zero);
    const Probe synthesis_high = lift_inverse(zero, unit);

    FilterBank raw;
    raw.analysis_low = to_filter(analysis_low, 1.0);
    raw.analysis_high = to_filter(analysis_high, 1.0);

    // DC gain sqrt(2) for the low pass, Nyquist gain sqrt(2) for the high pass.
    const double low_scale = std::sqrt(2.0) / raw.analysis_low.dc_gain();
    double nyquist = 0.0;
    for (std::size_t i = 0; i < raw.analysis_high.taps.size(); ++i)
        nyquist += ((raw.analysis_high.offset + static_cast<int>(i)) % 2 == 0 ? 1.0 : -1.0) * raw.analysis_high.taps[i];
    const double high_scale = std::sqrt(2.0) / std::abs(nyquist);

    FilterBank fb;
    fb.kind = WaveletKind::Cdf97;
    fb.analysis_low = to_filter(analysis_low, low_scale);
    fb.analysis_high = to_filter(analysis_high, high_scale);
    fb.synthesis_low = to_filter(synthesis_low, 1.0 / low_scale);
    fb.synthesis_high = to_filter(synthesis_high, 1.0 / high_scale);
    return fb;
}

FilterBank checked(FilterBank fb) {
    const double err = reconstruction_error(fb, 200);
    if (!(err < 1e-10))
        fail(ErrorKind::Precondition, std::string(wavelet_name(fb.kind)) + " filter bank fails reconstruction self-check");
    return fb;
}

}  // namespace

const FilterBank& filter_bank(WaveletKind kind) {
    static const FilterBank haar = make_haar();
    static const FilterBank cdf97 = checked(make_cdf97());
    return kind == WaveletKind::Haar ? haar : cdf97;
}

CoeffPair dwt_periodic(std::span<const double> signal, const FilterBank& fb) {
    const std::size_t n = signal.size();
    if (n < 2) fail(ErrorKind::InvalidArgument, "dwt_periodic needs at least two samples");
    const std::size_t even = n - n % 2;
    const std::size_t half = even / 2;

    CoeffPair out;
    out.approx.assign(half, 0.0);
    out.detail.assign(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        const auto base = static_cast<std::ptrdiff_t>(2 * k);
        double a = 0.0, d = 0.0;
        for (std::size_t i = 0; i < fb.analysis_low.taps.size(); ++i)
            a += fb.analysis_low.taps[i] * signal[wrap(base + fb.analysis_low.offset + static_cast<std::ptrdiff_t>(i), even)];
        for (std::size_t i = 0; i < fb.analysis_high.taps.size(); ++i)
            d += fb.analysis_high.taps[i] * signal[wrap(base + fb.analysis_high.offset + static_cast<std::ptrdiff_t>(i), even)];
        out.approx[k] = a;
        out.detail[k] = d;
    }
    if (n != even) out.approx.push_back(signal[n - 1]);
    return out;
}

std::vector<double> idwt_periodic(const CoeffPair& cp, const FilterBank& fb, std::size_t n) {
    if (n < 2 || cp.approx.size() != (n + 1) / 2 || cp.detail.size() != n / 2)
        fail(ErrorKind::InvalidArgument, "idwt_periodic: coefficient lengths inconsistent with signal length");
    const std::size_t even = n - n % 2;
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < even / 2; ++k) {
        const auto base = static_cast<std::ptrdiff_t>(2 * k);
        for (std::size_t i = 0; i < fb.synthesis_low.taps.size(); ++i)
            x[wrap(base + fb.synthesis_low.offset + static_cast<std::ptrdiff_t>(i), even)] += cp.approx[k] * fb.synthesis_low.taps[i];
        for (std::size_t i = 0; i < fb.synthesis_high.taps.size(); ++i)
            x[wrap(base + fb.synthesis_high.offset + static_cast<std::ptrdiff_t>(i), even)] += cp.detail[k] * fb.synthesis_high.taps[i];
    }
    if (n != even) x[n - 1] = cp.approx.back();
    return x;
}

double reconstruction_error(const FilterBank& fb, std::size_t signal_count) {
    // Deterministic low-discrepancy samples in [-128, 128).
    constexpr double kGolden = 0.6180339887498949;
    double state = 0.5;
    double worst = 0.0;
    for (std::size_t s = 0; s < signal_count; ++s) {
        const std::size_t n = 2 * (1 + s % 32);
        std::vector<double> x(n);
        for (double& v : x) {
            state = std::fmod(state + kGolden, 1.0);
            v = 256.0 * state - 128.0;
        }
        const std::vector<double> y = idwt_periodic(dwt_periodic(x, fb), fb, n);
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

namespace {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void require_square_power_of_two(std::size_t width, std::size_t height) {
    if (width != height || !is_power_of_two(width))
        fail(ErrorKind::Precondition, "tensor transform needs a square power-of-two image");
}

}  // namespace

TensorCoefficients tensor_dwt2(const GrayImage& img, const FilterBank& fb, std::size_t levels) {
    require_square_power_of_two(img.width(), img.height());
    const std::size_t n = img.width();
    if (levels == 0 || (n >> levels) == 0)
        fail(ErrorKind::Precondition, "tensor transform: levels must be in [1, log2(size)]");

    TensorCoefficients out{n, levels, fb.kind, img.pixels()};
    auto& v = out.values;
    std::vector<double> line;
    for (std::size_t level = 0; level < levels; ++level) {
        const std::size_t s = n >> level;
        const std::size_t h = s / 2;
        for (std::size_t r = 0; r < s; ++r) {
            line.assign(v.begin() + static_cast<std::ptrdiff_t>(r * n), v.begin() + static_cast<std::ptrdiff_t>(r * n + s));
            const CoeffPair cp = dwt_periodic(line, fb);
            std::copy(cp.approx.begin(), cp.approx.end(), v.begin() + static_cast<std::ptrdiff_t>(r * n));
            std::copy(cp.detail.begin(), cp.detail.end(), v.begin() + static_cast<std::ptrdiff_t>(r * n + h));
        }
        for (std::size_t c = 0; c < s; ++c) {
            line.resize(s);
            for (std::size_t r = 0; r < s; ++r) line[r] = v[r * n + c];
            const CoeffPair cp = dwt_periodic(line, fb);
            for (std::size_t r = 0; r < h; ++r) {
                v[r * n + c] = cp.approx[r];
                v[(r + h) * n + c] = cp.detail[r];
            }
        }
    }
    return out;
}

GrayImage tensor_idwt2(const TensorCoefficients& coeffs) {
    const std::size_t n = coeffs.size;
    require_square_power_of_two(n, n);
    if (coeffs.values.size() != n * n || coeffs.levels == 0 || (n >> coeffs.levels) == 0)
        fail(ErrorKind::InvalidArgument, "tensor coefficients are inconsistent");
    const FilterBank& fb = filter_bank(coeffs.bank);

    std::vector<double> v = coeffs.values;
    CoeffPair cp;
    for (std::size_t level = coeffs.levels; level-- > 0;) {
        const std::size_t s = n >> level;
        const std::size_t h = s / 2;
        for (std::size_t c = 0; c < s; ++c) {
            cp.approx.resize(h);
            cp.detail.resize(h);
            for (std::size_t r = 0; r < h; ++r) {
                cp.approx[r] = v[r * n + c];
                cp.detail[r] = v[(r + h) * n + c];
            }
            const std::vector<double> col = idwt_periodic(cp, fb, s);
            for (std::size_t r = 0; r < s; ++r) v[r * n + c] = col[r];
        }
        for (std::size_t r = 0; r < s; ++r) {
            const auto row = v.begin() + static_cast<std::ptrdiff_t>(r * n);
            cp.approx.assign(row, row + static_cast<std::ptrdiff_t>(h));
            cp.detail.assign(row + static_cast<std::ptrdiff_t>(h), row + static_cast<std::ptrdiff_t>(s));
            const std::vector<double> line = idwt_periodic(cp, fb, s);
            std::copy(line.begin(), line.end(), row);
        }
    }
    return GrayImage(n, n, std::move(v));
}

}  // namespace rbepwt
