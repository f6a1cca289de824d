#include "vdm/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vdm/audio.hpp"
#include "vdm/errors.hpp"

namespace vdm {

namespace {

// Least-squares line through (t, y[t]) for t = 0..n-1 using a centered time
// axis; returns {intercept, slope} in the original (uncentered) axis.
std::pair<double, double> window_line(const double* y, std::size_t n)
{
    const double tc = 0.5 * static_cast<double>(n - 1);
    double s_ty = 0.0;
    double s_tt = 0.0;
    double s_y = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double td = static_cast<double>(t) - tc;
        s_y += y[t];
        s_ty += td * y[t];
        s_tt += td * td;
    }
    const double mean = s_y / static_cast<double>(n);
    const double slope = s_tt > 0.0 ? s_ty / s_tt : 0.0;
    return {mean - slope * tc, slope};
}

} // namespace

std::vector<std::size_t> log_spaced_windows(std::size_t n_min, std::size_t n_max, int count)
{
    if (n_min > n_max)
        throw ValidationError("window range inverted");
    if (count < 2)
        throw ValidationError("need at least two window sizes");
    const double lo = std::log(static_cast<double>(n_min));
    const double hi = std::log(static_cast<double>(n_max));
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        const double w = std::exp(lo + f * (hi - lo));
        auto n = static_cast<std::size_t>(std::llround(w));
        out.push_back(std::max<std::size_t>(n, 4));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() < 2)
        throw ValidationError("window range collapses to fewer than two distinct sizes");
    return out;
}

FluctuationCurve fluctuation_curve(std::span<const double> signal,
                                   const std::vector<std::size_t>& windows, DetrendMode detrend,
                                   bool integrate)
{
    const std::size_t n_samples = signal.size();
    if (windows.empty())
        throw ValidationError("no window sizes given");
    for (std::size_t w : windows)
        if (w < 4)
            throw ValidationError("window sizes must be at least 4 samples");
    if (!std::is_sorted(windows.begin(), windows.end()))
        throw ValidationError("window sizes must be sorted ascending");
    const std::size_t w_max = windows.back();
    if (n_samples < 2 * w_max)
        throw TooShortError("signal shorter than twice the largest window");
    const double first = signal[0];
    if (std::all_of(signal.begin(), signal.end(), [&](double v) { return v == first; }))
        throw DegenerateSignalError("constant signal has no fluctuations");

    // Profile: cumulative sum of the mean-adjusted signal, or the raw signal.
    std::vector<double> profile(n_samples);
    if (integrate) {
        const double mean =
            std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(n_samples);
        double acc = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) {
            acc += signal[i] - mean;
            profile[i] = acc;
        }
    } else {
        std::copy(signal.begin(), signal.end(), profile.begin());
    }

    FluctuationCurve curve;
    curve.window_sizes = windows;
    curve.fluctuations.reserve(windows.size());
    for (std::size_t n : windows) {
        const std::size_t n_windows = n_samples / n;
        double ss = 0.0;
        for (std::size_t w = 0; w < n_windows; ++w) {
            const double* y = profile.data() + w * n;
            if (detrend == DetrendMode::LinearFit) {
                const auto [a, b] = window_line(y, n);
                for (std::size_t t = 0; t < n; ++t) {
                    const double e = y[t] - (a + b * static_cast<double>(t));
                    ss += e * e;
                }
            } else {
                double mean = 0.0;
                for (std::size_t t = 0; t < n; ++t)
                    mean += y[t];
                mean /= static_cast<double>(n);
                for (std::size_t t = 0; t < n; ++t) {
                    const double e = y[t] - mean;
                    ss += e * e;
                }
            }
        }
        const double f = std::sqrt(ss / static_cast<double>(n_windows * n));
        if (!(f > 0.0))
            throw DegenerateSignalError("zero fluctuation at window size " + std::to_string(n));
        curve.fluctuations.push_back(f);
    }

    // OLS of log F against log n, centered for stability.
    const std::size_t k = windows.size();
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mean_x += std::log(static_cast<double>(windows[i]));
        mean_y += std::log(curve.fluctuations[i]);
    }
    mean_x /= static_cast<double>(k);
    mean_y /= static_cast<double>(k);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double dx = std::log(static_cast<double>(windows[i])) - mean_x;
        const double dy = std::log(curve.fluctuations[i]) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    curve.slope = sxy / sxx;
    curve.intercept = mean_y - curve.slope * mean_x;
    curve.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return curve;
}

namespace {

std::vector<std::size_t> scales_to_windows(const ScaleRangeMs& scales, int sample_rate_hz)
{
    const std::size_t lo = ms_to_samples(scales.min_ms, sample_rate_hz);
    const std::size_t hi = ms_to_samples(scales.max_ms, sample_rate_hz);
    return log_spaced_windows(lo, hi, scales.count);
}

} // namespace

double dfa_exponent(std::span<const double> signal, int sample_rate_hz, const ScaleRangeMs& scales)
{
    const auto windows = scales_to_windows(scales, sample_rate_hz);
    return fluctuation_curve(signal, windows, DetrendMode::LinearFit, true).slope;
}

HurstEstimate hurst_first_imf(std::span<const double> imf1, int sample_rate_hz, double r2_gate,
                              bool integrate, const ScaleRangeMs& scales)
{
    const auto windows = scales_to_windows(scales, sample_rate_hz);
    HurstEstimate est;
    est.curve = fluctuation_curve(imf1, windows, DetrendMode::WindowMean, integrate);
    if (est.curve.r2 >= r2_gate)
        est.exponent = est.curve.slope;
    return est;
}

} // namespace vdm
