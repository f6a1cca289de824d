#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vdm {

enum class DetrendMode { LinearFit, WindowMean };

// Log-log fluctuation curve with its least-squares fit.
struct FluctuationCurve {
    std::vector<std::size_t> window_sizes;
    std::vector<double> fluctuations;
    double slope = 0.0;
    double intercept = 0.0; // of log F vs log n (natural log)
    double r2 = 0.0;
};

// Log-spaced integer window sizes, deduplicated, each >= 4.
std::vector<std::size_t> log_spaced_windows(std::size_t n_min, std::size_t n_max, int count);

// Core windowed fluctuation analysis. When integrate is set, the profile
// y = cumsum(signal - mean) is analyzed instead of the raw signal. For each
// window size n the profile is cut into floor(N/n) non-overlapping windows
// (tail discarded), each window is detrended per mode, and F(n) is the RMS
// of all residuals.
FluctuationCurve fluctuation_curve(std::span<const double> signal,
                                   const std::vector<std::size_t>& windows, DetrendMode detrend,
                                   bool integrate);

struct ScaleRangeMs {
    double min_ms;
    double max_ms;
    int count = 10;
};

constexpr ScaleRangeMs kDfaScales{2.0, 4.0, 10};
constexpr ScaleRangeMs kHurstScales{2.0, 10.0, 10};

// Classical DFA exponent: linear detrending, integrated profile, windows over
// [2 ms, 4 ms] (88-176 samples at 44.1 kHz).
double dfa_exponent(std::span<const double> signal, int sample_rate_hz,
                    const ScaleRangeMs& scales = kDfaScales);

struct HurstEstimate {
    std::optional<double> exponent; // absent when the fit fails the r2 gate
    FluctuationCurve curve;
};

// Hurst-exponent estimate of a first IMF: mean detrending per window, windows
// over [2 ms, 10 ms] (up to 441 samples at 44.1 kHz), slope reported only
// when the log-log fit has r2 >= r2_gate.
HurstEstimate hurst_first_imf(std::span<const double> imf1, int sample_rate_hz,
                              double r2_gate = 0.99, bool integrate = true,
                              const ScaleRangeMs& scales = kHurstScales);

} // namespace vdm
