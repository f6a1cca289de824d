#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vdm/emd.hpp"

namespace vdm {

// Short-time level trajectory of a vowel: dBFS per 25 ms window every 10 ms,
// the whole-vowel target level, and the population SD of the window levels
// (the "multiplicative trend" feature).
struct MultiplicativeTrend {
    std::vector<double> window_dbfs;
    std::vector<double> window_centers; // window center, in samples
    double target_dbfs = 0.0;           // dBFS of the whole signal
    double sd_db = 0.0;                 // population SD of window_dbfs
};

struct MultTrendResult {
    MultiplicativeTrend trend;
    std::vector<double> corrected;
};

// Quantifies the volume trend and removes it: every sample is scaled by the
// gain that brings the locally interpolated dB level to the whole-signal
// level. Local level is piecewise-linear between window centers and held
// flat beyond the first and last center.
MultTrendResult multiplicative_trend(std::span<const double> signal, int sample_rate_hz,
                                     double window_ms = 25.0, double hop_ms = 10.0);

// Slow additive drift of a decomposed vowel: the sum of all IMFs above the
// cutoff index (1-based) plus the residual. Its population SD is the
// "additive trend" feature.
struct AdditiveTrend {
    std::vector<double> trend;
    double sd = 0.0;
    int cutoff = 0;
};

AdditiveTrend additive_trend(const ImfDecomposition& dec, int cutoff = 5);

} // namespace vdm
