#include "vdm/trends.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vdm/audio.hpp"
#include "vdm/errors.hpp"

namespace vdm {

MultTrendResult multiplicative_trend(std::span<const double> signal, int sample_rate_hz,
                                     double window_ms, double hop_ms)
{
    const std::size_t window = ms_to_samples(window_ms, sample_rate_hz);
    const std::size_t hop = ms_to_samples(hop_ms, sample_rate_hz);
    if (window == 0 || hop == 0)
        throw ValidationError("window and hop must be positive");
    if (signal.size() < window)
        throw TooShortError("signal shorter than one analysis window");
    if (std::all_of(signal.begin(), signal.end(), [](double v) { return v == 0.0; }))
        throw DegenerateSignalError("all-silent signal has no level trend");

    MultTrendResult result;
    auto& trend = result.trend;
    trend.target_dbfs = dbfs(signal);

    const std::size_t n_windows = (signal.size() - window) / hop + 1;
    trend.window_dbfs.reserve(n_windows);
    trend.window_centers.reserve(n_windows);
    for (std::size_t w = 0; w < n_windows; ++w) {
        const std::size_t start = w * hop;
        trend.window_dbfs.push_back(dbfs(signal.subspan(start, window)));
        trend.window_centers.push_back(static_cast<double>(start) +
                                       0.5 * static_cast<double>(window - 1));
    }

    const double mean = std::accumulate(trend.window_dbfs.begin(), trend.window_dbfs.end(), 0.0) /
                        static_cast<double>(n_windows);
    double ss = 0.0;
    for (double db : trend.window_dbfs) {
        const double d = db - mean;
        ss += d * d;
    }
    trend.sd_db = std::sqrt(ss / static_cast<double>(n_windows));

    // Per-sample gain from the locally interpolated level toward the target.
    result.corrected.resize(signal.size());
    std::size_t seg = 0;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const double t = static_cast<double>(i);
        double local;
        if (t <= trend.window_centers.front()) {
            local = trend.window_dbfs.front();
        } else if (t >= trend.window_centers.back()) {
            local = trend.window_dbfs.back();
        } else {
            while (seg + 2 < n_windows && trend.window_centers[seg + 1] < t)
                ++seg;
            const double c0 = trend.window_centers[seg];
            const double c1 = trend.window_centers[seg + 1];
            const double f = (t - c0) / (c1 - c0);
            local = trend.window_dbfs[seg] +
                    f * (trend.window_dbfs[seg + 1] - trend.window_dbfs[seg]);
        }
        const double gain = std::pow(10.0, (trend.target_dbfs - local) / 20.0);
        result.corrected[i] = signal[i] * gain;
    }
    return result;
}

AdditiveTrend additive_trend(const ImfDecomposition& dec, int cutoff)
{
    if (cutoff < 0)
        throw ValidationError("IMF cutoff must be non-negative");
    if (dec.residual.empty())
        throw ValidationError("empty decomposition");

    AdditiveTrend result;
    result.cutoff = cutoff;
    result.trend = dec.residual;
    for (std::size_t k = static_cast<std::size_t>(cutoff); k < dec.imfs.size(); ++k) {
        const auto& imf = dec.imfs[k];
        if (imf.size() != result.trend.size())
            throw DimensionError("IMF length mismatch");
        for (std::size_t i = 0; i < imf.size(); ++i)
            result.trend[i] += imf[i];
    }

    const double mean = std::accumulate(result.trend.begin(), result.trend.end(), 0.0) /
                        static_cast<double>(result.trend.size());
    double ss = 0.0;
    for (double v : result.trend) {
        const double d = v - mean;
        ss += d * d;
    }
    result.sd = std::sqrt(ss / static_cast<double>(result.trend.size()));
    return result;
}

} // namespace vdm
