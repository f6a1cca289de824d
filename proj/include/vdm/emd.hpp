#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vdm {

// How envelope splines behave at the signal edges. MirrorTwo reflects the
// first/last two extrema of each kind across the endpoints; ClampEnds adds
// the endpoint samples to both envelopes. The choice measurably affects the
// last IMFs, hence the knob.
enum class BoundaryPolicy { MirrorTwo, ClampEnds };

struct EmdConfig {
    int max_imfs = 12;
    int max_sift_iters = 50;
    // Huang's stop criterion: sum((h_prev - h)^2) / sum(h_prev^2) < threshold
    double sd_threshold = 0.2;
    BoundaryPolicy boundary = BoundaryPolicy::MirrorTwo;
    // After the SD criterion is met, keep sifting (up to max_sift_iters) until
    // |#extrema - #zero-crossings| <= 1 holds for the candidate.
    bool enforce_imf_shape = true;
};

// Ordered intrinsic mode functions plus residual; imfs[0] has the highest
// frequency content. imfs and residual sum back to the input.
struct ImfDecomposition {
    std::vector<std::vector<double>> imfs;
    std::vector<double> residual;
};

ImfDecomposition decompose(std::span<const double> signal, const EmdConfig& config = {});

// Variance of each IMF in order (population convention, as elsewhere).
std::vector<double> imf_variances(const ImfDecomposition& decomp);

// Strict interior extrema; a flat run counts once, at its midpoint.
std::size_t count_extrema(std::span<const double> x);
// Sign changes, ignoring exact zeros.
std::size_t count_zero_crossings(std::span<const double> x);

} // namespace vdm
