#include "vdm/emd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "vdm/errors.hpp"

namespace vdm {

namespace {

struct ExtremaSet {
    std::vector<double> max_pos, max_val;
    std::vector<double> min_pos, min_val;
};

// Compresses equal-valued runs, then marks interior runs that are strictly
// above (below) both neighbours. Flat runs contribute one extremum at their
// midpoint.
void find_extrema(std::span<const double> x, ExtremaSet& out) {
    out.max_pos.clear();
    out.max_val.clear();
    out.min_pos.clear();
    out.min_val.clear();
    const std::size_t n = x.size();
    if (n < 3) return;

    double prev = 0.0;
    bool have_prev = false;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && x[j] == x[i]) ++j;
        // run [i, j)
        if (have_prev && j < n) {
            const double mid = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0;
            if (x[i] > prev && x[i] > x[j]) {
                out.max_pos.push_back(mid);
                out.max_val.push_back(x[i]);
            } else if (x[i] < prev && x[i] < x[j]) {
                out.min_pos.push_back(mid);
                out.min_val.push_back(x[i]);
            }
        }
        prev = x[i];
        have_prev = true;
        i = j;
    }
}

// Natural cubic spline with reusable scratch storage.
class NaturalSpline {
public:
    void build(const std::vector<double>& xs, const std::vector<double>& ys) {
        xs_ = &xs;
        ys_ = &ys;
        const std::size_t m = xs.size();
        m2_.assign(m, 0.0);
        if (m < 3) return;
        diag_.resize(m - 2);
        off_.resize(m - 2);
        rhs_.resize(m - 2);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double hl = xs[i] - xs[i - 1];
            const double hr = xs[i + 1] - xs[i];
            diag_[i - 1] = 2.0 * (hl + hr);
            off_[i - 1] = hr;
            rhs_[i - 1] = 6.0 * ((ys[i + 1] - ys[i]) / hr - (ys[i] - ys[i - 1]) / hl);
        }
        // Thomas solve; off-diagonals are h_i (symmetric tridiagonal)
        for (std::size_t i = 1; i + 1 < m - 1; ++i) {
            const double hl = xs[i + 1] - xs[i]; // coupling between rows i-1 and i
            const double w = hl / diag_[i - 1];
            diag_[i] -= w * hl;
            rhs_[i] -= w * rhs_[i - 1];
        }
        for (std::size_t k = m - 2; k-- > 0;) {
            const double upper = (k + 1 < m - 2) ? (xs[k + 2] - xs[k + 1]) * m2_[k + 2] : 0.0;
            m2_[k + 1] = (rhs_[k] - upper) / diag_[k];
        }
    }

    // Evaluates the spline at t = 0, 1, ..., n-1, accumulating 0.5 * value
    // into out (the caller averages two envelopes).
    void add_half_on_grid(std::size_t n, std::vector<double>& out) const {
        const auto& xs = *xs_;
        const auto& ys = *ys_;
        const std::size_t m = xs.size();
        if (m == 1) {
            for (std::size_t t = 0; t < n; ++t) out[t] += 0.5 * ys[0];
            return;
        }
        std::size_t seg = 0;
        for (std::size_t t = 0; t < n; ++t) {
            const double x = static_cast<double>(t);
            while (seg + 2 < m && xs[seg + 1] < x) ++seg;
            const double h = xs[seg + 1] - xs[seg];
            const double a = (xs[seg + 1] - x) / h;
            const double b = (x - xs[seg]) / h;
            double v = a * ys[seg] + b * ys[seg + 1];
            v += ((a * a * a - a) * m2_[seg] + (b * b * b - b) * m2_[seg + 1]) * (h * h) / 6.0;
            out[t] += 0.5 * v;
        }
    }

private:
    const std::vector<double>* xs_ = nullptr;
    const std::vector<double>* ys_ = nullptr;
    std::vector<double> m2_, diag_, off_, rhs_;
};

class Sifter {
public:
    explicit Sifter(const EmdConfig& config, std::size_t n) : config_(config), n_(n) {
        mean_.resize(n);
    }

    // Computes the envelope mean of h. Returns false when h lacks a maximum
    // or a minimum (nothing left to sift).
    bool envelope_mean(std::span<const double> h) {
        find_extrema(h, ex_);
        if (ex_.max_pos.empty() || ex_.min_pos.empty()) return false;
        extend(ex_.max_pos, ex_.max_val, h);
        upper_.build(ext_pos_, ext_val_);
        std::fill(mean_.begin(), mean_.end(), 0.0);
        upper_.add_half_on_grid(n_, mean_);
        extend(ex_.min_pos, ex_.min_val, h);
        lower_.build(ext_pos_, ext_val_);
        lower_.add_half_on_grid(n_, mean_);
        return true;
    }

    const std::vector<double>& mean() const { return mean_; }
    std::size_t last_extrema_count() const { return ex_.max_pos.size() + ex_.min_pos.size(); }

private:
    // Boundary extension of one extrema track into ext_pos_/ext_val_.
    void extend(const std::vector<double>& pos, const std::vector<double>& val,
                std::span<const double> h) {
        ext_pos_.clear();
        ext_val_.clear();
        const double last = static_cast<double>(n_ - 1);
        if (config_.boundary == BoundaryPolicy::MirrorTwo) {
            const std::size_t k = std::min<std::size_t>(2, pos.size());
            for (std::size_t i = k; i-- > 0;) {
                ext_pos_.push_back(-pos[i]);
                ext_val_.push_back(val[i]);
            }
            ext_pos_.insert(ext_pos_.end(), pos.begin(), pos.end());
            ext_val_.insert(ext_val_.end(), val.begin(), val.end());
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = pos.size() - 1 - i;
                ext_pos_.push_back(2.0 * last - pos[j]);
                ext_val_.push_back(val[j]);
            }
        } else {
            ext_pos_.push_back(0.0);
            ext_val_.push_back(h.front());
            ext_pos_.insert(ext_pos_.end(), pos.begin(), pos.end());
            ext_val_.insert(ext_val_.end(), val.begin(), val.end());
            ext_pos_.push_back(last);
            ext_val_.push_back(h.back());
        }
    }

    const EmdConfig& config_;
    std::size_t n_;
    ExtremaSet ex_;
    std::vector<double> ext_pos_, ext_val_;
    NaturalSpline upper_, lower_;
    std::vector<double> mean_;
};

bool imf_shape_ok(std::span<const double> h) {
    const auto e = count_extrema(h);
    const auto z = count_zero_crossings(h);
    return (e > z ? e - z : z - e) <= 1;
}

} // namespace

std::size_t count_extrema(std::span<const double> x) {
    ExtremaSet ex;
    find_extrema(x, ex);
    return ex.max_pos.size() + ex.min_pos.size();
}

std::size_t count_zero_crossings(std::span<const double> x) {
    std::size_t count = 0;
    int prev_sign = 0;
    for (double v : x) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s != 0) {
            if (prev_sign != 0 && s != prev_sign) ++count;
            prev_sign = s;
        }
    }
    return count;
}

ImfDecomposition decompose(std::span<const double> signal, const EmdConfig& config) {
    const std::size_t n = signal.size();
    if (n < 16) throw DecompositionError("signal too short for EMD (" + std::to_string(n) + ")");
    const auto [lo, hi] = std::minmax_element(signal.begin(), signal.end());
    if (*lo == *hi) throw DecompositionError("constant signal");

    ImfDecomposition out;
    out.residual.assign(signal.begin(), signal.end());

    Sifter sifter(config, n);
    std::vector<double> h(n);

    while (static_cast<int>(out.imfs.size()) < config.max_imfs) {
        if (count_extrema(out.residual) < 3) break;
        h = out.residual;
        for (int iter = 0; iter < config.max_sift_iters; ++iter) {
            if (!sifter.envelope_mean(h)) break;
            const auto& m = sifter.mean();
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                num += m[i] * m[i];
                den += h[i] * h[i];
            }
            for (std::size_t i = 0; i < n; ++i) h[i] -= m[i];
            if (den == 0.0) break;
            if (num / den < config.sd_threshold) {
                if (!config.enforce_imf_shape || imf_shape_ok(h)) break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) out.residual[i] -= h[i];
        out.imfs.push_back(h);
    }
    return out;
}

std::vector<double> imf_variances(const ImfDecomposition& decomp) {
    std::vector<double> vars;
    vars.reserve(decomp.imfs.size());
    for (const auto& imf : decomp.imfs) {
        double mean = 0.0;
        for (double v : imf) mean += v;
        mean /= static_cast<double>(imf.size());
        double acc = 0.0;
        for (double v : imf) acc += (v - mean) * (v - mean);
        // Sample variance; decompose() guarantees length >= 16.
        vars.push_back(acc / static_cast<double>(imf.size() - 1));
    }
    return vars;
}

} // namespace vdm
