#include "vdm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "vdm/errors.hpp"

namespace vdm {

std::vector<double> mean_ranks(std::span<const double> x)
{
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]])
            ++j;
        // 1-based ranks i+1..j+1 share their mean
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

bool is_constant(std::span<const double> x)
{
    for (double v : x)
        if (v != x[0])
            return false;
    return true;
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw DimensionError("spearman inputs differ in length");
    if (x.size() < 3)
        throw ValidationError("spearman needs at least 3 pairs");
    if (is_constant(x) || is_constant(y))
        throw ConstantInputError("correlation of a constant sequence is undefined");
    const auto rx = mean_ranks(x);
    const auto ry = mean_ranks(y);
    return pearson(rx, ry);
}

double spearman_pvalue(double rho, std::size_t n)
{
    if (n < 4)
        throw ValidationError("p-value needs at least 4 pairs");
    if (std::abs(rho) >= 1.0)
        return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = rho * std::sqrt(df / (1.0 - rho * rho));
    const boost::math::students_t_distribution<double> dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double vif(std::span<const double> candidate, const std::vector<std::vector<double>>& confirmed)
{
    if (confirmed.empty())
        throw ValidationError("VIF needs a nonempty confirmed set");
    const std::size_t n = candidate.size();
    for (const auto& col : confirmed)
        if (col.size() != n)
            throw DimensionError("VIF columns differ in length");

    const std::size_t k = confirmed.size();
    Eigen::MatrixXd x(n, k + 1);
    Eigen::VectorXd y(n);
    for (std::size_t r = 0; r < n; ++r) {
        x(r, 0) = 1.0;
        for (std::size_t c = 0; c < k; ++c)
            x(r, c + 1) = confirmed[c][r];
        y(r) = candidate[r];
    }

    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::VectorXd xty = x.transpose() * y;
    Eigen::VectorXd beta = xtx.ldlt().solve(xty);
    if (!beta.allFinite()) {
        // rank-deficient confirmed set: tiny ridge keeps the loop total
        Eigen::MatrixXd ridged = xtx;
        ridged.diagonal().array() += 1e-8;
        beta = ridged.ldlt().solve(xty);
    }

    const double rss = (y - x * beta).squaredNorm();
    const double mean = y.mean();
    const double tss = (y.array() - mean).square().sum();
    if (tss <= 0.0)
        return std::numeric_limits<double>::infinity();
    const double r2 = 1.0 - rss / tss;
    if (r2 >= 1.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / (1.0 - std::min(std::max(r2, 0.0), 1.0));
}

namespace {

// Training-column view: mean-imputed over the row subset, then z-scored.
std::vector<double> imputed_zscored_column(const FeatureMatrix& m,
                                           const std::vector<std::size_t>& rows, std::size_t col)
{
    double mean = 0.0;
    std::size_t count = 0;
    for (std::size_t r : rows)
        if (m.present[r][col]) {
            mean += m.values[r][col];
            ++count;
        }
    mean = count > 0 ? mean / static_cast<double>(count) : 0.0;

    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r : rows)
        out.push_back(m.present[r][col] ? m.values[r][col] : mean);

    const double n = static_cast<double>(out.size());
    const double mu = std::accumulate(out.begin(), out.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : out)
        ss += (v - mu) * (v - mu);
    const double sd = std::sqrt(ss / n);
    for (double& v : out)
        v = sd > 0.0 ? (v - mu) / sd : 0.0;
    return out;
}

} // namespace

SelectionResult select_features(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows,
                                const SelectionConfig& cfg)
{
    if (rows.empty())
        throw ValidationError("no rows to select on");
    bool any0 = false;
    bool any1 = false;
    for (std::size_t r : rows)
        (matrix.labels[r] ? any1 : any0) = true;
    if (!any0 || !any1)
        throw SingleClassError("feature selection needs both classes");

    struct Candidate {
        std::size_t col;
        std::string name;
        std::string group;
        double rho;
        double p;
    };

    // Potential set: features whose pairwise-complete Spearman p clears the
    // threshold.
    std::vector<Candidate> potential;
    for (std::size_t c = 0; c < matrix.n_features(); ++c) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (std::size_t r : rows)
            if (matrix.present[r][c]) {
                xs.push_back(matrix.values[r][c]);
                ys.push_back(static_cast<double>(matrix.labels[r]));
            }
        if (xs.size() < 4)
            continue;
        double rho;
        try {
            rho = spearman(xs, ys);
        } catch (const ConstantInputError&) {
            continue;
        }
        const double p = spearman_pvalue(rho, xs.size());
        if (p < cfg.p_threshold)
            potential.push_back(
                {c, matrix.feature_names[c], matrix.feature_groups[c], rho, p});
    }

    SelectionResult result;
    std::vector<std::vector<double>> confirmed_cols;
    std::map<std::string, int> group_counts;

    while (static_cast<int>(result.confirmed.size()) < cfg.max_features && !potential.empty()) {
        // Strongest |rho| wins; ties break on ascending feature name.
        std::size_t best = 0;
        for (std::size_t i = 1; i < potential.size(); ++i) {
            const double a = std::abs(potential[i].rho);
            const double b = std::abs(potential[best].rho);
            if (a > b || (a == b && potential[i].name < potential[best].name))
                best = i;
        }
        const Candidate chosen = potential[best];
        potential.erase(potential.begin() + static_cast<std::ptrdiff_t>(best));

        SelectionRound round;
        round.added = chosen.name;
        round.rho = chosen.rho;
        round.p = chosen.p;

        result.confirmed.push_back(chosen.name);
        confirmed_cols.push_back(imputed_zscored_column(matrix, rows, chosen.col));
        ++group_counts[chosen.group];

        // A group at its quota blocks its remaining candidates.
        if (!cfg.quotas.empty()) {
            for (auto it = potential.begin(); it != potential.end();) {
                const auto quota = cfg.quotas.find(it->group);
                if (quota != cfg.quotas.end() && group_counts[it->group] >= quota->second) {
                    round.quota_blocked.push_back(it->name);
                    it = potential.erase(it);
                } else {
                    ++it;
                }
            }
        }

        // Prune candidates that became collinear with the confirmed set.
        for (auto it = potential.begin(); it != potential.end();) {
            const auto col = imputed_zscored_column(matrix, rows, it->col);
            const double v = vif(col, confirmed_cols);
            if (v > cfg.vif_threshold) {
                round.pruned.emplace_back(it->name, v);
                it = potential.erase(it);
            } else {
                ++it;
            }
        }
        result.audit.push_back(std::move(round));
    }
    return result;
}

Standardizer zscore_fit(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows,
                        const std::vector<std::size_t>& cols)
{
    if (rows.empty())
        throw ValidationError("no training rows");
    Standardizer st;
    st.cols = cols;
    for (std::size_t col : cols) {
        double mean = 0.0;
        std::size_t count = 0;
        for (std::size_t r : rows)
            if (matrix.present[r][col]) {
                mean += matrix.values[r][col];
                ++count;
            }
        mean = count > 0 ? mean / static_cast<double>(count) : 0.0;

        // Imputing with the training mean leaves the mean unchanged, so the
        // imputation constant doubles as the z-score center.
        double ss = 0.0;
        for (std::size_t r : rows) {
            const double v = matrix.present[r][col] ? matrix.values[r][col] : mean;
            ss += (v - mean) * (v - mean);
        }
        st.mean.push_back(mean);
        st.sd.push_back(std::sqrt(ss / static_cast<double>(rows.size())));
    }
    return st;
}

std::vector<double> zscore_apply(const Standardizer& st, const FeatureMatrix& matrix,
                                 std::size_t row)
{
    std::vector<double> out;
    out.reserve(st.cols.size());
    for (std::size_t i = 0; i < st.cols.size(); ++i) {
        const std::size_t col = st.cols[i];
        const double v = matrix.present[row][col] ? matrix.values[row][col] : st.mean[i];
        out.push_back(st.sd[i] > 0.0 ? (v - st.mean[i]) / st.sd[i] : 0.0);
    }
    return out;
}

std::vector<FeatureCorrelation> correlation_report(const FeatureMatrix& matrix)
{
    bool any0 = false;
    bool any1 = false;
    for (int label : matrix.labels)
        (label ? any1 : any0) = true;
    if (!any0 || !any1)
        throw SingleClassError("correlation against a single-class label is undefined");

    std::vector<FeatureCorrelation> report;
    report.reserve(matrix.n_features());
    for (std::size_t c = 0; c < matrix.n_features(); ++c) {
        FeatureCorrelation fc;
        fc.feature = matrix.feature_names[c];
        std::vector<double> xs;
        std::vector<double> ys;
        for (std::size_t r = 0; r < matrix.n_subjects(); ++r)
            if (matrix.present[r][c]) {
                xs.push_back(matrix.values[r][c]);
                ys.push_back(static_cast<double>(matrix.labels[r]));
            }
        fc.n = xs.size();
        if (xs.size() >= 4) {
            try {
                fc.rho = spearman(xs, ys);
                fc.p = spearman_pvalue(*fc.rho, xs.size());
            } catch (const ConstantInputError&) {
                // leave undefined
            }
        }
        report.push_back(std::move(fc));
    }
    return report;
}

} // namespace vdm
