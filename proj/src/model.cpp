#include "vdm/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "vdm/errors.hpp"

namespace vdm {

namespace {

// log(1 + exp(u)) without overflow.
double softplus(double u)
{
    if (u > 35.0)
        return u;
    if (u < -35.0)
        return std::exp(u);
    return std::log1p(std::exp(u));
}

double sigmoid(double z)
{
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_xy(const std::vector<std::vector<double>>& x, const std::vector<int>& y)
{
    if (x.size() != y.size() || x.empty())
        throw DimensionError("feature rows and labels disagree");
    const std::size_t d = x[0].size();
    for (const auto& row : x)
        if (row.size() != d)
            throw DimensionError("ragged feature rows");
}

} // namespace

double logreg_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                        double c, std::span<const double> wb, std::span<double> grad_out)
{
    const std::size_t d = x[0].size();
    const double b = wb[d];

    double obj = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        obj += 0.5 * wb[j] * wb[j];
        grad_out[j] = wb[j];
    }
    grad_out[d] = 0.0;

    for (std::size_t i = 0; i < x.size(); ++i) {
        const double yi = y[i] ? 1.0 : -1.0;
        double z = b;
        for (std::size_t j = 0; j < d; ++j)
            z += wb[j] * x[i][j];
        obj += c * softplus(-yi * z);
        const double g = -c * yi * sigmoid(-yi * z);
        for (std::size_t j = 0; j < d; ++j)
            grad_out[j] += g * x[i][j];
        grad_out[d] += g;
    }
    return obj;
}

LogRegModel fit_logreg(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                       const FitOptions& opts)
{
    check_xy(x, y);
    const bool any0 = std::any_of(y.begin(), y.end(), [](int v) { return v == 0; });
    const bool any1 = std::any_of(y.begin(), y.end(), [](int v) { return v != 0; });
    if (!any0 || !any1)
        throw SingleClassError("logistic regression needs both classes");

    const std::size_t d = x[0].size();
    const std::size_t dim = d + 1; // weights + intercept
    std::vector<double> wb(dim, 0.0);
    std::vector<double> grad(dim, 0.0);
    double obj = logreg_objective(x, y, opts.c, wb, grad);

    // limited-memory curvature pairs, newest last
    std::deque<std::vector<double>> s_hist;
    std::deque<std::vector<double>> y_hist;
    std::deque<double> rho_hist;

    std::vector<double> direction(dim);
    std::vector<double> wb_next(dim);
    std::vector<double> grad_next(dim);

    auto norm2 = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double e : v)
            s += e * e;
        return std::sqrt(s);
    };

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (norm2(grad) <= opts.grad_tol)
            break;

        // two-loop recursion: direction = -H.grad
        direction = grad;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            double sd = 0.0;
            for (std::size_t j = 0; j < dim; ++j)
                sd += s_hist[k][j] * direction[j];
            alpha[k] = rho_hist[k] * sd;
            for (std::size_t j = 0; j < dim; ++j)
                direction[j] -= alpha[k] * y_hist[k][j];
        }
        if (!s_hist.empty()) {
            // initial Hessian scaling gamma = s.y / y.y of the newest pair
            double sy = 0.0;
            double yy = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                sy += s_hist.back()[j] * y_hist.back()[j];
                yy += y_hist.back()[j] * y_hist.back()[j];
            }
            const double gamma = sy / yy;
            for (double& v : direction)
                v *= gamma;
        }
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            double yd = 0.0;
            for (std::size_t j = 0; j < dim; ++j)
                yd += y_hist[k][j] * direction[j];
            const double beta = rho_hist[k] * yd;
            for (std::size_t j = 0; j < dim; ++j)
                direction[j] += (alpha[k] - beta) * s_hist[k][j];
        }
        for (double& v : direction)
            v = -v;

        double dir_dot_grad = 0.0;
        for (std::size_t j = 0; j < dim; ++j)
            dir_dot_grad += direction[j] * grad[j];
        if (dir_dot_grad >= 0.0) {
            // not a descent direction (stale curvature); fall back to -grad
            for (std::size_t j = 0; j < dim; ++j)
                direction[j] = -grad[j];
            dir_dot_grad = -norm2(grad) * norm2(grad);
        }

        // Armijo backtracking
        double step = 1.0;
        double obj_next = obj;
        constexpr double kArmijo = 1e-4;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t j = 0; j < dim; ++j)
                wb_next[j] = wb[j] + step * direction[j];
            obj_next = logreg_objective(x, y, opts.c, wb_next, grad_next);
            if (obj_next <= obj + kArmijo * step * dir_dot_grad) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved)
            break;

        std::vector<double> s(dim);
        std::vector<double> yv(dim);
        double sy = 0.0;
        double ss = 0.0;
        double yy = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            s[j] = wb_next[j] - wb[j];
            yv[j] = grad_next[j] - grad[j];
            sy += s[j] * yv[j];
            ss += s[j] * s[j];
            yy += yv[j] * yv[j];
        }
        // keep only safely positive-curvature pairs
        if (sy > 1e-12 * std::sqrt(ss * yy)) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.lbfgs_memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        wb.swap(wb_next);
        grad.swap(grad_next);
        obj = obj_next;
    }

    LogRegModel model;
    model.weights.assign(wb.begin(), wb.begin() + static_cast<std::ptrdiff_t>(d));
    model.intercept = wb[d];
    model.c = opts.c;
    return model;
}

Prediction predict(const LogRegModel& model, std::span<const double> x)
{
    if (x.size() != model.weights.size())
        throw DimensionError("feature vector does not match model dimension");
    double z = model.intercept;
    for (std::size_t j = 0; j < x.size(); ++j)
        z += model.weights[j] * x[j];
    Prediction p;
    p.probability = sigmoid(z);
    p.label = p.probability >= 0.5 ? 1 : 0;
    return p;
}

std::vector<double> wald_pvalues(const LogRegModel& model,
                                 const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y)
{
    check_xy(x, y);
    const std::size_t d = model.weights.size();
    const std::size_t dim = d + 1;

    // Hessian of J: identity on the weight block (L2 term) plus
    // c * sum_i p_i (1 - p_i) x~_i x~_i^T with x~ = [x, 1].
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t j = 0; j < d; ++j)
        hess(j, j) = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double z = model.intercept;
        for (std::size_t j = 0; j < d; ++j)
            z += model.weights[j] * x[i][j];
        const double p = sigmoid(z);
        const double w = model.c * p * (1.0 - p);
        Eigen::VectorXd xi(dim);
        for (std::size_t j = 0; j < d; ++j)
            xi(j) = x[i][j];
        xi(d) = 1.0;
        hess += w * xi * xi.transpose();
    }

    const Eigen::MatrixXd cov = hess.inverse();
    std::vector<double> pvals(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double var = cov(j, j);
        if (!(var > 0.0)) {
            pvals[j] = 1.0;
            continue;
        }
        const double zstat = model.weights[j] / std::sqrt(var);
        pvals[j] = std::erfc(std::abs(zstat) / std::sqrt(2.0));
    }
    return pvals;
}

Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred)
{
    if (y_true.size() != y_pred.size() || y_true.empty())
        throw DimensionError("label vectors disagree");
    std::size_t correct = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i])
            ++correct;
        if (y_pred[i] == 1 && y_true[i] == 1)
            ++tp;
        if (y_pred[i] == 1 && y_true[i] == 0)
            ++fp;
        if (y_pred[i] == 0 && y_true[i] == 1)
            ++fn;
    }
    Metrics m;
    m.accuracy = static_cast<double>(correct) / static_cast<double>(y_true.size());
    if (tp + fp == 0 || tp + fn == 0) {
        m.f1 = 0.0;
        return m;
    }
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    m.f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    return m;
}

LosoReport loso_evaluate(const FeatureMatrix& matrix, const LosoConfig& cfg)
{
    const std::size_t n = matrix.n_subjects();
    std::size_t n0 = 0;
    std::size_t n1 = 0;
    for (int label : matrix.labels)
        (label ? n1 : n0)++;
    if (n0 < 2 || n1 < 2)
        throw ValidationError("leave-one-out needs at least 2 subjects per class");

    LosoReport report;
    report.folds.reserve(n);

    for (std::size_t held = 0; held < n; ++held) {
        std::vector<std::size_t> train_rows;
        train_rows.reserve(n - 1);
        for (std::size_t r = 0; r < n; ++r)
            if (r != held)
                train_rows.push_back(r);

        FoldRecord fold;
        fold.held_out = matrix.subject_ids[held];
        fold.y_true = matrix.labels[held];

        const SelectionResult sel = select_features(matrix, train_rows, cfg.selection);
        fold.selected = sel.confirmed;

        if (sel.confirmed.empty()) {
            // Nothing survived the p-gate: predict the training majority.
            std::size_t pos = 0;
            for (std::size_t r : train_rows)
                pos += matrix.labels[r] ? 1 : 0;
            const double rate =
                static_cast<double>(pos) / static_cast<double>(train_rows.size());
            fold.degenerate = true;
            fold.probability = rate;
            fold.y_pred = rate >= 0.5 ? 1 : 0;
            report.folds.push_back(std::move(fold));
            continue;
        }

        std::vector<std::size_t> cols;
        cols.reserve(sel.confirmed.size());
        for (const auto& name : sel.confirmed)
            cols.push_back(matrix.col(name));

        const Standardizer st = zscore_fit(matrix, train_rows, cols);
        std::vector<std::vector<double>> x_train;
        std::vector<int> y_train;
        x_train.reserve(train_rows.size());
        for (std::size_t r : train_rows) {
            x_train.push_back(zscore_apply(st, matrix, r));
            y_train.push_back(matrix.labels[r]);
        }

        const LogRegModel model = fit_logreg(x_train, y_train, cfg.fit);
        const Prediction pred = predict(model, zscore_apply(st, matrix, held));
        fold.y_pred = pred.label;
        fold.probability = pred.probability;
        fold.weights = model.weights;
        fold.intercept = model.intercept;
        fold.wald_p = wald_pvalues(model, x_train, y_train);
        report.folds.push_back(std::move(fold));
    }

    std::vector<int> y_true;
    std::vector<int> y_pred;
    for (const auto& fold : report.folds) {
        y_true.push_back(fold.y_true);
        y_pred.push_back(fold.y_pred);
    }
    report.overall = compute_metrics(y_true, y_pred);

    // Coefficient table for features selected in a strict majority of folds:
    // mean +/- population SD of the per-fold weights, and the median of the
    // per-fold Wald p-values.
    std::map<std::string, std::vector<std::pair<double, double>>> by_feature; // (beta, p)
    for (const auto& fold : report.folds)
        for (std::size_t j = 0; j < fold.selected.size(); ++j)
            by_feature[fold.selected[j]].emplace_back(fold.weights[j], fold.wald_p[j]);

    for (const auto& [feature, entries] : by_feature)
        report.selection_frequency.emplace_back(feature, static_cast<int>(entries.size()));

    for (const auto& [feature, entries] : by_feature) {
        if (entries.size() * 2 <= report.folds.size())
            continue;
        CoefficientRow row;
        row.feature = feature;
        row.selection_count = static_cast<int>(entries.size());
        double mean = 0.0;
        for (const auto& [beta, p] : entries)
            mean += beta;
        mean /= static_cast<double>(entries.size());
        double ss = 0.0;
        std::vector<double> ps;
        for (const auto& [beta, p] : entries) {
            ss += (beta - mean) * (beta - mean);
            ps.push_back(p);
        }
        row.mean_beta = mean;
        row.sd_beta = std::sqrt(ss / static_cast<double>(entries.size()));
        std::sort(ps.begin(), ps.end());
        const std::size_t m = ps.size();
        row.p = m % 2 == 1 ? ps[m / 2] : 0.5 * (ps[m / 2 - 1] + ps[m / 2]);
        report.coefficients.push_back(std::move(row));
    }
    return report;
}

} // namespace vdm
