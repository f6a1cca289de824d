#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vdm/features.hpp"
#include "vdm/stats.hpp"

namespace vdm {

struct LogRegModel {
    std::vector<double> weights;
    double intercept = 0.0;
    double c = 1.0;
};

struct FitOptions {
    double c = 1.0;
    int lbfgs_memory = 10;
    double grad_tol = 1e-6;
    int max_iters = 500;
};

// Minimizes J(w, b) = 0.5 ||w||^2 + c * sum_i log(1 + exp(-y~_i (w.x_i + b)))
// with y~ in {-1, +1} and an unpenalized intercept, by limited-memory BFGS
// with Armijo backtracking.
LogRegModel fit_logreg(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                       const FitOptions& opts = {});

// Objective and gradient of J at (w, b); exposed for optimizer cross-checks.
double logreg_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                        double c, std::span<const double> wb, std::span<double> grad_out);

struct Prediction {
    double probability = 0.0; // of the manifest class
    int label = 0;            // manifest iff probability >= 0.5
};

Prediction predict(const LogRegModel& model, std::span<const double> x);

// Wald p-value per coefficient from the inverse Hessian of J at the optimum.
std::vector<double> wald_pvalues(const LogRegModel& model,
                                 const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y);

struct Metrics {
    double accuracy = 0.0;
    double f1 = 0.0; // manifest positive; zero-denominator cases give 0
};

Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred);

struct FoldRecord {
    std::string held_out;
    std::vector<std::string> selected;
    int y_true = 0;
    int y_pred = 0;
    double probability = 0.0;
    bool degenerate = false; // empty selection -> majority-class prediction
    std::vector<double> weights;
    double intercept = 0.0;
    std::vector<double> wald_p;
};

struct CoefficientRow {
    std::string feature;
    double mean_beta = 0.0;
    double sd_beta = 0.0; // population SD across the folds that selected it
    std::optional<double> p;
    int selection_count = 0;
};

struct LosoReport {
    std::vector<FoldRecord> folds;
    Metrics overall;
    // Features selected in strictly more than half of the folds.
    std::vector<CoefficientRow> coefficients;
    // How many folds selected each feature, name-sorted.
    std::vector<std::pair<std::string, int>> selection_frequency;
};

struct LosoConfig {
    SelectionConfig selection;
    FitOptions fit;
};

// Leave-one-subject-out evaluation. Selection, imputation, and scaling are
// re-fitted inside every fold on the training rows only.
LosoReport loso_evaluate(const FeatureMatrix& matrix, const LosoConfig& cfg);

} // namespace vdm
