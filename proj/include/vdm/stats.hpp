#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vdm/features.hpp"

namespace vdm {

// Average ranks (1-based; ties share the mean rank).
std::vector<double> mean_ranks(std::span<const double> x);

// Spearman rho = Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

// Two-sided p from the Student-t approximation with n-2 degrees of freedom;
// |rho| = 1 gives p = 0 by convention.
double spearman_pvalue(double rho, std::size_t n);

// Variance inflation factor of a candidate column against a set of confirmed
// columns: OLS with intercept, VIF = 1/(1 - R^2); +infinity when R^2 = 1.
// Rank-deficient systems fall back to a 1e-8 ridge.
double vif(std::span<const double> candidate, const std::vector<std::vector<double>>& confirmed);

struct SelectionConfig {
    double p_threshold = 0.1;
    double vif_threshold = 5.0;
    int max_features = 10;
    std::map<std::string, int> quotas; // per-group caps; empty = no quotas
};

struct SelectionRound {
    std::string added;
    double rho = 0.0;
    double p = 0.0;
    std::vector<std::pair<std::string, double>> pruned; // (feature, VIF)
    std::vector<std::string> quota_blocked;
};

struct SelectionResult {
    std::vector<std::string> confirmed; // in selection order
    std::vector<SelectionRound> audit;
};

// The greedy correlation/VIF loop, restricted to the given subject rows
// (training rows in cross-validation). Correlations use pairwise-complete
// cases; VIF runs on mean-imputed, z-scored training columns.
SelectionResult select_features(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows,
                                const SelectionConfig& cfg);

// Per-column imputation + z-scoring fitted on training rows only. Missing
// cells take the training mean of the column's present cells; a zero-SD
// column maps to all zeros.
struct Standardizer {
    std::vector<std::size_t> cols;
    std::vector<double> mean; // training mean (also the imputation constant)
    std::vector<double> sd;   // population SD of the imputed training column
};

Standardizer zscore_fit(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows,
                        const std::vector<std::size_t>& cols);

std::vector<double> zscore_apply(const Standardizer& st, const FeatureMatrix& matrix,
                                 std::size_t row);

// Per-feature Spearman correlation against the manifest label on
// pairwise-complete cases; rho/p absent when undefined (constant column or
// fewer than 4 pairs).
struct FeatureCorrelation {
    std::string feature;
    std::optional<double> rho;
    std::optional<double> p;
    std::size_t n = 0;
};

std::vector<FeatureCorrelation> correlation_report(const FeatureMatrix& matrix);

} // namespace vdm
