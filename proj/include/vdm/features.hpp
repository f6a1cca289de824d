#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vdm/dataset.hpp"
#include "vdm/emd.hpp"
#include "vdm/fluctuation.hpp"

namespace vdm {

// Everything the per-vowel pipeline can be steered by.
struct ExtractConfig {
    double mult_window_ms = 25.0;
    double mult_hop_ms = 10.0;
    int imf_cutoff = 5;     // additive trend = IMFs above this + residual
    double r2_gate = 0.99;  // Hurst log-log fit acceptance
    bool hurst_integrate = true;
    EmdConfig emd;
    ScaleRangeMs dfa_scales = kDfaScales;
    ScaleRangeMs hurst_scales = kHurstScales;
};

constexpr double kMinVowelMs = 25.0;

// Per-vowel measures. EMD-derived fields are absent when the decomposition
// fails; hurst_imf1 is additionally absent when the log-log fit misses the
// r2 gate (gate_r2 still records the fit quality).
struct VowelFeatures {
    double length_ms = 0.0;
    std::optional<double> dfa;
    double sd_mult_db = 0.0;
    std::optional<double> sd_add;
    std::optional<double> hurst_imf1;
    std::optional<double> gate_r2;
};

// Optional side products of extraction, for the CLI's debug dumps.
struct VowelDebug {
    ImfDecomposition decomposition;
    bool have_decomposition = false;
    FluctuationCurve hurst_curve;
    bool have_curve = false;
};

VowelFeatures extract_vowel_features(const VowelSample& vowel, const ExtractConfig& cfg,
                                     VowelDebug* debug = nullptr);

// min, median, max, range, mean, population SD - in that fixed order.
struct SixStats {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
    double range = 0.0;
    double mean = 0.0;
    double sd = 0.0;
};

SixStats aggregate(const std::vector<double>& values);

inline constexpr const char* kStatNames[6] = {"min", "median", "max", "range", "mean", "sd"};

struct SubjectFeatures {
    std::string subject_id;
    Stage stage = Stage::Premanifest;
    VowelFeatures sv;
    std::vector<VowelFeatures> ssv;
    std::vector<VowelFeatures> gfpv;
};

// Subjects x named features with an explicit missingness mask.
struct FeatureMatrix {
    std::vector<std::string> subject_ids;
    std::vector<std::string> feature_names;
    std::vector<std::string> feature_groups; // "vowel" or an external group name
    std::vector<std::vector<double>> values; // [subject][feature]
    std::vector<std::vector<char>> present;  // same shape; 1 = value valid
    std::vector<int> labels;                 // manifest 0/1
    std::vector<Stage> stages;

    std::size_t n_subjects() const { return subject_ids.size(); }
    std::size_t n_features() const { return feature_names.size(); }
    std::size_t col(const std::string& name) const; // SchemaError if absent
};

// Canonical 59-column layout: 5 single-valued SV features, then 4 measures x
// 6 statistics for SSV (no length), then 5 x 6 for GFPV.
std::vector<std::string> canonical_feature_names();

FeatureMatrix build_feature_matrix(const std::vector<SubjectFeatures>& subjects);

// Vowel counts per subject and kind before/after the Hurst r2 gate.
struct GateReportRow {
    std::string subject_id;
    VowelKind kind = VowelKind::SV;
    int vowels_before = 0;
    int vowels_after = 0;
};

std::vector<GateReportRow> gate_report(const std::vector<SubjectFeatures>& subjects);

// CSV layout: subject_id, feature columns, label_manifest, label_stage;
// missing cells are empty strings; comment lines start with '#'.
void write_feature_csv(const FeatureMatrix& matrix, const std::filesystem::path& path,
                       const std::vector<std::string>& comments);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

// External feature table (subject_id + numeric columns, missing cells empty).
// Columns are appended to the matrix under the given group name; subjects
// must match exactly (JoinError otherwise).
FeatureMatrix merge_external_features(const FeatureMatrix& matrix,
                                      const std::filesystem::path& csv_path,
                                      const std::string& group);

} // namespace vdm
