#include "vdm/features.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>

#include "vdm/audio.hpp"
#include "vdm/csv.hpp"
#include "vdm/errors.hpp"
#include "vdm/trends.hpp"

namespace vdm {

VowelFeatures extract_vowel_features(const VowelSample& vowel, const ExtractConfig& cfg,
                                     VowelDebug* debug)
{
    if (vowel.length_ms() < kMinVowelMs)
        throw TooShortError("vowel of " + fmt_double(vowel.length_ms()) + " ms is below " +
                            fmt_double(kMinVowelMs) + " ms");

    const auto& raw = vowel.clip.samples;
    const int rate = vowel.clip.sample_rate_hz;

    VowelFeatures f;
    f.length_ms = vowel.length_ms();

    // Volume trend: quantified, then removed before everything EMD-based.
    MultTrendResult mult = multiplicative_trend(raw, rate, cfg.mult_window_ms, cfg.mult_hop_ms);
    f.sd_mult_db = mult.trend.sd_db;

    std::vector<double> normalized = std::move(mult.corrected);
    normalize_peak(normalized);

    try {
        const ImfDecomposition dec = decompose(normalized, cfg.emd);
        f.sd_add = additive_trend(dec, cfg.imf_cutoff).sd;
        if (!dec.imfs.empty()) {
            try {
                const HurstEstimate est = hurst_first_imf(dec.imfs[0], rate, cfg.r2_gate,
                                                          cfg.hurst_integrate, cfg.hurst_scales);
                f.gate_r2 = est.curve.r2;
                f.hurst_imf1 = est.exponent;
                if (debug) {
                    debug->hurst_curve = est.curve;
                    debug->have_curve = true;
                }
            } catch (const DegenerateSignalError&) {
                // flat first IMF: no roughness estimate
            }
        }
        if (debug) {
            debug->decomposition = dec;
            debug->have_decomposition = true;
        }
    } catch (const DecompositionError&) {
        // EMD-derived measures stay missing
    }

    // DFA runs on the raw segmented vowel, outside the trend pipeline.
    try {
        f.dfa = dfa_exponent(raw, rate, cfg.dfa_scales);
    } catch (const DegenerateSignalError&) {
    }

    return f;
}

SixStats aggregate(const std::vector<double>& values)
{
    if (values.empty())
        throw EmptyAggregateError("no values to aggregate");

    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    SixStats s;
    s.min = sorted.front();
    s.max = sorted.back();
    s.range = s.max - s.min;
    s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    double sum = 0.0;
    for (double v : sorted)
        sum += v;
    s.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : sorted) {
        const double d = v - s.mean;
        ss += d * d;
    }
    s.sd = std::sqrt(ss / static_cast<double>(n)); // population SD
    return s;
}

namespace {

constexpr const char* kMeasures[5] = {"length_ms", "dfa", "sd_mult", "sd_add", "hurst_imf1"};

} // namespace

std::vector<std::string> canonical_feature_names()
{
    std::vector<std::string> names;
    names.reserve(59);
    for (const char* m : kMeasures)
        names.push_back(std::string("sv.") + m);
    for (std::size_t mi = 1; mi < 5; ++mi) // SSV carries no length features
        for (const char* st : kStatNames)
            names.push_back(std::string("ssv.") + kMeasures[mi] + "." + st);
    for (const char* m : kMeasures)
        for (const char* st : kStatNames)
            names.push_back(std::string("gfpv.") + m + "." + st);
    return names;
}

FeatureMatrix build_feature_matrix(const std::vector<SubjectFeatures>& subjects)
{
    FeatureMatrix m;
    m.feature_names = canonical_feature_names();
    m.feature_groups.assign(m.feature_names.size(), "vowel");

    for (const auto& subj : subjects) {
        std::vector<double> row;
        std::vector<char> mask;
        row.reserve(m.feature_names.size());
        mask.reserve(m.feature_names.size());

        auto push = [&](std::optional<double> v) {
            row.push_back(v.value_or(0.0));
            mask.push_back(v.has_value() ? 1 : 0);
        };

        push(subj.sv.length_ms);
        push(subj.sv.dfa);
        push(subj.sv.sd_mult_db);
        push(subj.sv.sd_add);
        push(subj.sv.hurst_imf1);

        auto push_aggregates = [&](const std::vector<VowelFeatures>& vowels, bool with_length) {
            auto measure = [&](const std::function<std::optional<double>(const VowelFeatures&)>& get) {
                std::vector<double> vals;
                for (const auto& v : vowels) {
                    const auto o = get(v);
                    if (o)
                        vals.push_back(*o);
                }
                if (vals.empty()) {
                    for (int i = 0; i < 6; ++i)
                        push(std::nullopt);
                    return;
                }
                const SixStats st = aggregate(vals);
                push(st.min);
                push(st.median);
                push(st.max);
                push(st.range);
                push(st.mean);
                push(st.sd);
            };
            if (with_length)
                measure([](const VowelFeatures& v) { return std::optional<double>(v.length_ms); });
            measure([](const VowelFeatures& v) { return v.dfa; });
            measure([](const VowelFeatures& v) { return std::optional<double>(v.sd_mult_db); });
            measure([](const VowelFeatures& v) { return v.sd_add; });
            measure([](const VowelFeatures& v) { return v.hurst_imf1; });
        };
        push_aggregates(subj.ssv, false);
        push_aggregates(subj.gfpv, true);

        m.subject_ids.push_back(subj.subject_id);
        m.stages.push_back(subj.stage);
        m.labels.push_back(stage_manifest(subj.stage));
        m.values.push_back(std::move(row));
        m.present.push_back(std::move(mask));
    }
    return m;
}

std::vector<GateReportRow> gate_report(const std::vector<SubjectFeatures>& subjects)
{
    std::vector<GateReportRow> rows;
    auto count = [](const std::vector<VowelFeatures>& vowels) {
        int after = 0;
        for (const auto& v : vowels)
            if (v.hurst_imf1)
                ++after;
        return after;
    };
    for (const auto& subj : subjects) {
        rows.push_back({subj.subject_id, VowelKind::SV, 1, subj.sv.hurst_imf1 ? 1 : 0});
        rows.push_back({subj.subject_id, VowelKind::SSV, static_cast<int>(subj.ssv.size()),
                        count(subj.ssv)});
        rows.push_back({subj.subject_id, VowelKind::GFPV, static_cast<int>(subj.gfpv.size()),
                        count(subj.gfpv)});
    }
    return rows;
}

std::size_t FeatureMatrix::col(const std::string& name) const
{
    for (std::size_t i = 0; i < feature_names.size(); ++i)
        if (feature_names[i] == name)
            return i;
    throw SchemaError("no such feature: " + name);
}

void write_feature_csv(const FeatureMatrix& matrix, const std::filesystem::path& path,
                       const std::vector<std::string>& comments)
{
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot write " + path.string());
    for (const auto& c : comments)
        f << "# " << c << "\n";
    f << "subject_id";
    for (const auto& name : matrix.feature_names)
        f << "," << name;
    f << ",label_manifest,label_stage\n";
    for (std::size_t r = 0; r < matrix.n_subjects(); ++r) {
        f << matrix.subject_ids[r];
        for (std::size_t c = 0; c < matrix.n_features(); ++c) {
            f << ",";
            if (matrix.present[r][c])
                f << fmt_double(matrix.values[r][c]);
        }
        f << "," << matrix.labels[r] << "," << stage_name(matrix.stages[r]) << "\n";
    }
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path)
{
    const CsvTable table = read_csv(path);
    if (table.header.size() < 3 || table.header.front() != "subject_id" ||
        table.header[table.header.size() - 2] != "label_manifest" ||
        table.header.back() != "label_stage")
        throw SchemaError("feature CSV must be subject_id,<features...>,label_manifest,label_stage");

    FeatureMatrix m;
    const std::size_t n_features = table.header.size() - 3;
    m.feature_names.assign(table.header.begin() + 1, table.header.end() - 2);
    m.feature_groups.assign(n_features, "vowel");

    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        const std::string& id = row.front();
        if (!seen.insert(id).second)
            throw DuplicateError("duplicate subject_id: " + id);
        m.subject_ids.push_back(id);

        std::vector<double> values(n_features, 0.0);
        std::vector<char> mask(n_features, 0);
        for (std::size_t c = 0; c < n_features; ++c) {
            const std::string& cell = row[c + 1];
            if (!cell.empty()) {
                values[c] = parse_double(cell);
                mask[c] = 1;
            }
        }
        m.values.push_back(std::move(values));
        m.present.push_back(std::move(mask));

        const int label = parse_int(row[row.size() - 2]);
        if (label != 0 && label != 1)
            throw SchemaError("label_manifest must be 0 or 1");
        m.labels.push_back(label);

        const std::string& stage = row.back();
        if (stage == "premanifest")
            m.stages.push_back(Stage::Premanifest);
        else if (stage == "early")
            m.stages.push_back(Stage::EarlyManifest);
        else if (stage == "late")
            m.stages.push_back(Stage::LateManifest);
        else
            throw SchemaError("unknown stage label '" + stage + "'");
        if (stage_manifest(m.stages.back()) != label)
            throw ValidationError("stage and manifest label disagree for " + id);
    }
    return m;
}

FeatureMatrix merge_external_features(const FeatureMatrix& matrix,
                                      const std::filesystem::path& csv_path,
                                      const std::string& group)
{
    const CsvTable table = read_csv(csv_path);
    if (table.header.empty() || table.header.front() != "subject_id")
        throw SchemaError("external feature CSV must start with subject_id");

    std::map<std::string, const std::vector<std::string>*> by_id;
    for (const auto& row : table.rows)
        if (!by_id.emplace(row.front(), &row).second)
            throw DuplicateError("duplicate subject_id in " + csv_path.string() + ": " +
                                 row.front());

    // The two files must cover exactly the same subjects.
    std::vector<std::string> missing;
    for (const auto& id : matrix.subject_ids)
        if (!by_id.count(id))
            missing.push_back(id);
    std::vector<std::string> extra;
    const std::set<std::string> known(matrix.subject_ids.begin(), matrix.subject_ids.end());
    for (const auto& [id, row] : by_id)
        if (!known.count(id))
            extra.push_back(id);
    if (!missing.empty() || !extra.empty()) {
        std::string msg = "subject mismatch with " + csv_path.string() + ":";
        for (const auto& id : missing)
            msg += " missing " + id;
        for (const auto& id : extra)
            msg += " extra " + id;
        throw JoinError(msg);
    }

    FeatureMatrix merged = matrix;
    const std::set<std::string> existing(matrix.feature_names.begin(),
                                         matrix.feature_names.end());
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        const std::string& name = table.header[c];
        if (existing.count(name))
            throw DuplicateError("external feature name collides: " + name);
        merged.feature_names.push_back(name);
        merged.feature_groups.push_back(group);
    }
    for (std::size_t r = 0; r < merged.n_subjects(); ++r) {
        const auto& row = *by_id.at(merged.subject_ids[r]);
        for (std::size_t c = 1; c < table.header.size(); ++c) {
            const std::string& cell = c < row.size() ? row[c] : std::string();
            if (cell.empty()) {
                merged.values[r].push_back(0.0);
                merged.present[r].push_back(0);
            } else {
                merged.values[r].push_back(parse_double(cell));
                merged.present[r].push_back(1);
            }
        }
    }
    return merged;
}

} // namespace vdm
