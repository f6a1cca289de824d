#include "vdm/cli.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "vdm/audio.hpp"
#include "vdm/csv.hpp"
#include "vdm/dataset.hpp"
#include "vdm/errors.hpp"
#include "vdm/features.hpp"
#include "vdm/model.hpp"
#include "vdm/stats.hpp"
#include "vdm/synth.hpp"
#include "vdm/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace vdm {
namespace {

std::string version_line() { return std::string(kToolName) + " " + kVersion; }

// ---------------------------------------------------------------- synth ----

struct SynthOpts {
    std::string out_dir;
    int n_per_class = 15;
    std::uint64_t seed = 0;
    std::string deltas = "65,-0.15,0.1"; // gfpv length ms, noise H, envelope depth
    double sv_ms = 2000.0;
    double gfpv_ms = 150.0;
    int gfpv_count = 11;
    double noise_level = 0.22;
    double base_h = 0.75;
    double base_env = 0.08;
    bool force = false;
};

CohortDeltas parse_deltas(const std::string& text)
{
    std::istringstream in(text);
    std::string part;
    std::vector<double> vals;
    while (std::getline(in, part, ','))
        vals.push_back(parse_double(part));
    if (vals.size() != 3)
        throw ValidationError("--deltas wants three comma-separated numbers "
                              "(gfpv length ms, noise H, envelope depth)");
    CohortDeltas d;
    d.gfpv_length_ms = vals[0];
    d.noise_h = vals[1];
    d.env_depth = vals[2];
    return d;
}

int cmd_synth(const SynthOpts& o)
{
    const fs::path out(o.out_dir);
    if (fs::exists(out) && !fs::is_empty(out) && !o.force) {
        std::cerr << "error: " << out.string()
                  << " exists and is not empty (use --force to overwrite)\n";
        return 1;
    }

    CohortSpec spec;
    spec.n_per_class = o.n_per_class;
    spec.deltas = parse_deltas(o.deltas);
    spec.sv_duration_ms = o.sv_ms;
    spec.gfpv_base_ms = o.gfpv_ms;
    spec.gfpv_per_subject = o.gfpv_count;
    spec.noise_level = o.noise_level;
    spec.base_noise_h = o.base_h;
    spec.base_env_depth = o.base_env;
    spec.seed = o.seed;

    std::ostringstream cfg;
    cfg << "config: seed=" << o.seed << " n_per_class=" << o.n_per_class << " deltas="
        << fmt_double(spec.deltas.gfpv_length_ms) << "," << fmt_double(spec.deltas.noise_h) << ","
        << fmt_double(spec.deltas.env_depth) << " sv_ms=" << fmt_double(o.sv_ms)
        << " gfpv_ms=" << fmt_double(o.gfpv_ms) << " gfpv_count=" << o.gfpv_count
        << " noise_level=" << fmt_double(o.noise_level) << " base_h=" << fmt_double(o.base_h)
        << " base_env=" << fmt_double(o.base_env);

    const CohortPaths paths = gen_cohort(spec, out, {version_line(), cfg.str()});
    std::cout << "wrote " << paths.manifest_csv.string() << " ("
              << 2 * spec.n_per_class << " subjects)\n";
    return 0;
}

// -------------------------------------------------------------- extract ----

struct ExtractOpts {
    std::string manifest;
    std::string segments;
    std::string out;
    std::string gate_out;
    std::string dump_imfs_dir;
    std::string dump_curves_dir;
    std::uint64_t seed = 0;
    int ssv_count = 10;
    int imf_cutoff = 5;
    double r2_gate = 0.99;
    bool no_hurst_integrate = false;
    int jobs = 1;
};

void dump_imfs_csv(const fs::path& path, const ImfDecomposition& dec)
{
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot write " + path.string());
    for (std::size_t k = 0; k < dec.imfs.size(); ++k)
        f << "imf" << k + 1 << ",";
    f << "residual\n";
    for (std::size_t i = 0; i < dec.residual.size(); ++i) {
        for (const auto& imf : dec.imfs)
            f << fmt_double(imf[i]) << ",";
        f << fmt_double(dec.residual[i]) << "\n";
    }
}

void dump_curve_csv(const fs::path& path, const FluctuationCurve& curve)
{
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot write " + path.string());
    f << "window_samples,fluctuation,log_window,log_fluctuation\n";
    for (std::size_t i = 0; i < curve.window_sizes.size(); ++i)
        f << curve.window_sizes[i] << "," << fmt_double(curve.fluctuations[i]) << ","
          << fmt_double(std::log(static_cast<double>(curve.window_sizes[i]))) << ","
          << fmt_double(std::log(curve.fluctuations[i])) << "\n";
    f << "fit," << fmt_double(curve.slope) << "," << fmt_double(curve.intercept) << ","
      << fmt_double(curve.r2) << "\n";
}

int cmd_extract(const ExtractOpts& o)
{
    const auto records = load_manifest(o.manifest);
    const auto annotations = load_annotations(o.segments);
    if (records.empty())
        throw EmptyInputError("manifest lists no subjects");

    std::map<std::string, std::vector<SegmentAnnotation>> gfp_annotations;
    for (const auto& a : annotations)
        if (a.task == Task::GFP)
            gfp_annotations[a.subject_id].push_back(a);

    ExtractConfig cfg;
    cfg.imf_cutoff = o.imf_cutoff;
    cfg.r2_gate = o.r2_gate;
    cfg.hurst_integrate = !o.no_hurst_integrate;

    const bool want_imfs = !o.dump_imfs_dir.empty();
    const bool want_curves = !o.dump_curves_dir.empty();
    if (want_imfs)
        fs::create_directories(o.dump_imfs_dir);
    if (want_curves)
        fs::create_directories(o.dump_curves_dir);

    const std::size_t n = records.size();
    std::vector<std::optional<SubjectFeatures>> results(n);
    std::vector<std::string> errors(n);

    auto extract_one = [&](const VowelSample& vowel, const std::string& tag) {
        VowelDebug debug;
        VowelDebug* dbg = (want_imfs || want_curves) ? &debug : nullptr;
        const VowelFeatures f = extract_vowel_features(vowel, cfg, dbg);
        if (want_imfs && debug.have_decomposition)
            dump_imfs_csv(fs::path(o.dump_imfs_dir) / (tag + "_imfs.csv"), debug.decomposition);
        if (want_curves && debug.have_curve)
            dump_curve_csv(fs::path(o.dump_curves_dir) / (tag + "_curve.csv"), debug.hurst_curve);
        return f;
    };

    auto process = [&](std::size_t i) {
        const SubjectRecord& rec = records[i];
        try {
            SubjectFeatures sf;
            sf.subject_id = rec.subject_id;
            sf.stage = derive_label(rec.dcl, rec.tfc);

            const AudioClip sv_clip = load_wav(rec.sv_wav);
            const VowelSample sv = whole_sv(sv_clip, rec.subject_id);
            sf.sv = extract_one(sv, rec.subject_id + "_sv");

            Rng rng(child_seed(o.seed, i));
            const auto segments = sample_ssv(sv, o.ssv_count, rng);
            for (std::size_t k = 0; k < segments.size(); ++k)
                sf.ssv.push_back(
                    extract_one(segments[k], rec.subject_id + "_ssv" + std::to_string(k)));

            const auto it = gfp_annotations.find(rec.subject_id);
            if (it != gfp_annotations.end()) {
                const AudioClip gfp_clip = load_wav(rec.gfp_wav);
                const auto vowels = cut_segments(gfp_clip, rec.subject_id, it->second);
                for (std::size_t k = 0; k < vowels.size(); ++k)
                    sf.gfpv.push_back(
                        extract_one(vowels[k], rec.subject_id + "_gfpv" + std::to_string(k)));
            }
            results[i] = std::move(sf);
        } catch (const std::exception& e) {
            errors[i] = rec.subject_id + ": " + e.what();
        }
    };

    if (o.jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            process(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;)
                process(i);
        };
        std::vector<std::thread> pool;
        const int threads = std::min<int>(o.jobs, static_cast<int>(n));
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    bool failed = false;
    for (const auto& e : errors)
        if (!e.empty()) {
            std::cerr << "error: " << e << "\n";
            failed = true;
        }
    if (failed)
        return 2;

    std::vector<SubjectFeatures> subjects;
    subjects.reserve(n);
    for (auto& r : results)
        subjects.push_back(std::move(*r));

    std::ostringstream cfg_line;
    cfg_line << "config: seed=" << o.seed << " ssv_count=" << o.ssv_count
             << " imf_trend_cutoff=" << o.imf_cutoff << " r2_gate=" << fmt_double(o.r2_gate)
             << " hurst_integrate=" << (cfg.hurst_integrate ? 1 : 0)
             << " mult_window_ms=" << fmt_double(cfg.mult_window_ms)
             << " mult_hop_ms=" << fmt_double(cfg.mult_hop_ms) << " dfa_ms="
             << fmt_double(cfg.dfa_scales.min_ms) << "-" << fmt_double(cfg.dfa_scales.max_ms)
             << " hurst_ms=" << fmt_double(cfg.hurst_scales.min_ms) << "-"
             << fmt_double(cfg.hurst_scales.max_ms)
             << " emd_sd_threshold=" << fmt_double(cfg.emd.sd_threshold)
             << " emd_max_sifts=" << cfg.emd.max_sift_iters
             << " emd_max_imfs=" << cfg.emd.max_imfs;
    const std::vector<std::string> comments{version_line(), cfg_line.str(),
                                            "inputs: manifest=" + o.manifest +
                                                " segments=" + o.segments};

    const FeatureMatrix matrix = build_feature_matrix(subjects);
    write_feature_csv(matrix, o.out, comments);

    fs::path gate_path(o.gate_out);
    if (gate_path.empty()) {
        gate_path = fs::path(o.out);
        gate_path.replace_filename(gate_path.stem().string() + "_gate.csv");
    }
    {
        std::ofstream f(gate_path);
        if (!f)
            throw IoError("cannot write " + gate_path.string());
        for (const auto& c : comments)
            f << "# " << c << "\n";
        f << "subject_id,kind,vowels_before,vowels_after\n";
        for (const auto& row : gate_report(subjects))
            f << row.subject_id << "," << vowel_kind_name(row.kind) << "," << row.vowels_before
              << "," << row.vowels_after << "\n";
    }

    std::cout << "wrote " << o.out << " (" << matrix.n_subjects() << " subjects x "
              << matrix.n_features() << " features) and " << gate_path.string() << "\n";
    return 0;
}

// ------------------------------------------------------------ correlate ----

struct CorrelateOpts {
    std::string features;
    std::string out;
};

int cmd_correlate(const CorrelateOpts& o)
{
    const FeatureMatrix matrix = read_feature_csv(o.features);
    const auto report = correlation_report(matrix);

    std::unordered_map<std::string, const FeatureCorrelation*> by_name;
    for (const auto& fc : report)
        by_name.emplace(fc.feature, &fc);

    constexpr const char* kMeasures[5] = {"length_ms", "dfa", "sd_mult", "sd_add", "hurst_imf1"};

    std::ofstream f(o.out);
    if (!f)
        throw IoError("cannot write " + o.out);
    f << "# " << version_line() << "\n";
    f << "# config: significance p<0.05 (two-sided Spearman t-approximation)\n";
    f << "# inputs: features=" << o.features << "\n";
    f << "sample,statistic";
    for (const char* m : kMeasures)
        f << "," << m << "_rho," << m << "_p," << m << "_n," << m << "_sig";
    f << "\n";

    auto write_row = [&](const std::string& sample, const std::string& stat) {
        f << sample << "," << stat;
        for (const char* m : kMeasures) {
            std::string name = sample + "." + m;
            if (stat != "value")
                name += "." + stat;
            const auto it = by_name.find(name);
            if (it == by_name.end()) {
                f << ",,,,";
                continue;
            }
            const FeatureCorrelation& fc = *it->second;
            f << ",";
            if (fc.rho)
                f << fmt_double(*fc.rho);
            f << ",";
            if (fc.p)
                f << fmt_double(*fc.p);
            f << "," << fc.n << ",";
            if (fc.p)
                f << (*fc.p < 0.05 ? 1 : 0);
        }
        f << "\n";
    };

    write_row("sv", "value");
    for (const char* st : kStatNames)
        write_row("ssv", st);
    for (const char* st : kStatNames)
        write_row("gfpv", st);

    std::cout << "wrote " << o.out << "\n";
    return 0;
}

// ------------------------------------------------------------- classify ----

struct ClassifyOpts {
    std::string features;
    std::string baseline;
    std::string quota;
    std::string out;
    std::string coef_out;
    double p_threshold = 0.1;
    double vif_threshold = 5.0;
    int max_features = 10;
    double c = 1.0;
};

FeatureMatrix submatrix_by_groups(const FeatureMatrix& m, const std::set<std::string>& groups)
{
    FeatureMatrix out;
    out.subject_ids = m.subject_ids;
    out.labels = m.labels;
    out.stages = m.stages;
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < m.n_features(); ++c)
        if (groups.count(m.feature_groups[c])) {
            keep.push_back(c);
            out.feature_names.push_back(m.feature_names[c]);
            out.feature_groups.push_back(m.feature_groups[c]);
        }
    for (std::size_t r = 0; r < m.n_subjects(); ++r) {
        std::vector<double> vals;
        std::vector<char> mask;
        vals.reserve(keep.size());
        mask.reserve(keep.size());
        for (std::size_t c : keep) {
            vals.push_back(m.values[r][c]);
            mask.push_back(m.present[r][c]);
        }
        out.values.push_back(std::move(vals));
        out.present.push_back(std::move(mask));
    }
    return out;
}

ordered_json report_to_json(const LosoReport& rep)
{
    ordered_json j;
    j["accuracy"] = rep.overall.accuracy;
    j["f1"] = rep.overall.f1;
    j["folds"] = ordered_json::array();
    for (const auto& fold : rep.folds) {
        ordered_json fj;
        fj["held_out"] = fold.held_out;
        fj["y_true"] = fold.y_true;
        fj["y_pred"] = fold.y_pred;
        fj["probability"] = fold.probability;
        fj["degenerate"] = fold.degenerate;
        fj["selected"] = fold.selected;
        fj["weights"] = fold.weights;
        fj["intercept"] = fold.intercept;
        fj["wald_p"] = fold.wald_p;
        j["folds"].push_back(std::move(fj));
    }
    j["coefficients"] = ordered_json::array();
    for (const auto& row : rep.coefficients) {
        ordered_json cj;
        cj["feature"] = row.feature;
        cj["mean_beta"] = row.mean_beta;
        cj["sd_beta"] = row.sd_beta;
        if (row.p)
            cj["p"] = *row.p;
        else
            cj["p"] = nullptr;
        cj["selection_count"] = row.selection_count;
        j["coefficients"].push_back(std::move(cj));
    }
    j["selection_frequency"] = ordered_json::array();
    for (const auto& [feature, count] : rep.selection_frequency) {
        ordered_json sj;
        sj["feature"] = feature;
        sj["count"] = count;
        j["selection_frequency"].push_back(std::move(sj));
    }
    return j;
}

int cmd_classify(const ClassifyOpts& o)
{
    FeatureMatrix matrix = read_feature_csv(o.features);
    const bool have_baseline = !o.baseline.empty();
    if (have_baseline)
        matrix = merge_external_features(matrix, o.baseline, "baseline");

    std::map<std::string, int> quotas;
    if (!o.quota.empty()) {
        if (!have_baseline) {
            std::cerr << "error: --quota needs --baseline-features\n";
            return 1;
        }
        std::istringstream in(o.quota);
        std::string part;
        std::vector<int> vals;
        while (std::getline(in, part, ','))
            vals.push_back(parse_int(part));
        if (vals.size() != 2 || vals[0] < 1 || vals[1] < 1) {
            std::cerr << "error: --quota wants two positive counts (baseline,vowel)\n";
            return 1;
        }
        quotas["baseline"] = vals[0];
        quotas["vowel"] = vals[1];
    }

    struct Experiment {
        std::string name;
        std::set<std::string> groups;
        bool use_quota = false;
    };
    std::vector<Experiment> experiments;
    if (have_baseline) {
        experiments.push_back({"baseline", {"baseline"}, false});
        experiments.push_back({"vowel", {"vowel"}, false});
        experiments.push_back({"baseline+vowel", {"baseline", "vowel"}, true});
    } else {
        experiments.push_back({"vowel", {"vowel"}, false});
    }

    ordered_json j;
    j["tool"] = {{"name", kToolName}, {"version", kVersion}};
    j["config"] = ordered_json{{"features", o.features},
                               {"baseline_features", have_baseline ? ordered_json(o.baseline)
                                                                   : ordered_json(nullptr)},
                               {"p_threshold", o.p_threshold},
                               {"vif_threshold", o.vif_threshold},
                               {"max_features", o.max_features},
                               {"c", o.c},
                               {"quota", o.quota.empty() ? ordered_json(nullptr)
                                                         : ordered_json(o.quota)}};
    j["experiments"] = ordered_json::array();

    std::vector<std::pair<std::string, LosoReport>> reports;
    for (const auto& exp : experiments) {
        const FeatureMatrix sub = submatrix_by_groups(matrix, exp.groups);
        LosoConfig cfg;
        cfg.selection.p_threshold = o.p_threshold;
        cfg.selection.vif_threshold = o.vif_threshold;
        cfg.selection.max_features = o.max_features;
        if (exp.use_quota)
            cfg.selection.quotas = quotas;
        cfg.fit.c = o.c;

        LosoReport rep = loso_evaluate(sub, cfg);
        ordered_json ej = report_to_json(rep);
        ordered_json entry;
        entry["feature_set"] = exp.name;
        entry["n_subjects"] = sub.n_subjects();
        entry["n_features"] = sub.n_features();
        for (auto& [key, value] : ej.items())
            entry[key] = std::move(value);
        j["experiments"].push_back(std::move(entry));
        reports.emplace_back(exp.name, std::move(rep));
    }

    {
        std::ofstream f(o.out);
        if (!f)
            throw IoError("cannot write " + o.out);
        f << j.dump(2) << "\n";
    }

    fs::path coef_path(o.coef_out);
    if (coef_path.empty()) {
        coef_path = fs::path(o.out);
        coef_path.replace_filename(coef_path.stem().string() + "_coefficients.csv");
    }
    {
        std::ofstream f(coef_path);
        if (!f)
            throw IoError("cannot write " + coef_path.string());
        f << "# " << version_line() << "\n";
        f << "# config: p_threshold=" << fmt_double(o.p_threshold)
          << " vif_threshold=" << fmt_double(o.vif_threshold)
          << " max_features=" << o.max_features << " c=" << fmt_double(o.c)
          << (o.quota.empty() ? "" : " quota=" + o.quota) << "\n";
        f << "feature_set,feature,mean_beta,sd_beta,p,selection_count\n";
        for (const auto& [name, rep] : reports)
            for (const auto& row : rep.coefficients) {
                f << name << "," << row.feature << "," << fmt_double(row.mean_beta) << ","
                  << fmt_double(row.sd_beta) << ",";
                if (row.p)
                    f << fmt_double(*row.p);
                f << "," << row.selection_count << "\n";
            }
    }

    for (const auto& [name, rep] : reports)
        std::cout << name << ": accuracy=" << fmt_double(rep.overall.accuracy)
                  << " f1=" << fmt_double(rep.overall.f1) << "\n";
    std::cout << "wrote " << o.out << " and " << coef_path.string() << "\n";
    return 0;
}

} // namespace

int run_cli(int argc, char** argv)
{
    CLI::App app{"vowel-distortion features and premanifest/manifest classification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_line());

    SynthOpts synth_opts;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic two-class cohort");
    synth->add_option("--out-dir", synth_opts.out_dir, "output dataset directory")->required();
    synth->add_option("--n-per-class", synth_opts.n_per_class, "subjects per class")
        ->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_opts.seed, "random seed");
    synth->add_option("--deltas", synth_opts.deltas,
                      "manifest-class deltas: gfpv length ms, noise H, envelope depth");
    synth->add_option("--sv-ms", synth_opts.sv_ms, "sustained vowel duration (ms)")
        ->check(CLI::PositiveNumber);
    synth->add_option("--gfpv-ms", synth_opts.gfpv_ms, "mean connected vowel duration (ms)")
        ->check(CLI::PositiveNumber);
    synth->add_option("--gfpv-count", synth_opts.gfpv_count, "connected vowels per subject")
        ->check(CLI::PositiveNumber);
    synth->add_option("--noise-level", synth_opts.noise_level, "fGn noise level")
        ->check(CLI::NonNegativeNumber);
    synth->add_option("--base-h", synth_opts.base_h, "premanifest noise Hurst parameter");
    synth->add_option("--base-env", synth_opts.base_env, "premanifest envelope depth");
    synth->add_flag("--force", synth_opts.force, "overwrite a non-empty output directory");

    ExtractOpts extract_opts;
    CLI::App* extract = app.add_subcommand("extract", "extract vowel features from a dataset");
    extract->add_option("--manifest", extract_opts.manifest, "subject manifest CSV")->required();
    extract->add_option("--segments", extract_opts.segments, "segment annotation CSV")
        ->required();
    extract->add_option("--out", extract_opts.out, "output feature CSV")->required();
    extract->add_option("--gate-out", extract_opts.gate_out,
                        "gate report CSV (default: <out>_gate.csv)");
    extract->add_option("--seed", extract_opts.seed, "random seed for SSV sampling");
    extract->add_option("--ssv-count", extract_opts.ssv_count, "SSV segments per subject")
        ->check(CLI::NonNegativeNumber);
    extract->add_option("--imf-trend-cutoff", extract_opts.imf_cutoff,
                        "IMFs above this index form the additive trend")
        ->check(CLI::NonNegativeNumber);
    extract->add_option("--r2-gate", extract_opts.r2_gate, "Hurst log-log fit r2 gate");
    extract->add_flag("--no-hurst-integrate", extract_opts.no_hurst_integrate,
                      "skip profile integration in the Hurst estimate");
    extract->add_option("--jobs", extract_opts.jobs, "parallel subject workers")
        ->check(CLI::PositiveNumber);
    extract->add_option("--dump-imfs", extract_opts.dump_imfs_dir,
                        "directory for per-vowel IMF CSV dumps");
    extract->add_option("--dump-curves", extract_opts.dump_curves_dir,
                        "directory for per-vowel fluctuation-curve dumps");

    CorrelateOpts correlate_opts;
    CLI::App* correlate =
        app.add_subcommand("correlate", "feature-vs-label Spearman correlation grid");
    correlate->add_option("--features", correlate_opts.features, "feature CSV")->required();
    correlate->add_option("--out", correlate_opts.out, "output correlation CSV")->required();

    ClassifyOpts classify_opts;
    CLI::App* classify =
        app.add_subcommand("classify", "leave-one-subject-out classification experiments");
    classify->add_option("--features", classify_opts.features, "feature CSV")->required();
    classify->add_option("--baseline-features", classify_opts.baseline,
                         "external baseline feature CSV (subject_id + columns)");
    classify->add_option("--quota", classify_opts.quota,
                         "per-group feature caps for the combined run, e.g. 5,5");
    classify->add_option("--out", classify_opts.out, "output report JSON")->required();
    classify->add_option("--coef-out", classify_opts.coef_out,
                         "coefficient table CSV (default: <out>_coefficients.csv)");
    classify->add_option("--p-threshold", classify_opts.p_threshold,
                         "Spearman p-value gate for candidate features");
    classify->add_option("--vif-threshold", classify_opts.vif_threshold,
                         "variance inflation factor prune threshold");
    classify->add_option("--max-features", classify_opts.max_features,
                         "maximum confirmed features")
        ->check(CLI::PositiveNumber);
    classify->add_option("--c", classify_opts.c, "logistic-regression loss weight")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*synth)
            return cmd_synth(synth_opts);
        if (*extract)
            return cmd_extract(extract_opts);
        if (*correlate)
            return cmd_correlate(correlate_opts);
        if (*classify)
            return cmd_classify(classify_opts);
        return 1;
    } catch (const SingleClassError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConstantInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace vdm
