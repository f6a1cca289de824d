#include "vdm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "vdm/csv.hpp"
#include "vdm/errors.hpp"

namespace vdm {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT (forward, unnormalized).
void fft_pow2(std::vector<std::complex<double>>& a)
{
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Davies-Harte sampling for any power-of-two n >= 2: embed the length-n fGn
// autocovariance in a circulant of size 2n, take its (real, nonnegative)
// eigenvalues by FFT, and synthesize with independent Gaussian spectral
// amplitudes. The result has exactly the fGn covariance.
std::vector<double> fgn_pow2(double h, std::size_t n, Rng& rng)
{
    const std::size_t m = 2 * n;
    const double two_h = 2.0 * h;
    std::vector<std::complex<double>> c(m);
    for (std::size_t k = 0; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double g = 0.5 * (std::pow(kd + 1.0, two_h) - 2.0 * std::pow(kd, two_h) +
                                std::pow(std::abs(kd - 1.0), two_h));
        c[k] = g;
        if (k > 0 && k < n)
            c[m - k] = g;
    }
    fft_pow2(c);

    double lambda_max = 0.0;
    for (const auto& v : c)
        lambda_max = std::max(lambda_max, v.real());
    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lv = c[k].real();
        if (lv < 0.0) {
            if (lv < -1e-8 * lambda_max)
                throw GeneratorError("circulant embedding not nonnegative definite");
            lv = 0.0;
        }
        lambda[k] = lv;
    }

    const double md = static_cast<double>(m);
    std::vector<std::complex<double>> a(m);
    a[0] = std::sqrt(lambda[0] / md) * rng.normal();
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double s = std::sqrt(lambda[k] / (2.0 * md));
        const double re = rng.normal();
        const double im = rng.normal();
        a[k] = {s * re, s * im};
        a[m - k] = std::conj(a[k]);
    }
    a[m / 2] = std::sqrt(lambda[m / 2] / md) * rng.normal();

    fft_pow2(a);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i].real();
    return out;
}

// fGn of arbitrary length: generate the next power of two and truncate.
std::vector<double> fgn_any(double h, std::size_t n, Rng& rng)
{
    std::size_t p = 1024;
    while (p < n)
        p <<= 1;
    auto full = fgn_pow2(h, p, rng);
    full.resize(n);
    return full;
}

void check_hurst(double h)
{
    if (!(h > 0.0) || !(h < 1.0))
        throw ValidationError("Hurst parameter must lie in (0, 1)");
}

} // namespace

std::vector<double> gen_fgn(double h, std::size_t n, Rng& rng)
{
    check_hurst(h);
    if (!is_pow2(n) || n < 1024)
        throw ValidationError("fGn length must be a power of two >= 1024");
    return fgn_pow2(h, n, rng);
}

std::vector<double> gen_colored_noise(double beta, std::size_t n, Rng& rng)
{
    if (!is_pow2(n) || n < 1024)
        throw ValidationError("colored-noise length must be a power of two >= 1024");
    std::vector<std::complex<double>> spec(n);
    spec[0] = 0.0; // zero mean
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double s = std::pow(static_cast<double>(k), -beta / 2.0) / std::sqrt(2.0);
        spec[k] = {s * rng.normal(), s * rng.normal()};
        spec[n - k] = std::conj(spec[k]);
    }
    spec[n / 2] = std::pow(static_cast<double>(n / 2), -beta / 2.0) * rng.normal();
    fft_pow2(spec);

    std::vector<double> out(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = spec[i].real();
        mean += out[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : out)
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (!(var > 0.0))
        throw GeneratorError("degenerate colored-noise draw");
    const double inv_sd = 1.0 / std::sqrt(var);
    for (double& v : out)
        v = (v - mean) * inv_sd;
    return out;
}

AudioClip gen_am_harmonic(const AmHarmonicSpec& spec, Rng& rng)
{
    if (spec.f0_hz < 100.0)
        throw ValidationError("fundamental frequency must be at least 100 Hz");
    if (spec.sample_rate_hz <= 0 || spec.duration_ms <= 0.0)
        throw ValidationError("duration and sample rate must be positive");
    if (spec.env_depth < 0.0 || spec.env_depth >= 1.0)
        throw ValidationError("envelope depth must lie in [0, 1)");
    if (spec.n_harmonics < 1)
        throw ValidationError("need at least one harmonic");
    if (spec.noise_level < 0.0)
        throw ValidationError("noise level must be non-negative");

    const std::size_t n = ms_to_samples(spec.duration_ms, spec.sample_rate_hz);
    if (n == 0)
        throw ValidationError("duration rounds to zero samples");

    std::vector<double> noise;
    if (spec.noise_level > 0.0) {
        check_hurst(spec.noise_h);
        noise = fgn_any(spec.noise_h, n, rng);
    }

    // Harmonic amplitudes roll off as 1/k, normalized to unit sum; phases are
    // drawn fresh so repeated vowels differ in fine structure.
    std::vector<double> amps(static_cast<std::size_t>(spec.n_harmonics));
    std::vector<double> phases(amps.size());
    double amp_sum = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        amps[k] = 1.0 / static_cast<double>(k + 1);
        amp_sum += amps[k];
    }
    for (double& a : amps)
        a /= amp_sum;
    for (double& p : phases)
        p = rng.uniform(0.0, 2.0 * M_PI);

    AudioClip clip;
    clip.sample_rate_hz = spec.sample_rate_hz;
    clip.samples.resize(n);
    const double dt = 1.0 / static_cast<double>(spec.sample_rate_hz);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double env =
            1.0 + spec.env_depth * std::sin(2.0 * M_PI * spec.env_rate_hz * t + spec.env_phase);
        double s = 0.0;
        for (std::size_t k = 0; k < amps.size(); ++k)
            s += amps[k] *
                 std::sin(2.0 * M_PI * static_cast<double>(k + 1) * spec.f0_hz * t + phases[k]);
        double x = spec.carrier_amp * env * s;
        x += spec.drift_amp * std::sin(2.0 * M_PI * spec.drift_hz * t + spec.drift_phase);
        if (!noise.empty())
            x += spec.noise_level * noise[i];
        clip.samples[i] = x;
    }
    return clip;
}

namespace {

constexpr const char* kPhones[] = {"AA", "IY", "UW", "EH", "AO"};

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

void scale_to_peak(std::vector<double>& samples, double peak)
{
    double max_abs = 0.0;
    for (double v : samples)
        max_abs = std::max(max_abs, std::abs(v));
    if (max_abs > 0.0) {
        const double g = peak / max_abs;
        for (double& v : samples)
            v *= g;
    }
}

std::string subject_name(bool manifest, int index)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%03d", manifest ? 'M' : 'P', index + 1);
    return buf;
}

} // namespace

CohortPaths gen_cohort(const CohortSpec& spec, const std::filesystem::path& out_dir,
                       const std::vector<std::string>& comments)
{
    if (spec.n_per_class < 1)
        throw ValidationError("need at least one subject per class");
    if (spec.gfpv_per_subject < 1)
        throw ValidationError("need at least one connected-speech vowel per subject");
    if (spec.sv_duration_ms < 400.0)
        throw ValidationError("sustained vowel must be at least 400 ms");

    std::filesystem::create_directories(out_dir / "wav");

    std::vector<std::string> manifest_rows;
    std::vector<std::string> annotation_rows;

    const int n_subjects = 2 * spec.n_per_class;
    for (int s = 0; s < n_subjects; ++s) {
        const bool manifest = s >= spec.n_per_class;
        const int class_index = manifest ? s - spec.n_per_class : s;
        const std::string id = subject_name(manifest, class_index);
        Rng rng(child_seed(spec.seed, static_cast<std::uint64_t>(s)));

        // Subject-level voice parameters; manifest-class deltas shift the
        // connected-vowel length, noise roughness, and envelope depth.
        const double f0 = rng.uniform(120.0, 200.0);
        const double subj_h = clamp(
            spec.base_noise_h + (manifest ? spec.deltas.noise_h : 0.0) + rng.normal(0.0, 0.02),
            0.05, 0.95);
        const double subj_env = std::max(
            0.01,
            spec.base_env_depth + (manifest ? spec.deltas.env_depth : 0.0) + rng.normal(0.0, 0.01));
        const double gfpv_mean_ms =
            spec.gfpv_base_ms + (manifest ? spec.deltas.gfpv_length_ms : 0.0);

        auto vowel_spec = [&](double duration_ms) {
            AmHarmonicSpec v;
            v.f0_hz = f0 * rng.uniform(0.97, 1.03);
            v.carrier_amp = 0.55;
            v.env_depth = std::max(0.005, subj_env + rng.normal(0.0, 0.012));
            v.env_rate_hz = rng.uniform(1.8, 3.5);
            v.env_phase = rng.uniform(0.0, 2.0 * M_PI);
            v.drift_amp = 0.03 * rng.uniform(0.5, 1.5);
            v.drift_hz = rng.uniform(1.5, 5.0);
            v.drift_phase = rng.uniform(0.0, 2.0 * M_PI);
            v.noise_h = clamp(subj_h + rng.normal(0.0, 0.02), 0.05, 0.95);
            v.noise_level = spec.noise_level * rng.uniform(0.85, 1.2);
            v.duration_ms = duration_ms;
            v.sample_rate_hz = spec.sample_rate_hz;
            return v;
        };

        // Sustained vowel: same length distribution in both classes.
        const double sv_ms = spec.sv_duration_ms * rng.uniform(0.92, 1.08);
        AudioClip sv = gen_am_harmonic(vowel_spec(sv_ms), rng);
        scale_to_peak(sv.samples, 0.9);
        const std::string sv_rel = "wav/" + id + "_sv.wav";
        write_wav(out_dir / sv_rel, sv, WavEncoding::Float32);

        // Grandfather-passage stand-in: vowels separated by silent gaps.
        const std::size_t gap =
            ms_to_samples(120.0, spec.sample_rate_hz);
        AudioClip gfp;
        gfp.sample_rate_hz = spec.sample_rate_hz;
        const double rate = static_cast<double>(spec.sample_rate_hz);
        for (int v = 0; v < spec.gfpv_per_subject; ++v) {
            gfp.samples.insert(gfp.samples.end(), gap, 0.0);
            const double dur = clamp(gfpv_mean_ms + rng.normal(0.0, 25.0), 80.0, 400.0);
            AudioClip vowel = gen_am_harmonic(vowel_spec(dur), rng);
            const double start_s = static_cast<double>(gfp.samples.size()) / rate;
            gfp.samples.insert(gfp.samples.end(), vowel.samples.begin(), vowel.samples.end());
            const double end_s = static_cast<double>(gfp.samples.size()) / rate;
            annotation_rows.push_back(id + ",GFP," + kPhones[v % 5] + "," + fmt_double(start_s) +
                                      "," + fmt_double(end_s));
        }
        gfp.samples.insert(gfp.samples.end(), gap, 0.0);
        scale_to_peak(gfp.samples, 0.9);
        const std::string gfp_rel = "wav/" + id + "_gfp.wav";
        write_wav(out_dir / gfp_rel, gfp, WavEncoding::Float32);

        // Clinical scores consistent with the class: premanifest subjects get
        // DCL < 4; manifest subjects DCL 4 with a mix of early/late TFC.
        const int dcl = manifest ? 4 : class_index % 4;
        const int tfc = manifest ? (class_index % 2 == 0 ? 10 : 5) : 13 - class_index % 3;
        manifest_rows.push_back(id + "," + std::to_string(dcl) + "," + std::to_string(tfc) + "," +
                                sv_rel + "," + gfp_rel);
    }

    CohortPaths paths;
    paths.dir = out_dir;
    paths.manifest_csv = out_dir / "manifest.csv";
    paths.annotations_csv = out_dir / "annotations.csv";

    {
        std::ofstream f(paths.manifest_csv);
        if (!f)
            throw IoError("cannot write " + paths.manifest_csv.string());
        for (const auto& c : comments)
            f << "# " << c << "\n";
        f << "subject_id,dcl,tfc,sv_wav,gfp_wav\n";
        for (const auto& row : manifest_rows)
            f << row << "\n";
    }
    {
        std::ofstream f(paths.annotations_csv);
        if (!f)
            throw IoError("cannot write " + paths.annotations_csv.string());
        for (const auto& c : comments)
            f << "# " << c << "\n";
        f << "subject_id,task,phone,start_s,end_s\n";
        for (const auto& row : annotation_rows)
            f << row << "\n";
    }
    return paths;
}

} // namespace vdm
