#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vdm/audio.hpp"
#include "vdm/rng.hpp"

namespace vdm {

// Exact fractional Gaussian noise (unit variance) by circulant embedding of
// the fGn autocovariance. n must be a power of two >= 1024.
std::vector<double> gen_fgn(double h, std::size_t n, Rng& rng);

// Gaussian noise with power spectrum ~ f^-beta, normalized to unit sample
// variance. n must be a power of two >= 1024.
std::vector<double> gen_colored_noise(double beta, std::size_t n, Rng& rng);

// Amplitude-modulated harmonic "vowel": a harmonic series at f0 under a slow
// sinusoidal amplitude envelope, plus a low-frequency additive drift and
// fractional Gaussian noise. Each ingredient drives one feature of interest:
// the envelope depth the multiplicative trend, the drift the additive trend,
// and the noise Hurst parameter the first-IMF roughness.
struct AmHarmonicSpec {
    double f0_hz = 150.0; // >= 100
    int n_harmonics = 4;
    double carrier_amp = 0.55;
    double env_depth = 0.1;     // fractional AM depth, in [0, 1)
    double env_rate_hz = 2.5;   // envelope modulation rate
    double env_phase = 0.0;     // radians
    double drift_amp = 0.0;     // additive low-frequency drift amplitude
    double drift_hz = 3.0;      // drift frequency, well below f0
    double drift_phase = 0.0;   // radians
    double noise_h = 0.5;       // fGn Hurst parameter, in (0, 1)
    double noise_level = 0.0;   // fGn standard deviation
    double duration_ms = 500.0; // > 0
    int sample_rate_hz = 44100;
};

AudioClip gen_am_harmonic(const AmHarmonicSpec& spec, Rng& rng);

// Class contrasts for synthetic cohorts, applied to manifest-class subjects;
// all-zero deltas produce a label-uninformative (null) cohort.
struct CohortDeltas {
    double gfpv_length_ms = 65.0; // longer connected-speech vowels
    double noise_h = -0.15;       // rougher high-frequency noise
    double env_depth = 0.10;      // stronger volume modulation
};

struct CohortSpec {
    int n_per_class = 15;
    CohortDeltas deltas;
    int sample_rate_hz = 44100;
    double sv_duration_ms = 2000.0;  // sustained vowel length (jittered)
    double gfpv_base_ms = 150.0;     // premanifest mean connected vowel length
    int gfpv_per_subject = 11;
    double base_noise_h = 0.75;
    double base_env_depth = 0.08;
    double noise_level = 0.22;
    std::uint64_t seed = 0;
};

struct CohortPaths {
    std::filesystem::path dir;
    std::filesystem::path manifest_csv;
    std::filesystem::path annotations_csv;
};

// Writes a complete on-disk dataset (WAVs + manifest.csv + annotations.csv)
// in the formats the dataset loaders consume. Comment lines (without the
// leading '#') are embedded at the top of both CSVs.
CohortPaths gen_cohort(const CohortSpec& spec, const std::filesystem::path& out_dir,
                       const std::vector<std::string>& comments = {});

} // namespace vdm
