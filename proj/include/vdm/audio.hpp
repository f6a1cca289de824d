#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vdm {

// Mono audio signal. Samples are real amplitudes, nominally in [-1, 1].
struct AudioClip {
    std::vector<double> samples;
    int sample_rate_hz = 0;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
    double duration_ms() const { return duration_s() * 1000.0; }
};

enum class WavEncoding { Pcm16, Pcm24, Float32 };

// Reads a mono RIFF/WAVE file (PCM 16/24-bit or IEEE float 32-bit).
// Integer samples are scaled by the type's full-scale magnitude (32768, 8388608).
AudioClip load_wav(const std::string& path);

// Writes a mono WAV file. Float32 output round-trips losslessly through
// load_wav for inputs within float range.
void write_wav(const std::string& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::Float32);

// 20*log10(RMS), floored at -120 dB so silence stays finite.
double dbfs(std::span<const double> samples);

constexpr double kSilenceFloorDb = -120.0;

// Scales samples so max |sample| = 1. All-zero input is returned unchanged.
AudioClip normalize_peak(const AudioClip& clip);
std::vector<double> normalize_peak(const std::vector<double>& samples);

// Nearest-sample conversion; reproduces 88/176/441 samples for 2/4/10 ms
// windows at 44.1 kHz.
std::size_t ms_to_samples(double ms, int sample_rate_hz);

} // namespace vdm
