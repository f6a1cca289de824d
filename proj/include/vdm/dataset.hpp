#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vdm/audio.hpp"
#include "vdm/rng.hpp"

namespace vdm {

enum class Stage { Premanifest, EarlyManifest, LateManifest };

// Binary view used everywhere downstream: manifest = 1 iff DCL = 4.
inline int stage_manifest(Stage s) { return s == Stage::Premanifest ? 0 : 1; }

const char* stage_name(Stage s);

// DCL < 4 -> premanifest; DCL 4 with TFC 7-13 -> early; DCL 4 with TFC <= 6
// -> late.
Stage derive_label(int dcl, int tfc);

struct SubjectRecord {
    std::string subject_id;
    int dcl = 0;
    int tfc = 0;
    std::filesystem::path sv_wav;  // resolved against the manifest directory
    std::filesystem::path gfp_wav;
};

std::vector<SubjectRecord> load_manifest(const std::filesystem::path& path);

enum class Task { SV, GFP };

struct SegmentAnnotation {
    std::string subject_id;
    Task task = Task::GFP;
    std::string phone;
    double start_s = 0.0;
    double end_s = 0.0;
};

std::vector<SegmentAnnotation> load_annotations(const std::filesystem::path& path);

enum class VowelKind { SV, SSV, GFPV };

const char* vowel_kind_name(VowelKind k);

struct VowelSample {
    VowelKind kind = VowelKind::SV;
    AudioClip clip;
    std::string subject_id;
    double start_s = 0.0; // offset within the source recording
    double end_s = 0.0;

    double length_ms() const { return clip.duration_ms(); }
};

// One VowelSample per annotation; boundaries rounded to the nearest sample.
// The annotation's task decides the kind (SV or GFPV).
std::vector<VowelSample> cut_segments(const AudioClip& clip, const std::string& subject_id,
                                      const std::vector<SegmentAnnotation>& annotations);

// The whole sustained-vowel recording as a single sample.
VowelSample whole_sv(const AudioClip& clip, const std::string& subject_id);

// Random shortened-sustained-vowel segments: lengths drawn Normal(105 ms,
// 49 ms) truncated to [25 ms, SV length], starts uniform so the segment fits.
std::vector<VowelSample> sample_ssv(const VowelSample& sv, int count, Rng& rng);

constexpr double kMinSsvMs = 25.0;

} // namespace vdm
