#include "vdm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vdm/csv.hpp"
#include "vdm/errors.hpp"

namespace vdm {

const char* stage_name(Stage s)
{
    switch (s) {
    case Stage::Premanifest: return "premanifest";
    case Stage::EarlyManifest: return "early";
    case Stage::LateManifest: return "late";
    }
    return "?";
}

const char* vowel_kind_name(VowelKind k)
{
    switch (k) {
    case VowelKind::SV: return "sv";
    case VowelKind::SSV: return "ssv";
    case VowelKind::GFPV: return "gfpv";
    }
    return "?";
}

Stage derive_label(int dcl, int tfc)
{
    if (dcl < 0 || dcl > 4)
        throw ValidationError("DCL out of range 0-4: " + std::to_string(dcl));
    if (tfc < 0 || tfc > 13)
        throw ValidationError("TFC out of range 0-13: " + std::to_string(tfc));
    if (dcl < 4)
        return Stage::Premanifest;
    return tfc >= 7 ? Stage::EarlyManifest : Stage::LateManifest;
}

std::vector<SubjectRecord> load_manifest(const std::filesystem::path& path)
{
    const CsvTable table = read_csv(path);
    const std::size_t c_id = table.col("subject_id");
    const std::size_t c_dcl = table.col("dcl");
    const std::size_t c_tfc = table.col("tfc");
    const std::size_t c_sv = table.col("sv_wav");
    const std::size_t c_gfp = table.col("gfp_wav");

    const std::filesystem::path base = path.parent_path();
    std::vector<SubjectRecord> records;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        SubjectRecord rec;
        rec.subject_id = row[c_id];
        if (rec.subject_id.empty())
            throw SchemaError("empty subject_id in " + path.string());
        if (!seen.insert(rec.subject_id).second)
            throw DuplicateError("duplicate subject_id: " + rec.subject_id);
        rec.dcl = parse_int(row[c_dcl]);
        rec.tfc = parse_int(row[c_tfc]);
        derive_label(rec.dcl, rec.tfc); // range check
        rec.sv_wav = base / row[c_sv];
        rec.gfp_wav = base / row[c_gfp];
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<SegmentAnnotation> load_annotations(const std::filesystem::path& path)
{
    const CsvTable table = read_csv(path);
    const std::size_t c_id = table.col("subject_id");
    const std::size_t c_task = table.col("task");
    const std::size_t c_phone = table.col("phone");
    const std::size_t c_start = table.col("start_s");
    const std::size_t c_end = table.col("end_s");

    std::vector<SegmentAnnotation> annotations;
    for (const auto& row : table.rows) {
        SegmentAnnotation a;
        a.subject_id = row[c_id];
        const std::string& task = row[c_task];
        if (task == "SV")
            a.task = Task::SV;
        else if (task == "GFP")
            a.task = Task::GFP;
        else
            throw SchemaError("unknown task '" + task + "' in " + path.string());
        a.phone = row[c_phone];
        a.start_s = parse_double(row[c_start]);
        a.end_s = parse_double(row[c_end]);
        if (!(a.start_s >= 0.0) || !(a.end_s > a.start_s))
            throw ValidationError("bad segment bounds for " + a.subject_id);
        annotations.push_back(std::move(a));
    }
    return annotations;
}

std::vector<VowelSample> cut_segments(const AudioClip& clip, const std::string& subject_id,
                                      const std::vector<SegmentAnnotation>& annotations)
{
    const double rate = static_cast<double>(clip.sample_rate_hz);
    std::vector<VowelSample> samples;
    samples.reserve(annotations.size());
    for (const auto& a : annotations) {
        const auto start = static_cast<std::size_t>(std::llround(a.start_s * rate));
        const auto end = static_cast<std::size_t>(std::llround(a.end_s * rate));
        if (end > clip.samples.size())
            throw BoundsError("annotation for " + a.subject_id + " ends at " +
                              fmt_double(a.end_s) + " s, beyond the recording");
        if (end <= start)
            throw BoundsError("annotation for " + a.subject_id + " is empty after rounding");
        VowelSample v;
        v.kind = a.task == Task::SV ? VowelKind::SV : VowelKind::GFPV;
        v.clip.sample_rate_hz = clip.sample_rate_hz;
        v.clip.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(start),
                              clip.samples.begin() + static_cast<std::ptrdiff_t>(end));
        v.subject_id = subject_id;
        v.start_s = a.start_s;
        v.end_s = a.end_s;
        samples.push_back(std::move(v));
    }
    return samples;
}

VowelSample whole_sv(const AudioClip& clip, const std::string& subject_id)
{
    VowelSample v;
    v.kind = VowelKind::SV;
    v.clip = clip;
    v.subject_id = subject_id;
    v.start_s = 0.0;
    v.end_s = clip.duration_s();
    return v;
}

std::vector<VowelSample> sample_ssv(const VowelSample& sv, int count, Rng& rng)
{
    if (sv.kind != VowelKind::SV)
        throw ValidationError("SSV segments are sampled from the sustained vowel");
    if (count < 0)
        throw ValidationError("negative SSV count");
    const double sv_ms = sv.length_ms();
    if (sv_ms < kMinSsvMs)
        throw TooShortError("sustained vowel shorter than " + fmt_double(kMinSsvMs) + " ms");

    const double rate = static_cast<double>(sv.clip.sample_rate_hz);
    const std::size_t n_sv = sv.clip.samples.size();
    const std::size_t n_min = ms_to_samples(kMinSsvMs, sv.clip.sample_rate_hz);

    std::vector<VowelSample> segments;
    segments.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        // Length: Normal(105, 49) ms truncated to [25 ms, SV length].
        const double len_ms = std::min(std::max(rng.normal(105.0, 49.0), kMinSsvMs), sv_ms);
        std::size_t n = ms_to_samples(len_ms, sv.clip.sample_rate_hz);
        n = std::min(std::max(n, n_min), n_sv);
        const std::size_t start = rng.below(n_sv - n + 1);

        VowelSample seg;
        seg.kind = VowelKind::SSV;
        seg.clip.sample_rate_hz = sv.clip.sample_rate_hz;
        seg.clip.samples.assign(
            sv.clip.samples.begin() + static_cast<std::ptrdiff_t>(start),
            sv.clip.samples.begin() + static_cast<std::ptrdiff_t>(start + n));
        seg.subject_id = sv.subject_id;
        seg.start_s = sv.start_s + static_cast<double>(start) / rate;
        seg.end_s = seg.start_s + static_cast<double>(n) / rate;
        segments.push_back(std::move(seg));
    }
    return segments;
}

} // namespace vdm
