#include "vdm/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "vdm/errors.hpp"

namespace vdm {

namespace {

constexpr std::uint16_t kFmtPcm = 1;
constexpr std::uint16_t kFmtFloat = 3;
constexpr std::uint16_t kFmtExtensible = 0xfffe;

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

} // namespace

AudioClip load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open WAV file: " + path);

    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw FormatError("not a RIFF/WAVE file: " + path);
    }

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t size = read_u32(bytes.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (body + 16 > bytes.size()) throw CorruptFileError("truncated fmt chunk: " + path);
            format = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            rate = read_u32(bytes.data() + body + 4);
            bits = read_u16(bytes.data() + body + 14);
            if (format == kFmtExtensible && body + 26 <= bytes.size()) {
                // first two bytes of the subformat GUID carry the real code
                format = read_u16(bytes.data() + body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = size;
            if (body + size > bytes.size()) {
                throw CorruptFileError("truncated data chunk: " + path);
            }
        }
        pos = body + size + (size & 1); // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr) throw CorruptFileError("missing fmt or data chunk: " + path);
    if (channels != 1) {
        throw ChannelError("expected mono audio, got " + std::to_string(channels) +
                           " channels: " + path);
    }
    if (rate == 0) throw FormatError("zero sample rate: " + path);

    AudioClip clip;
    clip.sample_rate_hz = static_cast<int>(rate);

    if (format == kFmtPcm && bits == 16) {
        const std::size_t n = data_size / 2;
        if (n == 0) throw CorruptFileError("empty data chunk: " + path);
        clip.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::int16_t v =
                static_cast<std::int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
            clip.samples[i] = static_cast<double>(v) / 32768.0;
        }
    } else if (format == kFmtPcm && bits == 24) {
        const std::size_t n = data_size / 3;
        if (n == 0) throw CorruptFileError("empty data chunk: " + path);
        clip.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::int32_t v = data[3 * i] | (data[3 * i + 1] << 8) | (data[3 * i + 2] << 16);
            if (v & 0x800000) v |= ~0xffffff; // sign-extend
            clip.samples[i] = static_cast<double>(v) / 8388608.0;
        }
    } else if (format == kFmtFloat && bits == 32) {
        const std::size_t n = data_size / 4;
        if (n == 0) throw CorruptFileError("empty data chunk: " + path);
        clip.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t u = read_u32(data + 4 * i);
            float f;
            std::memcpy(&f, &u, 4);
            clip.samples[i] = static_cast<double>(f);
        }
    } else {
        throw FormatError("unsupported WAV encoding (format " + std::to_string(format) + ", " +
                          std::to_string(bits) + " bits): " + path);
    }

    return clip;
}

void write_wav(const std::string& path, const AudioClip& clip, WavEncoding encoding) {
    if (clip.samples.empty()) throw EmptyInputError("refusing to write empty WAV: " + path);
    if (clip.sample_rate_hz <= 0) throw ValidationError("invalid sample rate");

    const std::size_t n = clip.samples.size();
    std::uint16_t bits = 0, format = 0;
    switch (encoding) {
        case WavEncoding::Pcm16: bits = 16; format = kFmtPcm; break;
        case WavEncoding::Pcm24: bits = 24; format = kFmtPcm; break;
        case WavEncoding::Float32: bits = 32; format = kFmtFloat; break;
    }
    const std::uint32_t bytes_per_sample = bits / 8;
    const std::uint32_t data_size = static_cast<std::uint32_t>(n * bytes_per_sample);

    std::string out;
    out.reserve(44 + data_size);
    out.append("RIFF");
    put_u32(out, 36 + data_size);
    out.append("WAVE");
    out.append("fmt ");
    put_u32(out, 16);
    put_u16(out, format);
    put_u16(out, 1); // mono
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * bytes_per_sample);
    put_u16(out, static_cast<std::uint16_t>(bytes_per_sample));
    put_u16(out, bits);
    out.append("data");
    put_u32(out, data_size);

    for (double s : clip.samples) {
        switch (encoding) {
            case WavEncoding::Pcm16: {
                double v = std::clamp(s, -1.0, 1.0) * 32768.0;
                auto q = static_cast<std::int32_t>(std::lrint(v));
                q = std::clamp(q, -32768, 32767);
                put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
                break;
            }
            case WavEncoding::Pcm24: {
                double v = std::clamp(s, -1.0, 1.0) * 8388608.0;
                auto q = static_cast<std::int32_t>(std::lrint(v));
                q = std::clamp(q, -8388608, 8388607);
                out.push_back(static_cast<char>(q & 0xff));
                out.push_back(static_cast<char>((q >> 8) & 0xff));
                out.push_back(static_cast<char>((q >> 16) & 0xff));
                break;
            }
            case WavEncoding::Float32: {
                float f = static_cast<float>(s);
                std::uint32_t u;
                std::memcpy(&u, &f, 4);
                put_u32(out, u);
                break;
            }
        }
    }

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write WAV file: " + path);
    os.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!os) throw IoError("short write: " + path);
}

double dbfs(std::span<const double> samples) {
    if (samples.empty()) throw EmptyInputError("dbfs of empty signal");
    double sum_sq = 0.0;
    for (double s : samples) sum_sq += s * s;
    const double rms = std::sqrt(sum_sq / static_cast<double>(samples.size()));
    if (rms <= 0.0) return kSilenceFloorDb;
    return std::max(20.0 * std::log10(rms), kSilenceFloorDb);
}

std::vector<double> normalize_peak(const std::vector<double>& samples) {
    double peak = 0.0;
    for (double s : samples) peak = std::max(peak, std::abs(s));
    if (peak == 0.0) return samples;
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i] / peak;
    return out;
}

AudioClip normalize_peak(const AudioClip& clip) {
    if (clip.samples.empty()) throw EmptyInputError("normalize_peak of empty clip");
    return AudioClip{normalize_peak(clip.samples), clip.sample_rate_hz};
}

std::size_t ms_to_samples(double ms, int sample_rate_hz) {
    return static_cast<std::size_t>(std::llround(ms * sample_rate_hz / 1000.0));
}

} // namespace vdm
