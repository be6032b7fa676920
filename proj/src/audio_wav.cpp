#include "longform/audio.hpp"
#include "longform/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

namespace longform {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

// Trailing 14 bytes shared by the KSDATAFORMAT_SUBTYPE_PCM / _IEEE_FLOAT GUIDs.
constexpr std::array<std::uint8_t, 14> kSubtypeTail = {0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x80,
                                                       0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71};

std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }
std::uint32_t le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

bool tag_is(const std::uint8_t* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

// `bytes` may be a prefix of the file; `total_size` is the full file length.
// Returns nullopt when the prefix ends before the data chunk header.
std::optional<WavInfo> parse_header_prefix(std::span<const std::uint8_t> bytes, std::uint64_t total_size) {
    if (bytes.size() < 4 || !tag_is(bytes.data(), "RIFF")) throw MalformedWav(0, "missing RIFF magic");
    if (bytes.size() < 12) throw MalformedWav(bytes.size(), "truncated RIFF header");
    if (!tag_is(bytes.data() + 8, "WAVE")) throw MalformedWav(8, "missing WAVE form type");

    WavInfo info;
    bool have_fmt = false;
    std::uint16_t format = 0;
    std::uint16_t block_align = 0;
    std::uint64_t off = 12;
    while (true) {
        if (off + 8 > total_size) throw MalformedWav(off, have_fmt ? "no data chunk" : "no fmt chunk");
        if (off + 8 > bytes.size()) return std::nullopt;
        const std::uint8_t* hdr = bytes.data() + off;
        const std::uint64_t size = le32(hdr + 4);
        const std::uint64_t body = off + 8;

        if (tag_is(hdr, "fmt ")) {
            if (size < 16) throw MalformedWav(off, "fmt chunk shorter than 16 bytes");
            if (body + size > total_size) throw MalformedWav(off, "truncated fmt chunk");
            if (body + size > bytes.size()) return std::nullopt;
            const std::uint8_t* f = bytes.data() + body;
            format = le16(f);
            info.channels = le16(f + 2);
            info.sample_rate = static_cast<int>(le32(f + 4));
            block_align = le16(f + 12);
            info.bits_per_sample = le16(f + 14);
            if (format == kFormatExtensible) {
                if (size < 40) throw MalformedWav(off, "extensible fmt chunk shorter than 40 bytes");
                const std::uint8_t* guid = f + 24;
                if (!std::equal(kSubtypeTail.begin(), kSubtypeTail.end(), guid + 2))
                    throw MalformedWav(body + 24, "unsupported extensible sub-format");
                format = le16(guid);
            }
            if (format == kFormatPcm && info.bits_per_sample == 16) {
                info.encoding = WavEncoding::pcm16;
            } else if (format == kFormatPcm && info.bits_per_sample == 24) {
                info.encoding = WavEncoding::pcm24;
            } else if (format == kFormatFloat && info.bits_per_sample == 32) {
                info.encoding = WavEncoding::float32;
            } else {
                throw MalformedWav(body, "unsupported codec (format " + std::to_string(format) + ", " +
                                             std::to_string(info.bits_per_sample) + " bits)");
            }
            if (info.channels < 1) throw MalformedWav(body + 2, "zero channels");
            if (info.sample_rate <= 0) throw MalformedWav(body + 4, "non-positive sample rate");
            if (block_align != info.channels * info.bits_per_sample / 8)
                throw MalformedWav(body + 12, "block align does not match channels and bit depth");
            have_fmt = true;
        } else if (tag_is(hdr, "data")) {
            if (!have_fmt) throw MalformedWav(off, "data chunk before fmt chunk");
            if (body + size > total_size) throw MalformedWav(off, "truncated data chunk");
            info.data_offset = body;
            info.data_bytes = size;
            info.frames = size / block_align;
            if (info.frames == 0) throw EmptyAudio();
            return info;
        }
        off = body + size + (size & 1);
    }
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path, std::uint64_t limit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::vector<std::uint8_t> bytes;
    std::array<char, 65536> buf{};
    while (bytes.size() < limit && in) {
        const auto want = static_cast<std::streamsize>(std::min<std::uint64_t>(buf.size(), limit - bytes.size()));
        in.read(buf.data(), want);
        bytes.insert(bytes.end(), buf.data(), buf.data() + in.gcount());
    }
    if (in.bad()) throw IoFailure("read error on " + path.string());
    return bytes;
}

}  // namespace

void AudioBuffer::validate() const {
    if (sample_rate <= 0) throw InvalidArgument("sample_rate must be positive");
    if (channels < 1) throw InvalidArgument("channels must be at least 1");
    if (samples.size() % static_cast<std::size_t>(channels) != 0)
        throw InvalidArgument("sample count is not a multiple of the channel count");
    for (double s : samples)
        if (!std::isfinite(s)) throw InvalidArgument("non-finite amplitude");
}

WavInfo parse_wav_header(std::span<const std::uint8_t> bytes) {
    return *parse_header_prefix(bytes, bytes.size());
}

WavInfo read_wav_info(const std::filesystem::path& path) {
    std::error_code ec;
    const auto total = std::filesystem::file_size(path, ec);
    if (ec) throw IoFailure("cannot stat " + path.string() + ": " + ec.message());
    auto prefix = slurp(path, std::min<std::uint64_t>(total, 1 << 16));
    if (auto info = parse_header_prefix(prefix, total)) return *info;
    // Large chunks ahead of fmt/data: fall back to the whole file.
    auto bytes = slurp(path, total);
    return *parse_header_prefix(bytes, bytes.size());
}

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
    const WavInfo info = parse_wav_header(bytes);
    AudioBuffer out;
    out.sample_rate = info.sample_rate;
    out.channels = info.channels;
    const std::size_t count = info.frames * static_cast<std::size_t>(info.channels);
    out.samples.resize(count);
    const std::uint8_t* p = bytes.data() + info.data_offset;
    switch (info.encoding) {
    case WavEncoding::pcm16:
        for (std::size_t i = 0; i < count; ++i)
            out.samples[i] = static_cast<std::int16_t>(le16(p + 2 * i)) / 32768.0;
        break;
    case WavEncoding::pcm24:
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint8_t* s = p + 3 * i;
            std::int32_t v = s[0] | (s[1] << 8) | (s[2] << 16);
            if (v & 0x800000) v -= 0x1000000;
            out.samples[i] = v / 8388608.0;
        }
        break;
    case WavEncoding::float32:
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint32_t bits = le32(p + 4 * i);
            float v;
            std::memcpy(&v, &bits, sizeof v);
            if (!std::isfinite(v)) throw MalformedWav(info.data_offset + 4 * i, "non-finite float sample");
            out.samples[i] = std::clamp(static_cast<double>(v), -1.0, 1.0);
        }
        break;
    }
    return out;
}

AudioBuffer read_wav(const std::filesystem::path& path) {
    std::error_code ec;
    const auto total = std::filesystem::file_size(path, ec);
    if (ec) throw IoFailure("cannot stat " + path.string() + ": " + ec.message());
    const auto bytes = slurp(path, total);
    return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer) {
    buffer.validate();
    const auto data_bytes = static_cast<std::uint32_t>(buffer.samples.size() * 2);
    const auto channels = static_cast<std::uint16_t>(buffer.channels);
    const auto rate = static_cast<std::uint32_t>(buffer.sample_rate);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put32(out, 16);
    put16(out, kFormatPcm);
    put16(out, channels);
    put32(out, rate);
    put32(out, rate * channels * 2);
    put16(out, static_cast<std::uint16_t>(channels * 2));
    put16(out, 16);
    put_tag(out, "data");
    put32(out, data_bytes);
    for (double s : buffer.samples) {
        const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32767.0);
        put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    }
    return out;
}

void write_wav(const AudioBuffer& buffer, const std::filesystem::path& path) {
    const auto bytes = encode_wav(buffer);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("write error on " + path.string());
}

}  // namespace longform
