#include "longform/ctc_io.hpp"
#include "longform/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace longform {
namespace {

template <class T>
T read_le(const std::uint8_t* p) {
    T v;
    std::memcpy(&v, p, sizeof v);  // host is little-endian (x86-64/aarch64)
    return v;
}

template <class T>
void write_le(std::vector<std::uint8_t>& out, T v) {
    std::uint8_t buf[sizeof v];
    std::memcpy(buf, &v, sizeof v);
    out.insert(out.end(), buf, buf + sizeof v);
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool parse_double(std::string_view s, double& out) {
    const char* b = s.data();
    if (!s.empty() && s.front() == '+') ++b;
    auto [p, ec] = std::from_chars(b, s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

EmissionMatrix decode_emissions_binary(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kEmissionHeaderBytes) throw MalformedEmissions("emission file shorter than its header");
    if (std::memcmp(bytes.data(), "CTCE", 4) != 0) throw MalformedEmissions("missing CTCE magic");
    const auto version = read_le<std::uint32_t>(bytes.data() + 4);
    if (version != kEmissionFormatVersion)
        throw MalformedEmissions("unsupported emission format version " + std::to_string(version));
    EmissionMatrix m;
    m.frames = read_le<std::uint64_t>(bytes.data() + 8);
    m.vocab = read_le<std::uint64_t>(bytes.data() + 16);
    m.blank_id = static_cast<TokenId>(read_le<std::uint32_t>(bytes.data() + 24));
    m.frame_duration = read_le<double>(bytes.data() + 28);
    m.normalized = bytes[36] != 0;
    if (m.vocab != 0 && m.frames > (bytes.size() - kEmissionHeaderBytes) / 4 / m.vocab)
        throw MalformedEmissions("truncated emission data");
    const std::size_t count = m.frames * m.vocab;
    if (bytes.size() - kEmissionHeaderBytes != count * 4)
        throw MalformedEmissions("emission data length " + std::to_string(bytes.size() - kEmissionHeaderBytes) +
                                 " does not match T x V x 4 = " + std::to_string(count * 4));
    m.log_probs.resize(count);
    const std::uint8_t* p = bytes.data() + kEmissionHeaderBytes;
    for (std::size_t i = 0; i < count; ++i) m.log_probs[i] = read_le<float>(p + 4 * i);
    return m;
}

std::vector<std::uint8_t> encode_emissions_binary(const EmissionMatrix& emissions) {
    std::vector<std::uint8_t> out;
    out.reserve(kEmissionHeaderBytes + emissions.log_probs.size() * 4);
    for (char c : {'C', 'T', 'C', 'E'}) out.push_back(static_cast<std::uint8_t>(c));
    write_le<std::uint32_t>(out, kEmissionFormatVersion);
    write_le<std::uint64_t>(out, emissions.frames);
    write_le<std::uint64_t>(out, emissions.vocab);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(emissions.blank_id));
    write_le<double>(out, emissions.frame_duration);
    out.push_back(emissions.normalized ? 1 : 0);
    for (double v : emissions.log_probs) write_le<float>(out, static_cast<float>(v));
    return out;
}

EmissionMatrix parse_emissions_text(std::string_view text) {
    EmissionMatrix m;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.front().front() == '#') {
            for (auto f : fields) {
                const auto eq = f.find('=');
                if (eq == std::string_view::npos) continue;
                const auto key = f.substr(0, eq);
                const auto val = f.substr(eq + 1);
                double d = 0.0;
                if (!parse_double(val, d)) throw MalformedEmissions("line " + std::to_string(lineno) + ": bad value");
                if (key == "blank_id") m.blank_id = static_cast<TokenId>(d);
                else if (key == "frame_duration") m.frame_duration = d;
                else if (key == "normalized") m.normalized = d != 0.0;
            }
            continue;
        }
        if (m.frames == 0) m.vocab = fields.size();
        if (fields.size() != m.vocab)
            throw MalformedEmissions("line " + std::to_string(lineno) + ": expected " + std::to_string(m.vocab) +
                                     " values, got " + std::to_string(fields.size()));
        for (auto f : fields) {
            double v = 0.0;
            if (!parse_double(f, v))
                throw MalformedEmissions("line " + std::to_string(lineno) + ": bad number '" + std::string(f) + "'");
            m.log_probs.push_back(v);
        }
        ++m.frames;
    }
    if (m.frames == 0) throw MalformedEmissions("emission text holds no frames");
    return m;
}

EmissionMatrix read_emissions(const std::filesystem::path& path) {
    const auto bytes = slurp(path);
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), "CTCE", 4) == 0) return decode_emissions_binary(bytes);
    return parse_emissions_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_emissions(const EmissionMatrix& emissions, const std::filesystem::path& path) {
    const auto bytes = encode_emissions_binary(emissions);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("write error on " + path.string());
}

std::string format_alignment_jsonl(std::span<const WordAlignment> words) {
    std::string out;
    for (const auto& w : words) {
        out += fmt::format("{{\"word\":{},\"start\":{:.3f},\"end\":{:.3f},\"score\":{:.6f}}}\n",
                           nlohmann::json(w.word).dump(), w.start, w.end, w.score);
    }
    return out;
}

std::vector<WordAlignment> parse_alignment_jsonl(std::string_view text) {
    std::vector<WordAlignment> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            WordAlignment w;
            w.word = j.at("word").get<std::string>();
            w.start = j.at("start").get<double>();
            w.end = j.at("end").get<double>();
            w.score = j.value("score", 0.0);
            out.push_back(std::move(w));
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument("alignment record " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace longform
