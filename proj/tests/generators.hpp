#pragma once

#include "longform/diar_formats.hpp"

#include "test_util.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testutil {

inline std::vector<std::string> random_sentence(std::mt19937_64& gen, std::size_t max_len, std::size_t alphabet) {
    std::vector<std::string> out(gen() % (max_len + 1));
    for (auto& w : out) w = std::string(1, static_cast<char>('a' + gen() % alphabet));
    return out;
}

inline std::string join(const std::vector<std::string>& words) {
    std::string s;
    for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
    return s;
}

// Random annotation on whole milliseconds with no same-speaker overlap.
inline longform::DiarAnnotation random_annotation(std::mt19937_64& gen, const std::string& prefix, int speakers,
                                                  long long horizon_ms) {
    longform::DiarAnnotation a{"f", {}};
    for (int s = 0; s < speakers; ++s) {
        long long t = static_cast<long long>(gen() % 300);
        while (true) {
            const long long d = 1 + static_cast<long long>(gen() % 400);
            if (t + d > horizon_ms) break;
            if (gen() % 3) a.segments.push_back({t / 1000.0, d / 1000.0, prefix + std::to_string(s)});
            t += d + static_cast<long long>(gen() % 300);
        }
    }
    a.normalize();
    return a;
}

struct DatasetFile {
    std::string rel;
    int rate;
    int channels;
    double seconds;
    bool transcript;
};

// Twelve files, 61.44 s in total.
inline const std::vector<DatasetFile> kDataset{
    {"spk1/a.wav", 16000, 1, 2.0, true},    {"spk1/b.wav", 16000, 1, 4.5, true},
    {"spk1/c.wav", 16000, 1, 6.25, false},  {"spk2/d.wav", 16000, 1, 8.0, true},
    {"spk2/e.wav", 8000, 1, 1.5, true},     {"spk2/f.wav", 8000, 1, 3.0, true},
    {"spk3/deep/g.wav", 8000, 1, 5.0, true}, {"h.wav", 44100, 2, 2.0, false},
    {"i.wav", 44100, 2, 1.0, true},         {"spk3/j.wav", 22050, 1, 10.0, true},
    {"spk3/k.wav", 22050, 1, 12.0, true},   {"spk3/l.wav", 48000, 1, 6.19, true},
};

// Plus one undecodable .wav and one unrelated file.
inline void build_dataset(const std::filesystem::path& dir) {
    for (const auto& s : kDataset) {
        const auto frames = static_cast<std::size_t>(std::llround(s.seconds * s.rate));
        std::vector<std::uint8_t> data(frames * static_cast<std::size_t>(s.channels) * 2, 0);
        const auto path = dir / s.rel;
        std::filesystem::create_directories(path.parent_path());
        write_bytes(path, make_wav(1, static_cast<std::uint16_t>(s.channels), static_cast<std::uint32_t>(s.rate), 16,
                                   data));
        if (s.transcript) {
            auto txt = path;
            txt.replace_extension(".txt");
            write_text(txt, "words\n");
        }
    }
    write_text(dir / "spk2/broken.wav", "RIFF....not a wave file");
    write_text(dir / "notes.md", "ignored");
}

}  // namespace testutil
