#include "longform/chunker.hpp"
#include "longform/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace longform;

namespace {

std::vector<WordAlignment> words_from(const std::vector<std::pair<double, double>>& spans) {
    std::vector<WordAlignment> out;
    for (std::size_t i = 0; i < spans.size(); ++i)
        out.push_back({"w" + std::to_string(i), spans[i].first, spans[i].second, -1.0});
    return out;
}

// Random ordered, non-overlapping words with durations below max_word.
std::vector<WordAlignment> random_words(std::mt19937_64& gen, std::size_t n, double max_word) {
    std::uniform_real_distribution<double> dur(0.05, max_word);
    std::uniform_real_distribution<double> gap(0.0, 1.5);
    std::vector<WordAlignment> out;
    double t = gap(gen);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = dur(gen);
        out.push_back({"w" + std::to_string(i), t, t + d, -0.5});
        t += d + (gen() % 3 == 0 ? 0.0 : gap(gen));
    }
    return out;
}

AudioBuffer mono(std::vector<double> samples, int rate) {
    AudioBuffer b;
    b.samples = std::move(samples);
    b.sample_rate = rate;
    return b;
}

}  // namespace

TEST_SUITE("chunker") {

TEST_CASE("greedy closes a chunk before it reaches the limit") {
    const auto words = words_from({{0, 1}, {1.1, 2}, {2.1, 2.9}, {3.0, 3.5}});
    const auto chunks = chunk_words(words, 3.0);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].first_word == 0);
    CHECK(chunks[0].last_word == 3);
    CHECK(chunks[0].start == 0.0);
    CHECK(chunks[0].end == 2.9);
    CHECK(chunks[0].transcript == "w0 w1 w2");
    CHECK(chunks[1].first_word == 3);
    CHECK(chunks[1].transcript == "w3");
}

TEST_CASE("a span equal to the limit is not allowed") {
    const auto words = words_from({{0, 1}, {2, 3}});
    const auto chunks = chunk_words(words, 3.0);
    CHECK(chunks.size() == 2);
    CHECK_THROWS_AS(chunk_words(words_from({{0, 3}}), 3.0), WordTooLong);
}

TEST_CASE("gap_biased moves the split to a wider pause") {
    const auto words = words_from({{0, 1}, {2, 2.5}, {2.6, 2.9}, {3.0, 3.4}});
    const auto greedy = chunk_words(words, 3.0, ChunkPolicy::greedy);
    REQUIRE(greedy.size() == 2);
    CHECK(greedy[0].last_word == 3);

    const auto biased = chunk_words(words, 3.0, ChunkPolicy::gap_biased);
    REQUIRE(biased.size() == 2);
    CHECK(biased[0].last_word == 1);
    CHECK(biased[1].first_word == 1);
    CHECK(biased[1].start == 2.0);
    CHECK(biased[1].end == 3.4);

    // With no lookback it is plain greedy.
    const auto none = chunk_words(words, 3.0, ChunkPolicy::gap_biased, 0);
    CHECK(none[0].last_word == 3);
}

TEST_CASE("hand-traced greedy close at the boundary") {
    const auto words = words_from({{0, 10}, {10, 20}, {20, 29}, {29, 40}});
    const auto chunks = chunk_words(words, 30.0);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].first_word == 0);
    CHECK(chunks[0].last_word == 3);
    CHECK(chunks[0].start == 0.0);
    CHECK(chunks[0].end == 29.0);
    CHECK(chunks[1].start == 29.0);
    CHECK(chunks[1].end == 40.0);

    const auto single = chunk_words(words_from({{0, 5}}), 30.0);
    REQUIRE(single.size() == 1);
    CHECK(single[0].duration() == 5.0);
    try {
        chunk_words(words_from({{0, 31}}), 30.0);
        FAIL("expected WordTooLong");
    } catch (const WordTooLong& e) {
        CHECK(e.index() == 0);
    }
}

TEST_CASE("equal gaps make gap_biased agree with greedy") {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 300; ++trial) {
        const double gap = static_cast<double>(gen() % 4) * 0.25;
        std::vector<WordAlignment> words;
        double t = 0.0;
        const std::size_t n = 1 + gen() % 60;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = 0.25 * static_cast<double>(1 + gen() % 12);
            words.push_back({"w", t, t + d, 0.0});
            t += d + gap;
        }
        const double max = 4.0 + static_cast<double>(gen() % 20);
        const auto a = chunk_words(words, max, ChunkPolicy::greedy);
        const auto b = chunk_words(words, max, ChunkPolicy::gap_biased);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].first_word == b[k].first_word);
            CHECK(a[k].last_word == b[k].last_word);
        }
    }
}

TEST_CASE("invalid words") {
    CHECK(chunk_words(std::vector<WordAlignment>{}, 3.0).empty());
    CHECK_THROWS_AS(chunk_words(words_from({{0, 1}, {0.5, 2}}), 3.0), InvalidArgument);
    CHECK_THROWS_AS(chunk_words(words_from({{1, 1}}), 3.0), InvalidArgument);
    CHECK_THROWS_AS(chunk_words(words_from({{0, 1}}), 0.0), InvalidArgument);
    try {
        chunk_words(words_from({{0, 1}, {1, 5}}), 3.0);
        FAIL("expected WordTooLong");
    } catch (const WordTooLong& e) {
        CHECK(e.index() == 1);
    }
}

TEST_CASE("chunks partition the words and stay under the limit") {
    std::mt19937_64 gen(42);
    for (int trial = 0; trial < 500; ++trial) {
        const double max = 2.0 + static_cast<double>(gen() % 30);
        const auto words = random_words(gen, 1 + gen() % 80, std::min(max * 0.9, 4.0));
        for (auto policy : {ChunkPolicy::greedy, ChunkPolicy::gap_biased}) {
            const auto chunks = chunk_words(words, max, policy, 1 + gen() % 6);
            REQUIRE_FALSE(chunks.empty());
            std::size_t next = 0;
            std::string joined, all;
            for (const auto& c : chunks) {
                CHECK(c.first_word == next);
                CHECK(c.last_word > c.first_word);
                CHECK(c.duration() < max);
                CHECK(c.start == words[c.first_word].start);
                CHECK(c.end == words[c.last_word - 1].end);
                next = c.last_word;
                joined += (joined.empty() ? "" : " ") + c.transcript;
            }
            CHECK(next == words.size());
            for (const auto& w : words) all += (all.empty() ? "" : " ") + w.word;
            CHECK(joined == all);
            if (policy == ChunkPolicy::greedy)
                for (const auto& c : chunks)
                    if (c.last_word < words.size()) CHECK(words[c.last_word].end - c.start >= max);
        }
    }
}

TEST_CASE("chunk audio slicing") {
    std::vector<double> s(20);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i);
    const auto buf = mono(s, 10);
    Chunk c;
    c.start = 0.5;
    c.end = 1.0;
    auto piece = extract_chunk_audio(buf, c, 0.2);
    REQUIRE(piece.samples.size() == 9);
    CHECK(piece.samples.front() == 3.0);
    CHECK(piece.samples.back() == 11.0);
    CHECK(extract_chunk_audio(buf, c).samples.size() == 5);
    CHECK(extract_chunk_audio(buf, c, 1.5).samples.size() == 20);
    c.start = 2.5;
    c.end = 3.0;
    CHECK_THROWS_AS(extract_chunk_audio(buf, c), ChunkOutOfRange);
    auto stereo = buf;
    stereo.channels = 2;
    c.start = 0.0;
    CHECK_THROWS_AS(extract_chunk_audio(stereo, c), RequiresMono);
}

TEST_CASE("slice index formula and clamping") {
    const auto buf = mono(std::vector<double>(48000, 0.25), 16000);
    Chunk whole;
    whole.start = 0.0;
    whole.end = buf.duration();
    const auto same = extract_chunk_audio(buf, whole);
    CHECK(same.samples == buf.samples);
    CHECK(same.sample_rate == 16000);

    std::vector<double> ramp(48000);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i) / 48000.0;
    Chunk c;
    c.start = 1.0;
    c.end = 2.0;
    const auto piece = extract_chunk_audio(mono(ramp, 16000), c);
    REQUIRE(piece.samples.size() == 16000);
    CHECK(piece.samples.front() == ramp[16000]);
    CHECK(piece.samples.back() == ramp[31999]);

    c.start = 0.05;
    c.end = 0.5;
    const auto early = extract_chunk_audio(mono(ramp, 16000), c, 0.1);
    CHECK(early.samples.front() == ramp[0]);
    CHECK(early.samples.size() == 9600);
}

TEST_CASE("full-scale square wave is one interval") {
    const int rate = 16000;
    std::vector<double> x(rate * 2, 0.0);
    for (int i = 0; i < rate; ++i) x[static_cast<std::size_t>(i)] = (i / 20) % 2 ? 1.0 : -1.0;
    const auto speech = detect_speech(mono(x, rate));
    REQUIRE(speech.size() == 1);
    CHECK(speech[0].start == 0.0);
    CHECK(std::abs(speech[0].end - 1.0) <= 0.010 + 0.025);

    std::vector<double> y(static_cast<std::size_t>(rate * 1.1), 0.0);
    const auto tone = oracle::sine(300.0, rate, y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        if (i < static_cast<std::size_t>(rate / 2) || i >= static_cast<std::size_t>(rate * 0.6)) y[i] = tone[i];
    CHECK(detect_speech(mono(y, rate)).size() == 1);
}

TEST_CASE("energy VAD finds tone bursts") {
    const int rate = 16000;
    std::vector<double> x(3 * rate, 0.0);
    const auto tone = oracle::sine(440.0, rate, x.size());
    auto fill = [&](double a, double b) {
        for (auto i = static_cast<std::size_t>(a * rate); i < static_cast<std::size_t>(b * rate); ++i) x[i] = tone[i];
    };
    fill(0.5, 1.0);
    fill(1.2, 1.7);  // bridged: the pause is under 300 ms
    fill(2.5, 2.6);  // dropped: shorter than 200 ms
    const auto speech = detect_speech(mono(x, rate));
    REQUIRE(speech.size() == 1);
    CHECK(speech[0].start == doctest::Approx(0.5).epsilon(0.06));
    CHECK(speech[0].end == doctest::Approx(1.7).epsilon(0.03));

    VadConfig strict;
    strict.min_silence_ms = 100;
    CHECK(detect_speech(mono(x, rate), strict).size() == 2);
    CHECK(detect_speech(mono(std::vector<double>(rate, 0.0), rate)).empty());

    VadConfig bad;
    bad.hop_ms = 50;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("VAD intervals are ordered and inside the audio") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 20; ++trial) {
        const int rate = 8000;
        std::vector<double> x(rate * 4);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double amp = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i % 800 == 0) amp = gen() % 2 ? 0.3 : 0.0;
            x[i] = amp * u(gen);
        }
        const auto speech = detect_speech(mono(x, rate));
        double prev = -1.0;
        for (const auto& s : speech) {
            CHECK(s.start > prev);
            CHECK(s.end - s.start >= 0.2);
            CHECK(s.end <= 4.0);
            prev = s.end;
        }
    }
}

}  // TEST_SUITE
