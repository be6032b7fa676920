#include "longform/audio.hpp"
#include "longform/error.hpp"
#include "longform/kernels.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace longform;

TEST_SUITE("audio") {

TEST_CASE("read 16-bit mono sample 16384 as 0.5") {
    const auto bytes = testutil::make_wav(1, 1, 16000, 16, {0x00, 0x40});
    const AudioBuffer buf = decode_wav(bytes);
    CHECK(buf.sample_rate == 16000);
    CHECK(buf.channels == 1);
    REQUIRE(buf.samples.size() == 1);
    CHECK(buf.samples[0] == 0.5);
}

TEST_CASE("bad magic reports offset 0") {
    auto bytes = testutil::make_wav(1, 1, 16000, 16, {0x00, 0x40});
    std::memcpy(bytes.data(), "RIFX", 4);
    try {
        decode_wav(bytes);
        FAIL("expected MalformedWav");
    } catch (const MalformedWav& e) {
        CHECK(e.offset() == 0);
    }
}

TEST_CASE("malformed and unsupported WAV inputs") {
    SUBCASE("truncated data chunk") {
        auto bytes = testutil::make_wav(1, 1, 16000, 16, {0, 0, 0, 0});
        bytes.resize(bytes.size() - 2);
        CHECK_THROWS_AS(decode_wav(bytes), MalformedWav);
    }
    SUBCASE("8-bit PCM is rejected") {
        CHECK_THROWS_AS(decode_wav(testutil::make_wav(1, 1, 8000, 8, {0x80})), MalformedWav);
    }
    SUBCASE("A-law is rejected") {
        CHECK_THROWS_AS(decode_wav(testutil::make_wav(6, 1, 8000, 8, {0x80})), MalformedWav);
    }
    SUBCASE("zero frames") {
        CHECK_THROWS_AS(decode_wav(testutil::make_wav(1, 1, 16000, 16, {})), EmptyAudio);
    }
    SUBCASE("missing WAVE") {
        auto bytes = testutil::make_wav(1, 1, 16000, 16, {0, 0});
        std::memcpy(bytes.data() + 8, "AVI ", 4);
        try {
            decode_wav(bytes);
            FAIL("expected MalformedWav");
        } catch (const MalformedWav& e) {
            CHECK(e.offset() == 8);
        }
    }
    SUBCASE("too short for a header") {
        const std::vector<std::uint8_t> bytes{'R', 'I', 'F', 'F', 0};
        CHECK_THROWS_AS(decode_wav(bytes), MalformedWav);
    }
}

TEST_CASE("24-bit and float decoding") {
    // 24-bit: -8388608 -> -1.0, 4194304 -> 0.5
    const auto pcm24 = decode_wav(testutil::make_wav(1, 1, 16000, 24, {0x00, 0x00, 0x80, 0x00, 0x00, 0x40}));
    REQUIRE(pcm24.samples.size() == 2);
    CHECK(pcm24.samples[0] == -1.0);
    CHECK(pcm24.samples[1] == 0.5);

    float vals[2] = {0.25f, -2.0f};
    std::vector<std::uint8_t> data(8);
    std::memcpy(data.data(), vals, 8);
    const auto f32 = decode_wav(testutil::make_wav(3, 1, 22050, 32, data));
    CHECK(f32.samples[0] == 0.25);
    CHECK(f32.samples[1] == -1.0);  // clamped

    float bad = std::nanf("");
    std::memcpy(data.data(), &bad, 4);
    CHECK_THROWS_AS(decode_wav(testutil::make_wav(3, 1, 22050, 32, data)), MalformedWav);
}

TEST_CASE("extensible header with PCM sub-format") {
    testutil::RiffBuilder b;
    b.tag("RIFF");
    b.u32(4 + 48 + 8 + 4);
    b.tag("WAVE");
    b.tag("fmt ");
    b.u32(40);
    b.u16(0xFFFE);
    b.u16(2);
    b.u32(48000);
    b.u32(48000 * 4);
    b.u16(4);
    b.u16(16);
    b.u16(22);
    b.u16(16);
    b.u32(3);
    b.raw({0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x80, 0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71});
    b.tag("data");
    b.u32(4);
    b.raw({0x00, 0x40, 0x00, 0xC0});
    const auto buf = decode_wav(b.bytes);
    CHECK(buf.channels == 2);
    CHECK(buf.samples == std::vector<double>{0.5, -0.5});

    auto bad = b.bytes;
    bad[12 + 8 + 24 + 3] = 0x01;  // corrupt GUID tail
    CHECK_THROWS_AS(decode_wav(bad), MalformedWav);
}

TEST_CASE("chunks around fmt/data are skipped, trailing chunks ignored") {
    testutil::RiffBuilder b;
    b.tag("RIFF");
    b.u32(0);
    b.tag("WAVE");
    b.tag("LIST");
    b.u32(3);
    b.raw({'a', 'b', 'c', 0});  // odd size + pad byte
    const auto plain = testutil::make_wav(1, 1, 16000, 16, {0x00, 0x40, 0x00, 0x20}, {'J', 'U', 'N', 'K', 2, 0, 0, 0, 1, 1});
    b.raw(std::vector<std::uint8_t>(plain.begin() + 12, plain.end()));
    const auto buf = decode_wav(b.bytes);
    CHECK(buf.samples == std::vector<double>{0.5, 0.25});
    CHECK(parse_wav_header(b.bytes).frames == 2);
}

TEST_CASE("write_wav clamps and emits a canonical header") {
    AudioBuffer buf{{0.0, 1.5, -1.5, 0.5}, 16000, 1};
    const auto bytes = encode_wav(buf);
    REQUIRE(bytes.size() == 44 + 8);
    CHECK(std::memcmp(bytes.data(), "RIFF", 4) == 0);
    CHECK(std::memcmp(bytes.data() + 36, "data", 4) == 0);
    auto sample = [&](int i) { return static_cast<std::int16_t>(bytes[44 + 2 * i] | (bytes[45 + 2 * i] << 8)); };
    CHECK(sample(0) == 0);
    CHECK(sample(1) == 32767);
    CHECK(sample(2) == -32767);
    CHECK(sample(3) == 16384);  // 16383.5 rounds away from zero
}

TEST_CASE("sine round-trip through a file stays within one LSB") {
    testutil::TempDir dir("wav");
    AudioBuffer buf{oracle::sine(440.0, 16000.0, 16000), 16000, 1};
    write_wav(buf, dir / "sine.wav");
    const auto back = read_wav(dir / "sine.wav");
    CHECK(back.sample_rate == 16000);
    CHECK(back.channels == 1);
    REQUIRE(back.samples.size() == buf.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < buf.samples.size(); ++i) worst = std::max(worst, std::abs(back.samples[i] - buf.samples[i]));
    CHECK(worst <= 1.0 / 32767.0 + 1e-12);

    const auto info = read_wav_info(dir / "sine.wav");
    CHECK(info.frames == 16000);
    CHECK(info.duration() == 1.0);
}

TEST_CASE("write_wav to an unwritable path raises IoFailure") {
    AudioBuffer buf{{0.0}, 16000, 1};
    CHECK_THROWS_AS(write_wav(buf, "/nonexistent-dir/x/y.wav"), IoFailure);
}

TEST_CASE("downmix") {
    CHECK(downmix_mono({{0.5, -0.5}, 16000, 2}).samples == std::vector<double>{0.0});
    const auto m = downmix_mono({{0.2, 0.4, 1.0, 0.0}, 16000, 2});
    REQUIRE(m.samples.size() == 2);
    CHECK(m.samples[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(m.samples[1] == 0.5);
    CHECK(m.channels == 1);

    AudioBuffer mono{{0.1, -0.7, 0.3}, 8000, 1};
    const auto same = downmix_mono(mono);
    CHECK(same.samples == mono.samples);
    CHECK(downmix_mono(downmix_mono({{0.2, 0.4, 1.0, 0.0}, 16000, 2})).samples == m.samples);
}

TEST_CASE("resample identity and length rule") {
    AudioBuffer buf{oracle::sine(300.0, 16000.0, 1234), 16000, 1};
    CHECK(resample(buf, 16000).samples == buf.samples);

    AudioBuffer one_sec{std::vector<double>(48000, 0.1), 48000, 1};
    const auto out = resample(one_sec, 16000);
    CHECK(out.sample_rate == 16000);
    CHECK(out.samples.size() == 16000);

    CHECK_THROWS_AS(resample({{0.0, 0.0}, 16000, 2}, 8000), RequiresMono);
    CHECK_THROWS_AS(resample(buf, 0), InvalidArgument);
}

TEST_CASE("resample keeps a 1 kHz tone's spectral peak and duration") {
    for (int in_rate : {48000, 44100, 22050, 8000}) {
        CAPTURE(in_rate);
        AudioBuffer buf{oracle::sine(1000.0, in_rate, static_cast<std::size_t>(in_rate)), in_rate, 1};
        const auto out = resample(buf, 16000);
        const double in_dur = buf.duration();
        const double out_dur = static_cast<double>(out.samples.size()) / out.sample_rate;
        CHECK(std::abs(out_dur - in_dur) <= 1.0 / 16000.0);
        const auto mag = oracle::dft_magnitude(out.samples, 4000, 1024);
        const auto peak = std::max_element(mag.begin(), mag.end()) - mag.begin();
        CHECK(std::abs(peak - 64) <= 1);  // 1000 Hz * 1024 / 16000
        for (double s : out.samples) CHECK_UNARY(std::abs(s) <= 1.0);
    }
}

TEST_CASE("resample suppresses content above the new Nyquist") {
    // 7.5 kHz tone at 48 kHz would alias to 7.5 kHz -> stays below 8 kHz; use 12 kHz.
    AudioBuffer buf{oracle::sine(12000.0, 48000.0, 48000), 48000, 1};
    const auto out = resample(buf, 16000);
    double energy = 0.0;
    for (std::size_t i = 2000; i < 14000; ++i) energy += out.samples[i] * out.samples[i];
    CHECK(std::sqrt(energy / 12000.0) < 1e-3);
}

TEST_CASE("gain") {
    AudioBuffer buf{{0.25, 0.9, -0.3, 0.0}, 16000, 1};
    CHECK(apply_gain(buf, 0.0).samples == buf.samples);
    const auto up = apply_gain(buf, 6.0);
    CHECK(std::abs(up.samples[0] - 0.25 * std::pow(10.0, 0.3)) <= 1e-9);
    CHECK(std::abs(up.samples[0] - 0.498815) <= 1e-6);
    CHECK(up.samples[1] == 1.0);
    CHECK_THROWS_AS(apply_gain(buf, std::nan("")), InvalidArgument);

    AudioBuffer quiet{oracle::sine(100.0, 8000.0, 800, 0.3), 8000, 1};
    for (double db : {-6.0, -2.5, 1.0, 3.0}) {
        const auto round = apply_gain(apply_gain(quiet, db), -db);
        for (std::size_t i = 0; i < quiet.samples.size(); ++i)
            CHECK(std::abs(round.samples[i] - quiet.samples[i]) <= 1e-6);
    }
}

TEST_CASE("augment_gain") {
    AudioBuffer buf{{0.1, -0.2, 0.3}, 16000, 1};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = augment_gain(buf, {-6, 6, 0.0, seed});
        CHECK_FALSE(r.applied);
        CHECK_FALSE(r.gain_db.has_value());
        CHECK(r.buffer.samples == buf.samples);
    }
    const auto id = augment_gain(buf, {0.0, 0.0, 1.0, 3});
    CHECK(id.applied);
    CHECK(*id.gain_db == 0.0);
    CHECK(id.buffer.samples == buf.samples);

    std::size_t applied = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const auto r = augment_gain(buf, {-6.0, 6.0, 0.4, seed});
        if (r.applied) {
            ++applied;
            CHECK(*r.gain_db >= -6.0);
            CHECK(*r.gain_db <= 6.0);
        }
    }
    const double frac = applied / 10000.0;
    CHECK(frac >= 0.38);
    CHECK(frac <= 0.42);

    const auto a = augment_gain(buf, {-6.0, 6.0, 0.4, 99});
    const auto b = augment_gain(buf, {-6.0, 6.0, 0.4, 99});
    CHECK(a.applied == b.applied);
    CHECK(a.buffer.samples == b.buffer.samples);

    CHECK_THROWS_AS(augment_gain(buf, {6.0, -6.0, 0.4, 0}), InvalidArgument);
    CHECK_THROWS_AS(augment_gain(buf, {-6.0, 6.0, 1.4, 0}), InvalidArgument);
}

TEST_CASE("buffer invariants are enforced") {
    CHECK_THROWS_AS(AudioBuffer({{0.0, 0.1, 0.2}, 16000, 2}).validate(), InvalidArgument);
    CHECK_THROWS_AS(AudioBuffer({{std::nan("")}, 16000, 1}).validate(), InvalidArgument);
    CHECK_THROWS_AS(AudioBuffer({{0.0}, 0, 1}).validate(), InvalidArgument);
}

}  // TEST_SUITE
