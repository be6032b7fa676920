#include "longform/audio.hpp"
#include "longform/ctc_align.hpp"
#include "longform/kernels.hpp"
#include "longform/metrics.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <random>

using namespace longform;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    std::vector<double> out(n);
    for (auto& x : out) x = d(gen);
    return out;
}

// 3:1 decimation with 64 taps, roughly what 48 kHz -> 16 kHz uses.
kernels::PolyphaseFilter decimator() {
    kernels::PolyphaseFilter f;
    f.up = 1;
    f.down = 3;
    f.taps_per_phase = 64;
    for (std::size_t j = 0; j < 64; ++j) f.taps.push_back(std::sin(0.1 * (static_cast<double>(j) + 1.0)) / 64.0);
    return f;
}

const std::vector<double>& minute_at_48k() {
    static const auto x = noise(48000 * 60, 1);
    return x;
}

template <bool Parallel>
void BM_polyphase(benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
    const auto& in = minute_at_48k();
    const auto f = decimator();
    std::vector<double> out(in.size() / 3);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::parallel::polyphase_resample(in, f, out);
        else
            kernels::serial::polyphase_resample(in, f, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <bool Parallel>
void BM_scale_clamp(benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
    const auto& in = minute_at_48k();
    std::vector<double> out(in.size());
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::parallel::scale_clamp(in, 1.9953, out);
        else
            kernels::serial::scale_clamp(in, 1.9953, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <bool Parallel>
void BM_frame_energy(benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
    const auto& in = minute_at_48k();
    std::vector<double> out(kernels::frame_count(in.size(), 1200, 480));
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::parallel::frame_energy_db(in, 1200, 480, out);
        else
            kernels::serial::frame_energy_db(in, 1200, 480, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

void BM_resample_48k(benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
    const AudioBuffer buf{noise(48000 * 10, 2), 48000, 1};
    for (auto _ : state) benchmark::DoNotOptimize(resample(buf, 16000).samples.data());
}

void BM_viterbi(benchmark::State& state) {
    const auto T = static_cast<std::size_t>(state.range(0));
    const std::size_t V = 64;
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> d(-8.0, 0.0);
    EmissionMatrix em;
    em.frames = T;
    em.vocab = V;
    em.log_probs.resize(T * V);
    for (auto& x : em.log_probs) x = d(gen);
    std::vector<TokenId> tokens(T / 4);
    for (auto& t : tokens) t = 1 + static_cast<TokenId>(gen() % (V - 1));
    ViterbiOptions opts;
    if (state.range(1) > 0) opts.band_half_width = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(viterbi_align(em, tokens, opts));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(T));
}

void BM_wer_corpus(benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
    std::mt19937_64 gen(4);
    std::vector<std::pair<std::string, std::string>> pairs(2000);
    for (auto& [r, h] : pairs) {
        for (int w = 0; w < 40; ++w) {
            r += std::string(1, static_cast<char>('a' + gen() % 6)) + " ";
            h += std::string(1, static_cast<char>('a' + gen() % 6)) + " ";
        }
    }
    for (auto _ : state) benchmark::DoNotOptimize(wer_corpus(pairs));
}

}  // namespace

BENCHMARK(BM_polyphase<false>)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_polyphase<true>)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_scale_clamp<false>)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scale_clamp<true>)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_frame_energy<false>)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_frame_energy<true>)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_resample_48k)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_viterbi)->Args({1500, 0})->Args({1500, 64})->Args({6000, 0})->Args({6000, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_wer_corpus)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
