#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Data-parallel inner loops. Each kernel exists twice: `serial` is the
// reference used by tests, `parallel` is the OpenMP version the library
// calls. Both compute every output element with the same expression, so
// their results are bit-identical.
namespace longform::kernels {

// Coefficient table for a rational-ratio resampler: output sample n reads
// input around position n * down / up.
struct PolyphaseFilter {
    std::size_t up = 1;
    std::size_t down = 1;
    // taps[phase * taps_per_phase + j] weights input x[base + j - (taps_per_phase/2 - 1)]
    std::size_t taps_per_phase = 0;
    std::vector<double> taps;
};

namespace serial {
void polyphase_resample(std::span<const double> in, const PolyphaseFilter& filter, std::span<double> out);
void scale_clamp(std::span<const double> in, double factor, std::span<double> out);
void mean_channels(std::span<const double> interleaved, int channels, std::span<double> out);
// 20*log10(max(rms, 1e-10)) for frames starting at i*hop; the last frame may be partial.
void frame_energy_db(std::span<const double> in, std::size_t frame_len, std::size_t hop, std::span<double> out);
}  // namespace serial

namespace parallel {
void polyphase_resample(std::span<const double> in, const PolyphaseFilter& filter, std::span<double> out);
void scale_clamp(std::span<const double> in, double factor, std::span<double> out);
void mean_channels(std::span<const double> interleaved, int channels, std::span<double> out);
void frame_energy_db(std::span<const double> in, std::size_t frame_len, std::size_t hop, std::span<double> out);
}  // namespace parallel

// Number of analysis frames frame_energy_db produces for `length` samples.
std::size_t frame_count(std::size_t length, std::size_t frame_len, std::size_t hop);

}  // namespace longform::kernels
