#pragma once

#include "longform/kernels.hpp"

#include <algorithm>
#include <cmath>

// Per-element bodies shared by the serial and OpenMP kernels.
namespace longform::kernels::detail {

inline double resample_one(std::span<const double> in, const PolyphaseFilter& f, std::size_t n) {
    const std::size_t pos = n * f.down;
    const std::size_t base = pos / f.up;
    const std::size_t phase = pos % f.up;
    const std::size_t half = f.taps_per_phase / 2;
    const double* taps = f.taps.data() + phase * f.taps_per_phase;
    const auto first = static_cast<std::ptrdiff_t>(base) - static_cast<std::ptrdiff_t>(half - 1);
    const auto len = static_cast<std::ptrdiff_t>(in.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < f.taps_per_phase; ++j) {
        const std::ptrdiff_t k = first + static_cast<std::ptrdiff_t>(j);
        if (k >= 0 && k < len) acc += in[static_cast<std::size_t>(k)] * taps[j];
    }
    return std::clamp(acc, -1.0, 1.0);
}

inline double scale_one(double x, double factor) { return std::clamp(x * factor, -1.0, 1.0); }

inline double mean_one(std::span<const double> interleaved, int channels, std::size_t frame) {
    double acc = 0.0;
    const std::size_t off = frame * static_cast<std::size_t>(channels);
    for (int c = 0; c < channels; ++c) acc += interleaved[off + static_cast<std::size_t>(c)];
    return acc / channels;
}

inline double energy_one(std::span<const double> in, std::size_t frame_len, std::size_t hop, std::size_t i) {
    const std::size_t start = i * hop;
    const std::size_t end = std::min(start + frame_len, in.size());
    double acc = 0.0;
    for (std::size_t k = start; k < end; ++k) acc += in[k] * in[k];
    const double rms = end > start ? std::sqrt(acc / static_cast<double>(end - start)) : 0.0;
    return 20.0 * std::log10(std::max(rms, 1e-10));
}

}  // namespace longform::kernels::detail
