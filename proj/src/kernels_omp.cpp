#include "kernel_detail.hpp"

#include <cstdint>

namespace longform::kernels::parallel {

// OpenMP wants a signed induction variable.
using index_t = std::int64_t;

void polyphase_resample(std::span<const double> in, const PolyphaseFilter& filter, std::span<double> out) {
    const auto n_out = static_cast<index_t>(out.size());
#pragma omp parallel for schedule(static)
    for (index_t n = 0; n < n_out; ++n)
        out[static_cast<std::size_t>(n)] = detail::resample_one(in, filter, static_cast<std::size_t>(n));
}

void scale_clamp(std::span<const double> in, double factor, std::span<double> out) {
    const auto n = static_cast<index_t>(in.size());
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = detail::scale_one(in[static_cast<std::size_t>(i)], factor);
}

void mean_channels(std::span<const double> interleaved, int channels, std::span<double> out) {
    const auto n = static_cast<index_t>(out.size());
#pragma omp parallel for schedule(static)
    for (index_t f = 0; f < n; ++f)
        out[static_cast<std::size_t>(f)] = detail::mean_one(interleaved, channels, static_cast<std::size_t>(f));
}

void frame_energy_db(std::span<const double> in, std::size_t frame_len, std::size_t hop, std::span<double> out) {
    const auto n = static_cast<index_t>(out.size());
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = detail::energy_one(in, frame_len, hop, static_cast<std::size_t>(i));
}

}  // namespace longform::kernels::parallel
