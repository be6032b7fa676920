#include "kernel_detail.hpp"

namespace longform::kernels {

std::size_t frame_count(std::size_t length, std::size_t frame_len, std::size_t hop) {
    if (length == 0) return 0;
    if (length <= frame_len) return 1;
    return 1 + (length - frame_len + hop - 1) / hop;
}

namespace serial {

void polyphase_resample(std::span<const double> in, const PolyphaseFilter& filter, std::span<double> out) {
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = detail::resample_one(in, filter, n);
}

void scale_clamp(std::span<const double> in, double factor, std::span<double> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = detail::scale_one(in[i], factor);
}

void mean_channels(std::span<const double> interleaved, int channels, std::span<double> out) {
    for (std::size_t f = 0; f < out.size(); ++f) out[f] = detail::mean_one(interleaved, channels, f);
}

void frame_energy_db(std::span<const double> in, std::size_t frame_len, std::size_t hop, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::energy_one(in, frame_len, hop, i);
}

}  // namespace serial
}  // namespace longform::kernels
