#include "longform/audio.hpp"
#include "longform/error.hpp"
#include "longform/kernels.hpp"
#include "longform/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace longform {
namespace {

constexpr double kZeroCrossings = 16.0;
constexpr double kRolloff = 0.95;
constexpr double kKaiserBeta = 8.6;

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

double kaiser(double x) {
    // x in [-1, 1]
    const double r = 1.0 - x * x;
    if (r <= 0.0) return 0.0;
    return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(r)) / std::cyl_bessel_i(0.0, kKaiserBeta);
}

kernels::PolyphaseFilter design_filter(std::size_t up, std::size_t down) {
    kernels::PolyphaseFilter f;
    f.up = up;
    f.down = down;
    // Cutoff in cycles per input sample, below the lower of the two Nyquist rates.
    const double cutoff = 0.5 * std::min(1.0, static_cast<double>(up) / static_cast<double>(down)) * kRolloff;
    const auto half = static_cast<std::size_t>(std::ceil(kZeroCrossings / (2.0 * cutoff)));
    f.taps_per_phase = 2 * half;
    f.taps.resize(up * f.taps_per_phase);
    for (std::size_t phase = 0; phase < up; ++phase) {
        const double frac = static_cast<double>(phase) / static_cast<double>(up);
        double* row = f.taps.data() + phase * f.taps_per_phase;
        double sum = 0.0;
        for (std::size_t j = 0; j < f.taps_per_phase; ++j) {
            const double d = frac + static_cast<double>(half - 1) - static_cast<double>(j);
            row[j] = 2.0 * cutoff * sinc(2.0 * cutoff * d) * kaiser(d / static_cast<double>(half));
            sum += row[j];
        }
        // unity DC gain per phase
        for (std::size_t j = 0; j < f.taps_per_phase; ++j) row[j] /= sum;
    }
    return f;
}

}  // namespace

AudioBuffer downmix_mono(const AudioBuffer& buffer) {
    buffer.validate();
    if (buffer.channels == 1) return buffer;
    AudioBuffer out;
    out.sample_rate = buffer.sample_rate;
    out.channels = 1;
    out.samples.resize(buffer.frames());
    kernels::parallel::mean_channels(buffer.samples, buffer.channels, out.samples);
    return out;
}

AudioBuffer resample(const AudioBuffer& buffer, int target_rate) {
    buffer.validate();
    if (buffer.channels != 1) throw RequiresMono(buffer.channels);
    if (target_rate <= 0) throw InvalidArgument("target_rate must be positive");
    if (target_rate == buffer.sample_rate) return buffer;

    const auto in_rate = static_cast<std::size_t>(buffer.sample_rate);
    const auto out_rate = static_cast<std::size_t>(target_rate);
    const std::size_t g = std::gcd(in_rate, out_rate);
    const auto filter = design_filter(out_rate / g, in_rate / g);

    const std::size_t in_len = buffer.samples.size();
    const std::size_t out_len = (2 * in_len * out_rate + in_rate) / (2 * in_rate);

    AudioBuffer out;
    out.sample_rate = target_rate;
    out.channels = 1;
    out.samples.resize(out_len);
    kernels::parallel::polyphase_resample(buffer.samples, filter, out.samples);
    return out;
}

AudioBuffer apply_gain(const AudioBuffer& buffer, double gain_db) {
    if (!std::isfinite(gain_db)) throw InvalidArgument("gain_db must be finite");
    AudioBuffer out;
    out.sample_rate = buffer.sample_rate;
    out.channels = buffer.channels;
    if (gain_db == 0.0) {
        out.samples = buffer.samples;
        return out;
    }
    out.samples.resize(buffer.samples.size());
    kernels::parallel::scale_clamp(buffer.samples, std::pow(10.0, gain_db / 20.0), out.samples);
    return out;
}

void GainAugmentConfig::validate() const {
    if (!std::isfinite(min_db) || !std::isfinite(max_db)) throw InvalidArgument("gain bounds must be finite");
    if (min_db > max_db) throw InvalidArgument("min_db must not exceed max_db");
    if (!(probability >= 0.0 && probability <= 1.0)) throw InvalidArgument("probability must lie in [0, 1]");
}

GainAugmentResult augment_gain(const AudioBuffer& buffer, const GainAugmentConfig& config) {
    config.validate();
    std::mt19937_64 gen(splitmix64(config.seed));
    const double coin = unit_uniform(gen);
    const double u = unit_uniform(gen);

    GainAugmentResult result;
    result.applied = coin < config.probability;
    if (!result.applied) {
        result.buffer = buffer;
        return result;
    }
    const double gain_db = config.min_db + u * (config.max_db - config.min_db);
    result.gain_db = gain_db;
    result.buffer = apply_gain(buffer, gain_db);
    return result;
}

}  // namespace longform
