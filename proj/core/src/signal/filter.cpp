#include "echomap/signal/filter.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "echomap/errors.hpp"

namespace echomap::signal {

std::vector<double> design_lowpass_kernel(double cutoff_hz, double sample_rate) {
    if (sample_rate <= 0.0)
        throw InvalidParameterError("design_lowpass_kernel: sample_rate must be positive");
    if (cutoff_hz <= 0.0 || cutoff_hz >= sample_rate / 2.0)
        throw InvalidParameterError(
            "design_lowpass_kernel: cutoff " + std::to_string(cutoff_hz) +
            " Hz must lie in (0, Nyquist = " + std::to_string(sample_rate / 2.0) + ")");

    std::size_t length = static_cast<std::size_t>(std::ceil(4.0 * sample_rate / cutoff_hz));
    if (length % 2 == 0) ++length;
    if (length < 3) length = 3;

    const double fc = cutoff_hz / sample_rate; // cycles per sample
    const std::size_t mid = (length - 1) / 2;
    std::vector<double> kernel(length);
    double sum = 0.0;
    for (std::size_t i = 0; i < length; ++i) {
        const double m = static_cast<double>(i) - static_cast<double>(mid);
        double sinc;
        if (m == 0.0) {
            sinc = 2.0 * fc;
        } else {
            sinc = std::sin(2.0 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
        }
        const double hamming =
            0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                   static_cast<double>(length - 1));
        kernel[i] = sinc * hamming;
        sum += kernel[i];
    }
    for (auto& k : kernel) k /= sum; // unity gain at DC
    return kernel;
}

AudioTrace low_pass_filter(const AudioTrace& trace, double cutoff_hz) {
    if (trace.sample_rate <= 0.0)
        throw InvalidParameterError("low_pass_filter: trace sample_rate must be positive");
    if (cutoff_hz >= trace.sample_rate / 2.0)
        throw InvalidParameterError("low_pass_filter: cutoff must be below Nyquist");

    const auto kernel = design_lowpass_kernel(cutoff_hz, trace.sample_rate);
    const std::ptrdiff_t mid = static_cast<std::ptrdiff_t>((kernel.size() - 1) / 2);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(trace.samples.size());
    const std::ptrdiff_t klen = static_cast<std::ptrdiff_t>(kernel.size());

    AudioTrace out;
    out.sample_rate = trace.sample_rate;
    out.start_time = trace.start_time;
    out.samples.assign(trace.samples.size(), 0.0);

    // y[i] = sum_j h[j] * x[i + mid - j]; out-of-range input treated as zero,
    // which keeps length identical and cancels the group delay.
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t base = i + mid;
        const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, base - (n - 1));
        const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(klen - 1, base);
        double acc = 0.0;
        for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j)
            acc += kernel[static_cast<std::size_t>(j)] *
                   trace.samples[static_cast<std::size_t>(base - j)];
        out.samples[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

} // namespace echomap::signal
