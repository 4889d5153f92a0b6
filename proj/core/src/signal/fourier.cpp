#include "echomap/signal/fourier.hpp"

#include <cmath>
#include <numbers>

#include "echomap/errors.hpp"

namespace echomap::signal {

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0) return;
    if ((n & (n - 1)) != 0)
        throw InvalidInputError("fft_inplace: size must be a power of two, got " +
                                std::to_string(n));

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : data) x *= inv_n;
    }
}

std::vector<std::complex<double>> fft_real(const std::vector<double>& samples) {
    const std::size_t n = next_pow2(std::max<std::size_t>(samples.size(), 1));
    std::vector<std::complex<double>> bins(n, std::complex<double>(0.0, 0.0));
    for (std::size_t i = 0; i < samples.size(); ++i) bins[i] = samples[i];
    fft_inplace(bins);
    return bins;
}

Spectrum dft(const SignalOfInterest& soi, double spacing_tolerance) {
    if (soi.times.empty() || soi.magnitudes.empty())
        throw InvalidInputError("dft: empty signal of interest");
    if (soi.times.size() != soi.magnitudes.size())
        throw InvalidInputError("dft: times/magnitudes length mismatch");

    double dt = 0.0;
    if (soi.times.size() > 1) {
        dt = soi.times[1] - soi.times[0];
        if (dt <= 0.0) throw InvalidInputError("dft: times not strictly increasing");
        for (std::size_t i = 1; i < soi.times.size(); ++i) {
            const double step = soi.times[i] - soi.times[i - 1];
            if (std::abs(step - dt) > spacing_tolerance * dt)
                throw InvalidInputError("dft: non-uniform sample spacing at index " +
                                        std::to_string(i));
        }
    }
    const double fs = dt > 0.0 ? 1.0 / dt : 0.0;

    auto bins = fft_real(soi.magnitudes);
    const std::size_t n = bins.size();
    const std::size_t kept = n / 2 + 1;

    Spectrum spec;
    spec.bin_width = fs / static_cast<double>(n);
    spec.frequencies.resize(kept);
    spec.magnitudes.resize(kept);
    for (std::size_t k = 0; k < kept; ++k) {
        spec.frequencies[k] = static_cast<double>(k) * spec.bin_width;
        spec.magnitudes[k] = std::abs(bins[k]);
    }
    return spec;
}

double psd(const Spectrum& spectrum) {
    double sum = 0.0;
    for (double x : spectrum.magnitudes) sum += x;
    return sum * spectrum.bin_width;
}

double fd(const Spectrum& spectrum) {
    double sum = 0.0;
    for (std::size_t i = 0; i < spectrum.magnitudes.size(); ++i)
        sum += spectrum.magnitudes[i] * spectrum.frequencies[i];
    return sum;
}

RegionLabel classify_region(double fd_value, double threshold) {
    return fd_value < threshold ? RegionLabel::SubsurfaceObject : RegionLabel::Normal;
}

} // namespace echomap::signal
