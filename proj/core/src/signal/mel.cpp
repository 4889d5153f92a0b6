#include "echomap/signal/mel.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "echomap/errors.hpp"
#include "echomap/signal/fourier.hpp"

namespace echomap::signal {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

int mel_band_of(double hz, const MelOptions& options) {
    const double mel_lo = hz_to_mel(options.f_min);
    const double mel_hi = hz_to_mel(options.f_max);
    const double step = (mel_hi - mel_lo) / static_cast<double>(options.bands + 1);
    // band b peaks at mel_lo + (b + 1) * step
    int band = static_cast<int>(std::lround((hz_to_mel(hz) - mel_lo) / step)) - 1;
    return std::clamp(band, 0, options.bands - 1);
}

Eigen::MatrixXd mel_filterbank(double sample_rate, const MelOptions& options) {
    if (sample_rate <= 0.0)
        throw InvalidParameterError("mel_filterbank: sample_rate must be positive");
    if (options.bands <= 0 || options.frame <= 0)
        throw InvalidParameterError("mel_filterbank: bands and frame must be positive");

    const int n_bins = options.frame / 2 + 1;
    const double bin_hz = sample_rate / static_cast<double>(options.frame);

    const double mel_lo = hz_to_mel(options.f_min);
    const double mel_hi = hz_to_mel(options.f_max);
    const double step = (mel_hi - mel_lo) / static_cast<double>(options.bands + 1);

    Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(options.bands, n_bins);
    for (int b = 0; b < options.bands; ++b) {
        const double f0 = mel_to_hz(mel_lo + step * b);
        const double f1 = mel_to_hz(mel_lo + step * (b + 1));
        const double f2 = mel_to_hz(mel_lo + step * (b + 2));
        for (int k = 0; k < n_bins; ++k) {
            const double f = k * bin_hz;
            if (f > f0 && f < f1) {
                fb(b, k) = (f - f0) / (f1 - f0);
            } else if (f >= f1 && f < f2) {
                fb(b, k) = (f2 - f) / (f2 - f1);
            }
        }
    }
    return fb;
}

Eigen::MatrixXd mel_power_frames(const SignalOfInterest& soi, double sample_rate,
                                 const MelOptions& options) {
    const int frame = options.frame;
    const int hop = options.hop;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(soi.magnitudes.size());
    if (n < frame) return Eigen::MatrixXd(options.bands, 0);

    const int n_frames = static_cast<int>((n - frame) / hop) + 1;
    const Eigen::MatrixXd fb = mel_filterbank(sample_rate, options);

    std::vector<double> window(static_cast<std::size_t>(frame));
    for (int i = 0; i < frame; ++i)
        window[static_cast<std::size_t>(i)] =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / static_cast<double>(frame)));

    Eigen::MatrixXd power(options.bands, n_frames);
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(frame));
    Eigen::VectorXd spec_power(frame / 2 + 1);
    for (int f = 0; f < n_frames; ++f) {
        const std::size_t base = static_cast<std::size_t>(f) * static_cast<std::size_t>(hop);
        for (int i = 0; i < frame; ++i)
            buf[static_cast<std::size_t>(i)] =
                soi.magnitudes[base + static_cast<std::size_t>(i)] *
                window[static_cast<std::size_t>(i)];
        fft_inplace(buf);
        for (int k = 0; k <= frame / 2; ++k) spec_power(k) = std::norm(buf[static_cast<std::size_t>(k)]);
        power.col(f) = fb * spec_power;
    }
    return power;
}

std::vector<MelSegment> mel_segments(const SignalOfInterest& soi, double sample_rate,
                                     const MelOptions& options) {
    std::vector<MelSegment> segments;
    const Eigen::MatrixXd power = mel_power_frames(soi, sample_rate, options);
    const int n_frames = static_cast<int>(power.cols());
    const int len = options.frames_per_segment;
    if (n_frames < len) return segments;

    for (int start = 0; start + len <= n_frames; start += options.segment_hop_frames) {
        const Eigen::MatrixXd block = power.middleCols(start, len);
        MelSegment seg;
        seg.values.resize(options.bands, len);
        const double ref = block.maxCoeff();
        if (ref <= 0.0) {
            seg.values.setConstant(options.floor_db);
        } else {
            for (int r = 0; r < options.bands; ++r) {
                for (int c = 0; c < len; ++c) {
                    const double p = block(r, c);
                    const double db =
                        p <= 0.0 ? options.floor_db : 10.0 * std::log10(p / ref);
                    seg.values(r, c) = std::max(db, options.floor_db);
                }
            }
        }
        segments.push_back(std::move(seg));
    }
    return segments;
}

} // namespace echomap::signal
