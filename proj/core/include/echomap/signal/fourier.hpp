#ifndef ECHOMAP_SIGNAL_FOURIER_HPP
#define ECHOMAP_SIGNAL_FOURIER_HPP

#include <complex>
#include <vector>

#include "echomap/signal/types.hpp"

namespace echomap::signal {

// In-place iterative radix-2 FFT. Size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse = false);

// Forward transform of a real signal zero-padded to the next power of two.
// Returns all N complex bins.
std::vector<std::complex<double>> fft_real(const std::vector<double>& samples);

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Magnitude spectrum of one SOI. The signal is zero-padded to the next
// power of two N; bins 0..N/2 are kept with f_k = k * fs / N.
// Throws InvalidInputError when the SOI is empty or its time grid is not
// uniform within `spacing_tolerance` (relative).
Spectrum dft(const SignalOfInterest& soi, double spacing_tolerance = 1e-6);

// Area under the magnitude spectrum: sum of x_i * bin_width over all bins.
double psd(const Spectrum& spectrum);

// Frequency-weighted magnitude sum: sum of x_i * f_i over all bins.
double fd(const Spectrum& spectrum);

// Pipes absorb energy and lower FD, so low FD indicates a subsurface
// object. The boundary fd == threshold is assigned to Normal.
RegionLabel classify_region(double fd_value, double threshold);

} // namespace echomap::signal

#endif
