#ifndef ECHOMAP_SIGNAL_FILTER_HPP
#define ECHOMAP_SIGNAL_FILTER_HPP

#include <vector>

#include "echomap/signal/types.hpp"

namespace echomap::signal {

// Symmetric windowed-sinc low-pass kernel (Hamming window, unity DC gain).
// Length is 4 * sample_rate / cutoff rounded up to the next odd integer.
std::vector<double> design_lowpass_kernel(double cutoff_hz, double sample_rate);

// Zero-phase FIR low-pass. Output has the same length, sample rate and
// start time as the input; the symmetric kernel's group delay is
// compensated so features stay aligned in time.
// Throws InvalidParameterError when cutoff is not in (0, sample_rate/2).
AudioTrace low_pass_filter(const AudioTrace& trace, double cutoff_hz);

} // namespace echomap::signal

#endif
