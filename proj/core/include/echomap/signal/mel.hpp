#ifndef ECHOMAP_SIGNAL_MEL_HPP
#define ECHOMAP_SIGNAL_MEL_HPP

#include <Eigen/Core>
#include <vector>

#include "echomap/signal/types.hpp"

namespace echomap::signal {

struct MelOptions {
    int bands = MelSegment::kRows;
    double f_min = 0.0;    // Hz
    double f_max = 2000.0; // Hz, the band of interest
    int frame = 1024;      // samples per analysis frame (power of two)
    int hop = 256;         // samples between frames
    int frames_per_segment = MelSegment::kCols;
    int segment_hop_frames = 20;
    double floor_db = -80.0; // relative to the segment maximum
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Index of the triangular band whose peak is nearest to the given
// frequency, under the options' band layout.
int mel_band_of(double hz, const MelOptions& options = {});

// Triangular filterbank (bands x (frame/2 + 1)), peak weight 1, applied to
// the power spectrum of a Hann-windowed frame.
Eigen::MatrixXd mel_filterbank(double sample_rate, const MelOptions& options = {});

// Linear-power mel energies of the full SOI, one column per frame
// (bands x n_frames). Empty matrix when the SOI is shorter than one frame.
Eigen::MatrixXd mel_power_frames(const SignalOfInterest& soi, double sample_rate,
                                 const MelOptions& options = {});

// Fixed-size log-mel segments cut from the SOI. Each segment is expressed
// in dB relative to its own maximum and floored at options.floor_db; a
// silent segment holds the floor value everywhere. Returns an empty list
// when the SOI cannot fill one segment.
std::vector<MelSegment> mel_segments(const SignalOfInterest& soi, double sample_rate,
                                     const MelOptions& options = {});

} // namespace echomap::signal

#endif
