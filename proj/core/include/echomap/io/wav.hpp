#ifndef ECHOMAP_IO_WAV_HPP
#define ECHOMAP_IO_WAV_HPP

#include <string>
#include <vector>

#include "echomap/signal/types.hpp"

namespace echomap::io {

struct LoadedWav {
    signal::AudioTrace trace;
    int channels_in_file = 1;
    std::vector<std::string> warnings;
};

// Reads mono or multi-channel PCM 16-bit / IEEE float 32-bit WAV files.
// Multi-channel input keeps channel 0 and records a warning. Samples map
// to [-1, 1] full scale. Throws IoError on malformed files or unsupported
// encodings.
LoadedWav load_wav(const std::string& path);

// Mono IEEE float 32-bit writer.
void save_wav(const std::string& path, const signal::AudioTrace& trace);

} // namespace echomap::io

#endif
