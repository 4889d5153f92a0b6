#ifndef ECHOMAP_INFERENCE_CHECKPOINT_HPP
#define ECHOMAP_INFERENCE_CHECKPOINT_HPP

#include <cstdint>
#include <string>

#include "echomap/inference/model.hpp"

namespace echomap::inference {

struct Checkpoint {
    JointModel model;
    std::uint64_t seed = 0;
};

// Binary blob: magic + version header, the layer shapes, the seed and all
// parameters as 64-bit floats. Round-trips bit-exactly.
void save_checkpoint(const std::string& path, const JointModel& model, std::uint64_t seed);

// Throws IoError on missing files, bad magic or an unsupported version.
Checkpoint load_checkpoint(const std::string& path);

} // namespace echomap::inference

#endif
