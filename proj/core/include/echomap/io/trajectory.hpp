#ifndef ECHOMAP_IO_TRAJECTORY_HPP
#define ECHOMAP_IO_TRAJECTORY_HPP

#include <string>
#include <vector>

#include "echomap/imaging/sync.hpp"

namespace echomap::io {

// Pose trajectory CSV: timestamp,x,y,z,qw,qx,qy,qz (meters, unit quaternion).
void save_trajectory(const std::string& path, const std::vector<imaging::TimedPose>& poses);
std::vector<imaging::TimedPose> load_trajectory(const std::string& path);

} // namespace echomap::io

#endif
