#ifndef ECHOMAP_IO_EXPORTS_HPP
#define ECHOMAP_IO_EXPORTS_HPP

#include <string>
#include <vector>

#include "echomap/imaging/types.hpp"

namespace echomap::io {

// CSV with header frequency_hz,magnitude.
void save_spectrum_csv(const std::string& path, const signal::Spectrum& spectrum);

// CSV with header x,y,z,fd,fd_normalized,label.
void save_fd_map_csv(const std::string& path, const std::vector<imaging::FdMapPoint>& points);

// Grayscale point cloud; intensity follows fd_normalized (dark = low
// energy, white = high).
void save_fd_map_ply(const std::string& path, const std::vector<imaging::FdMapPoint>& points);

} // namespace echomap::io

#endif
