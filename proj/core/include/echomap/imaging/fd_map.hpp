#ifndef ECHOMAP_IMAGING_FD_MAP_HPP
#define ECHOMAP_IMAGING_FD_MAP_HPP

#include <vector>

#include "echomap/imaging/types.hpp"

namespace echomap::imaging {

// One map point per measurement at its impact position. fd_normalized is
// min-max scaled over the input set; when the spread is zero (single
// measurement or identical FDs) every point gets 1.0. Labels come from
// classify_region at the given threshold. Input order is preserved.
std::vector<FdMapPoint> register_fd_map(const std::vector<Measurement>& measurements,
                                        double fd_threshold);

} // namespace echomap::imaging

#endif
