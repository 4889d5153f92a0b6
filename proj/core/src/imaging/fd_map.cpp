#include "echomap/imaging/fd_map.hpp"

#include <algorithm>

#include "echomap/signal/fourier.hpp"

namespace echomap::imaging {

std::vector<FdMapPoint> register_fd_map(const std::vector<Measurement>& measurements,
                                        double fd_threshold) {
    std::vector<FdMapPoint> map;
    if (measurements.empty()) return map;

    double fd_min = measurements.front().fd_value;
    double fd_max = fd_min;
    for (const auto& m : measurements) {
        fd_min = std::min(fd_min, m.fd_value);
        fd_max = std::max(fd_max, m.fd_value);
    }
    const double spread = fd_max - fd_min;

    map.reserve(measurements.size());
    for (const auto& m : measurements) {
        FdMapPoint p;
        p.position = m.position;
        p.fd_value = m.fd_value;
        p.fd_normalized = spread > 0.0 ? (m.fd_value - fd_min) / spread : 1.0;
        p.label = signal::classify_region(m.fd_value, fd_threshold);
        map.push_back(p);
    }
    return map;
}

} // namespace echomap::imaging
