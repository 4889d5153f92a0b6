#include "echomap/io/ply.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "echomap/errors.hpp"
#include "echomap/io/csv.hpp"

namespace echomap::io {

void save_ply(const std::string& path, const std::vector<PlyPoint>& points) {
    std::ofstream out(path);
    if (!out) throw IoError("ply: cannot write " + path);

    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << points.size() << '\n';
    out << "property float x\nproperty float y\nproperty float z\n";
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "end_header\n";
    for (const auto& p : points) {
        const int gray = static_cast<int>(
            std::lround(255.0 * std::clamp(p.intensity, 0.0, 1.0)));
        out << format_double(p.position.x()) << ' ' << format_double(p.position.y()) << ' '
            << format_double(p.position.z()) << ' ' << gray << ' ' << gray << ' ' << gray
            << '\n';
    }
    if (!out) throw IoError("ply: write failed for " + path);
}

void save_voxel_ply(const std::string& path, const imaging::VoxelGrid& grid,
                    double threshold_fraction) {
    std::vector<PlyPoint> points;
    const double max_score =
        grid.scores.empty() ? 0.0 : *std::max_element(grid.scores.begin(), grid.scores.end());
    if (max_score > 0.0) {
        const double threshold = threshold_fraction * max_score;
        for (int iz = 0; iz < grid.dims.z(); ++iz)
            for (int iy = 0; iy < grid.dims.y(); ++iy)
                for (int ix = 0; ix < grid.dims.x(); ++ix) {
                    const double s = grid.at(ix, iy, iz);
                    if (s >= threshold && s > 0.0)
                        points.push_back({grid.center(ix, iy, iz), s / max_score});
                }
    }
    save_ply(path, points);
}

} // namespace echomap::io
