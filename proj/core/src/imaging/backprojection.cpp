#include "echomap/imaging/backprojection.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "echomap/errors.hpp"

namespace echomap::imaging {

VoxelGrid VoxelGrid::create(const Eigen::Vector3d& origin, double resolution,
                            const Eigen::Vector3i& dims) {
    if (resolution <= 0.0)
        throw InvalidParameterError("VoxelGrid: resolution must be positive");
    if ((dims.array() <= 0).any())
        throw InvalidParameterError("VoxelGrid: dims must be positive");
    VoxelGrid grid;
    grid.origin = origin;
    grid.resolution = resolution;
    grid.dims = dims;
    grid.scores.assign(static_cast<std::size_t>(dims.x()) * static_cast<std::size_t>(dims.y()) *
                           static_cast<std::size_t>(dims.z()),
                       0.0);
    return grid;
}

double peak_frequency(const signal::Spectrum& spectrum, const PeakBand& band) {
    double best_mag = -1.0;
    double best_freq = 0.0;
    double band_min = -1.0;
    bool any = false;
    for (std::size_t k = 0; k < spectrum.frequencies.size(); ++k) {
        const double f = spectrum.frequencies[k];
        if (f < band.low_hz || f > band.high_hz) continue;
        const double x = spectrum.magnitudes[k];
        any = true;
        band_min = band_min < 0.0 ? x : std::min(band_min, x);
        if (x > best_mag) {
            best_mag = x;
            best_freq = f;
        }
    }
    if (!any) throw NoPeakError("peak_frequency: no spectrum bins inside the search band");
    if (best_mag <= 0.0 || best_mag == band_min)
        throw NoPeakError("peak_frequency: spectrum is flat inside the search band");
    return best_freq;
}

double estimate_radius(const signal::Spectrum& spectrum, double wave_speed,
                       const PeakBand& band) {
    if (wave_speed <= 0.0)
        throw InvalidParameterError("estimate_radius: wave_speed must be positive");
    return wave_speed / (2.0 * peak_frequency(spectrum, band));
}

VoxelGrid back_project(const std::vector<TapGroup>& tap_groups,
                       const std::vector<double>& radii, VoxelGrid grid,
                       double shell_tolerance, const BackProjectOptions& options) {
    if (tap_groups.size() != radii.size())
        throw InvalidParameterError("back_project: one radius per tap group required");
    if (shell_tolerance < 0.0)
        throw InvalidParameterError("back_project: shell_tolerance must be nonnegative");

    const Eigen::Vector3d down = options.subsurface_direction.normalized();
    const double res = grid.resolution;

    for (std::size_t g = 0; g < tap_groups.size(); ++g) {
        const Eigen::Vector3d& c = tap_groups[g].centroid;
        const double r = radii[g];
        if (r <= 0.0)
            throw InvalidParameterError("back_project: radii must be positive");

        // only voxels inside the shell's bounding box can score
        const double reach = r + shell_tolerance;
        const auto lo_idx = [&](double coord, double org) {
            return std::max(0, static_cast<int>(std::floor((coord - org) / res)) - 1);
        };
        const int x0 = lo_idx(c.x() - reach, grid.origin.x());
        const int y0 = lo_idx(c.y() - reach, grid.origin.y());
        const int z0 = lo_idx(c.z() - reach, grid.origin.z());
        const int x1 = std::min(grid.dims.x() - 1,
                                static_cast<int>(std::floor((c.x() + reach - grid.origin.x()) / res)) + 1);
        const int y1 = std::min(grid.dims.y() - 1,
                                static_cast<int>(std::floor((c.y() + reach - grid.origin.y()) / res)) + 1);
        const int z1 = std::min(grid.dims.z() - 1,
                                static_cast<int>(std::floor((c.z() + reach - grid.origin.z()) / res)) + 1);

        for (int iz = z0; iz <= z1; ++iz) {
            for (int iy = y0; iy <= y1; ++iy) {
                for (int ix = x0; ix <= x1; ++ix) {
                    const Eigen::Vector3d center = grid.center(ix, iy, iz);
                    if ((center - c).dot(down) < 0.0) continue; // above the surface side
                    const double dx = center.x() - c.x();
                    const double dy = center.y() - c.y();
                    const double dz = center.z() - c.z();
                    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
                    const double miss = std::abs(dist - r);
                    if (miss > shell_tolerance) continue;
                    if (options.weighting == ShellWeighting::Binary) {
                        grid.at(ix, iy, iz) += 1.0;
                    } else {
                        const double sigma = shell_tolerance > 0.0 ? shell_tolerance : res;
                        grid.at(ix, iy, iz) += std::exp(-miss * miss / (2.0 * sigma * sigma));
                    }
                }
            }
        }
    }
    return grid;
}

std::vector<Eigen::Vector3d> extract_targets(const VoxelGrid& grid,
                                             double score_threshold_fraction) {
    std::vector<Eigen::Vector3d> targets;
    if (grid.scores.empty()) return targets;

    const double max_score = *std::max_element(grid.scores.begin(), grid.scores.end());
    if (max_score <= 0.0) return targets;
    const double threshold = score_threshold_fraction * max_score;

    std::vector<char> visited(grid.scores.size(), 0);
    const auto qualifies = [&](int ix, int iy, int iz) {
        return grid.at(ix, iy, iz) >= threshold;
    };

    for (int iz = 0; iz < grid.dims.z(); ++iz) {
        for (int iy = 0; iy < grid.dims.y(); ++iy) {
            for (int ix = 0; ix < grid.dims.x(); ++ix) {
                const std::size_t idx = grid.index(ix, iy, iz);
                if (visited[idx] || !qualifies(ix, iy, iz)) continue;

                // flood-fill one 26-connected cluster
                Eigen::Vector3d sum = Eigen::Vector3d::Zero();
                std::size_t count = 0;
                std::deque<Eigen::Vector3i> frontier;
                frontier.push_back({ix, iy, iz});
                visited[idx] = 1;
                while (!frontier.empty()) {
                    const Eigen::Vector3i v = frontier.front();
                    frontier.pop_front();
                    sum += grid.center(v.x(), v.y(), v.z());
                    ++count;
                    for (int dz = -1; dz <= 1; ++dz) {
                        for (int dy = -1; dy <= 1; ++dy) {
                            for (int dx = -1; dx <= 1; ++dx) {
                                if (dx == 0 && dy == 0 && dz == 0) continue;
                                const int nx = v.x() + dx, ny = v.y() + dy, nz = v.z() + dz;
                                if (nx < 0 || ny < 0 || nz < 0 || nx >= grid.dims.x() ||
                                    ny >= grid.dims.y() || nz >= grid.dims.z())
                                    continue;
                                const std::size_t nidx = grid.index(nx, ny, nz);
                                if (visited[nidx] || !qualifies(nx, ny, nz)) continue;
                                visited[nidx] = 1;
                                frontier.push_back({nx, ny, nz});
                            }
                        }
                    }
                }
                targets.push_back(sum / static_cast<double>(count));
            }
        }
    }
    return targets;
}

} // namespace echomap::imaging
