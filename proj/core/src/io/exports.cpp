#include "echomap/io/exports.hpp"

#include <fstream>

#include "echomap/errors.hpp"
#include "echomap/io/csv.hpp"
#include "echomap/io/ply.hpp"

namespace echomap::io {

void save_spectrum_csv(const std::string& path, const signal::Spectrum& spectrum) {
    std::ofstream out(path);
    if (!out) throw IoError("spectrum: cannot write " + path);
    out << "frequency_hz,magnitude\n";
    for (std::size_t k = 0; k < spectrum.frequencies.size(); ++k)
        out << format_double(spectrum.frequencies[k]) << ','
            << format_double(spectrum.magnitudes[k]) << '\n';
    if (!out) throw IoError("spectrum: write failed for " + path);
}

void save_fd_map_csv(const std::string& path, const std::vector<imaging::FdMapPoint>& points) {
    std::ofstream out(path);
    if (!out) throw IoError("fd map: cannot write " + path);
    out << "x,y,z,fd,fd_normalized,label\n";
    for (const auto& p : points)
        out << format_double(p.position.x()) << ',' << format_double(p.position.y()) << ','
            << format_double(p.position.z()) << ',' << format_double(p.fd_value) << ','
            << format_double(p.fd_normalized) << ',' << signal::to_string(p.label) << '\n';
    if (!out) throw IoError("fd map: write failed for " + path);
}

void save_fd_map_ply(const std::string& path, const std::vector<imaging::FdMapPoint>& points) {
    std::vector<PlyPoint> ply;
    ply.reserve(points.size());
    for (const auto& p : points) ply.push_back({p.position, p.fd_normalized});
    save_ply(path, ply);
}

} // namespace echomap::io
