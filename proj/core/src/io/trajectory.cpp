#include "echomap/io/trajectory.hpp"

#include <fstream>

#include "echomap/errors.hpp"
#include "echomap/io/csv.hpp"

namespace echomap::io {

void save_trajectory(const std::string& path, const std::vector<imaging::TimedPose>& poses) {
    std::ofstream out(path);
    if (!out) throw IoError("trajectory: cannot write " + path);
    out << "timestamp,x,y,z,qw,qx,qy,qz\n";
    for (const auto& sample : poses) {
        const Eigen::Quaterniond q = sample.pose.quaternion();
        out << format_double(sample.timestamp) << ',' << format_double(sample.pose.translation.x())
            << ',' << format_double(sample.pose.translation.y()) << ','
            << format_double(sample.pose.translation.z()) << ',' << format_double(q.w()) << ','
            << format_double(q.x()) << ',' << format_double(q.y()) << ',' << format_double(q.z())
            << '\n';
    }
    if (!out) throw IoError("trajectory: write failed for " + path);
}

std::vector<imaging::TimedPose> load_trajectory(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw IoError("trajectory: empty file " + path);

    std::vector<imaging::TimedPose> poses;
    for (std::size_t i = 1; i < lines.size(); ++i) { // skip header
        if (lines[i].empty()) continue;
        const auto f = split_csv_line(lines[i]);
        const std::string ctx = path + ":" + std::to_string(i + 1);
        if (f.size() != 8) throw IoError(ctx + ": expected 8 fields, got " +
                                         std::to_string(f.size()));
        imaging::TimedPose sample;
        sample.timestamp = parse_double(f[0], ctx);
        const Eigen::Vector3d t(parse_double(f[1], ctx), parse_double(f[2], ctx),
                                parse_double(f[3], ctx));
        const Eigen::Quaterniond q(parse_double(f[4], ctx), parse_double(f[5], ctx),
                                   parse_double(f[6], ctx), parse_double(f[7], ctx));
        sample.pose = posegraph::Se3::from_quaternion(q, t);
        poses.push_back(sample);
    }
    return poses;
}

} // namespace echomap::io
