#include "echomap/io/graph_file.hpp"

#include <fstream>
#include <sstream>

#include "echomap/errors.hpp"
#include "echomap/io/csv.hpp"

namespace echomap::io {

using posegraph::PoseGraph;
using posegraph::Se3;

void save_graph(const std::string& path, const PoseGraph& graph) {
    std::ofstream out(path);
    if (!out) throw IoError("graph: cannot write " + path);

    for (const auto& v : graph.vertices) {
        const Eigen::Quaterniond q = v.pose.quaternion();
        out << "VERTEX " << v.id << ' ' << format_double(v.pose.translation.x()) << ' '
            << format_double(v.pose.translation.y()) << ' '
            << format_double(v.pose.translation.z()) << ' ' << format_double(q.w()) << ' '
            << format_double(q.x()) << ' ' << format_double(q.y()) << ' ' << format_double(q.z())
            << '\n';
    }
    for (const auto& e : graph.edges) {
        const Eigen::Quaterniond q = e.measured.quaternion();
        out << "EDGE " << e.from << ' ' << e.to << ' '
            << format_double(e.measured.translation.x()) << ' '
            << format_double(e.measured.translation.y()) << ' '
            << format_double(e.measured.translation.z()) << ' ' << format_double(q.w()) << ' '
            << format_double(q.x()) << ' ' << format_double(q.y()) << ' ' << format_double(q.z());
        for (int r = 0; r < 6; ++r)
            for (int c = r; c < 6; ++c) out << ' ' << format_double(e.information(r, c));
        out << '\n';
    }
    if (!out) throw IoError("graph: write failed for " + path);
}

PoseGraph load_graph(const std::string& path) {
    const auto lines = read_lines(path);
    PoseGraph graph;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty() || lines[i][0] == '#') continue;
        const std::string ctx = path + ":" + std::to_string(i + 1);
        std::istringstream iss(lines[i]);
        std::string kind;
        iss >> kind;

        if (kind == "VERTEX") {
            posegraph::Keyframe kf;
            double x, y, z, qw, qx, qy, qz;
            if (!(iss >> kf.id >> x >> y >> z >> qw >> qx >> qy >> qz))
                throw IoError(ctx + ": malformed VERTEX line");
            kf.pose = Se3::from_quaternion(Eigen::Quaterniond(qw, qx, qy, qz),
                                           Eigen::Vector3d(x, y, z));
            kf.timestamp = static_cast<double>(graph.vertices.size());
            graph.vertices.push_back(kf);
        } else if (kind == "EDGE") {
            posegraph::PoseGraphEdge edge;
            double x, y, z, qw, qx, qy, qz;
            if (!(iss >> edge.from >> edge.to >> x >> y >> z >> qw >> qx >> qy >> qz))
                throw IoError(ctx + ": malformed EDGE line");
            edge.measured = Se3::from_quaternion(Eigen::Quaterniond(qw, qx, qy, qz),
                                                 Eigen::Vector3d(x, y, z));
            std::vector<double> info;
            double value;
            while (iss >> value) info.push_back(value);
            if (!info.empty()) {
                if (info.size() != 21)
                    throw IoError(ctx + ": expected 21 information entries, got " +
                                  std::to_string(info.size()));
                std::size_t k = 0;
                for (int r = 0; r < 6; ++r) {
                    for (int c = r; c < 6; ++c) {
                        edge.information(r, c) = info[k];
                        edge.information(c, r) = info[k];
                        ++k;
                    }
                }
            }
            graph.edges.push_back(edge);
        } else {
            throw IoError(ctx + ": unknown record '" + kind + "'");
        }
    }
    return graph;
}

} // namespace echomap::io
