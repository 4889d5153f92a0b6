#ifndef ECHOMAP_POSEGRAPH_GRAPH_HPP
#define ECHOMAP_POSEGRAPH_GRAPH_HPP

#include <Eigen/Core>
#include <vector>

#include "echomap/posegraph/se3.hpp"

namespace echomap::posegraph {

using Information = Eigen::Matrix<double, 6, 6>;

struct Keyframe {
    int id = 0;
    Se3 pose; // world-from-keyframe
    double timestamp = 0.0;
};

// Relative-transform constraint between two keyframes: measured is the
// expected value of invert(pose_i) * pose_j.
struct PoseGraphEdge {
    int from = 0;
    int to = 0;
    Se3 measured;
    Information information = Information::Identity();
};

struct PoseGraph {
    std::vector<Keyframe> vertices;
    std::vector<PoseGraphEdge> edges;

    bool empty() const { return vertices.empty(); }
};

struct MotionThreshold {
    double translation = 0.1;             // meters
    double rotation = 0.17453292519943295; // radians (10 degrees)
};

// Inserts a new keyframe when the candidate pose moved or turned past the
// threshold relative to the last keyframe. The first pose is always
// inserted. Returns whether an insertion happened.
bool add_keyframe(PoseGraph& graph, const Se3& pose, double timestamp,
                  const MotionThreshold& threshold);

// True when every vertex is reachable from the first one over the edges,
// ignoring direction.
bool is_connected(const PoseGraph& graph);

} // namespace echomap::posegraph

#endif
