#include "echomap/posegraph/graph.hpp"

#include <queue>

namespace echomap::posegraph {

bool add_keyframe(PoseGraph& graph, const Se3& pose, double timestamp,
                  const MotionThreshold& threshold) {
    if (graph.vertices.empty()) {
        graph.vertices.push_back({0, pose, timestamp});
        return true;
    }
    const Keyframe& last = graph.vertices.back();
    const Se3 delta = compose(invert(last.pose), pose);
    const bool moved = delta.translation.norm() > threshold.translation ||
                       rotation_angle(delta) > threshold.rotation;
    if (!moved) return false;

    graph.vertices.push_back({last.id + 1, pose, timestamp});
    return true;
}

bool is_connected(const PoseGraph& graph) {
    const std::size_t n = graph.vertices.size();
    if (n <= 1) return true;

    // vertex ids may be sparse; map id -> slot
    std::vector<int> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = graph.vertices[i].id;
    auto slot_of = [&ids](int id) -> int {
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == id) return static_cast<int>(i);
        return -1;
    };

    std::vector<std::vector<int>> adjacency(n);
    for (const auto& e : graph.edges) {
        const int a = slot_of(e.from);
        const int b = slot_of(e.to);
        if (a < 0 || b < 0) continue;
        adjacency[static_cast<std::size_t>(a)].push_back(b);
        adjacency[static_cast<std::size_t>(b)].push_back(a);
    }

    std::vector<bool> seen(n, false);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int w : adjacency[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                ++count;
                frontier.push(w);
            }
        }
    }
    return count == n;
}

} // namespace echomap::posegraph
