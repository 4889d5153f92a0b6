#ifndef ECHOMAP_IO_GRAPH_FILE_HPP
#define ECHOMAP_IO_GRAPH_FILE_HPP

#include <string>

#include "echomap/posegraph/graph.hpp"

namespace echomap::io {

// Text graph format, one record per line:
//   VERTEX id x y z qw qx qy qz
//   EDGE i j x y z qw qx qy qz [21 upper-triangular information entries]
// Edges without information entries get the identity matrix.
void save_graph(const std::string& path, const posegraph::PoseGraph& graph);
posegraph::PoseGraph load_graph(const std::string& path);

} // namespace echomap::io

#endif
