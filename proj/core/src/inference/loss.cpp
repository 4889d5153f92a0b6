#include "echomap/inference/loss.hpp"

#include <algorithm>
#include <cmath>

namespace echomap::inference {

double loss_pipe(const Eigen::Vector2d& pipe_probs, int label) {
    const double p = pipe_probs(label == 0 ? 0 : 1);
    return -std::log(std::max(p, 1e-300));
}

double loss_depth(double predicted, double label) {
    const double d = label - predicted;
    return d * d;
}

double loss_joint(double loss_depth_value, double loss_pipe_value, double w0, double w1) {
    return w0 * loss_depth_value + w1 * loss_pipe_value;
}

} // namespace echomap::inference
