#ifndef ECHOMAP_INFERENCE_LOSS_HPP
#define ECHOMAP_INFERENCE_LOSS_HPP

#include <Eigen/Core>

namespace echomap::inference {

// Negative log-likelihood of the true class under a two-class
// distribution, with the log clamped so a hard 0 stays finite.
double loss_pipe(const Eigen::Vector2d& pipe_probs, int label);

// Squared error (y - p)^2.
double loss_depth(double predicted, double label);

// Weighted sum w0 * depth + w1 * pipe. Masking of an absent depth label
// happens at the call site by passing 0 for the depth term.
double loss_joint(double loss_depth_value, double loss_pipe_value, double w0, double w1);

} // namespace echomap::inference

#endif
