#ifndef ECHOMAP_POSEGRAPH_OPTIMIZER_HPP
#define ECHOMAP_POSEGRAPH_OPTIMIZER_HPP

#include <Eigen/Core>
#include <vector>

#include "echomap/posegraph/graph.hpp"

namespace echomap::posegraph {

// Error of one edge: log( measured^-1 * (pose_i^-1 * pose_j) ).
Twist edge_error(const Se3& pose_i, const Se3& pose_j, const Se3& measured);

// Sum over edges of e^T * information * e.
double total_residual(const PoseGraph& graph);

// Damped normal equations of the residual around the current estimate.
// The first vertex is held fixed as gauge, so the system has
// 6 * (vertices - 1) unknowns ordered by vertex slot. Perturbations are
// applied by left multiplication: pose <- exp(delta) * pose.
struct LinearSystem {
    Eigen::MatrixXd hessian;  // J^T * Omega * J
    Eigen::VectorXd gradient; // J^T * Omega * e
};

LinearSystem linearize(const PoseGraph& graph);

struct LmStepResult {
    PoseGraph updated;
    double residual_after = 0.0;
    Eigen::VectorXd step; // the solved update, for diagnostics
};

// One Levenberg-Marquardt step: solves (H + lambda I) delta = -g and
// applies delta. Does not accept or reject; callers compare residuals.
// Throws InvalidInputError when the graph has no edges and
// NumericalFailureError when the damped system cannot be solved.
LmStepResult lm_step(const PoseGraph& graph, double lambda);

struct OptimizeOptions {
    int max_iterations = 100;
    double tolerance = 1e-10;       // relative residual change
    double initial_lambda = 1e-3;
    double lambda_raise = 10.0;     // on rejected step
    double lambda_drop = 10.0;      // on accepted step
    double max_lambda = 1e12;
};

struct OptimizeResult {
    PoseGraph graph;
    std::vector<double> residual_history; // accepted residuals, starts with initial
    int iterations = 0;
    bool converged = false;
};

// Classic damped Gauss-Newton loop. Rejected steps raise lambda and retry;
// the accepted residual sequence never increases. The first vertex pose is
// returned bit-identical. Throws InvalidInputError on a disconnected graph.
OptimizeResult optimize(const PoseGraph& graph, const OptimizeOptions& options = {});

} // namespace echomap::posegraph

#endif
