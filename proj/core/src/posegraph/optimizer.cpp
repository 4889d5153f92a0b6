#include "echomap/posegraph/optimizer.hpp"

#include <Eigen/Cholesky>
#include <unordered_map>

#include "echomap/errors.hpp"

namespace echomap::posegraph {

Twist edge_error(const Se3& pose_i, const Se3& pose_j, const Se3& measured) {
    const Se3 estimated = compose(invert(pose_i), pose_j);
    return se3_log(compose(invert(measured), estimated));
}

namespace {

std::unordered_map<int, int> slot_map(const PoseGraph& graph) {
    std::unordered_map<int, int> slots;
    slots.reserve(graph.vertices.size());
    for (std::size_t i = 0; i < graph.vertices.size(); ++i)
        slots.emplace(graph.vertices[i].id, static_cast<int>(i));
    return slots;
}

} // namespace

double total_residual(const PoseGraph& graph) {
    const auto slots = slot_map(graph);
    double sum = 0.0;
    for (const auto& e : graph.edges) {
        const auto it_i = slots.find(e.from);
        const auto it_j = slots.find(e.to);
        if (it_i == slots.end() || it_j == slots.end())
            throw InvalidInputError("total_residual: edge references unknown vertex");
        const Twist err = edge_error(graph.vertices[static_cast<std::size_t>(it_i->second)].pose,
                                     graph.vertices[static_cast<std::size_t>(it_j->second)].pose,
                                     e.measured);
        sum += err.dot(e.information * err);
    }
    return sum;
}

LinearSystem linearize(const PoseGraph& graph) {
    if (graph.edges.empty())
        throw InvalidInputError("linearize: graph has no edges");

    const auto slots = slot_map(graph);
    const int n_free = static_cast<int>(graph.vertices.size()) - 1; // vertex 0 fixed
    const int dim = 6 * n_free;

    LinearSystem sys;
    sys.hessian = Eigen::MatrixXd::Zero(dim, dim);
    sys.gradient = Eigen::VectorXd::Zero(dim);

    constexpr double kStep = 1e-5;
    for (const auto& e : graph.edges) {
        const int si = slots.at(e.from);
        const int sj = slots.at(e.to);
        const Se3& pose_i = graph.vertices[static_cast<std::size_t>(si)].pose;
        const Se3& pose_j = graph.vertices[static_cast<std::size_t>(sj)].pose;
        const Twist err = edge_error(pose_i, pose_j, e.measured);

        // Central-difference Jacobians of the error w.r.t. the twist
        // perturbation of each endpoint.
        Eigen::Matrix<double, 6, 6> jac_i = Eigen::Matrix<double, 6, 6>::Zero();
        Eigen::Matrix<double, 6, 6> jac_j = Eigen::Matrix<double, 6, 6>::Zero();
        for (int k = 0; k < 6; ++k) {
            Twist delta = Twist::Zero();
            delta(k) = kStep;
            const Se3 plus = compose(se3_exp(delta), pose_i);
            delta(k) = -kStep;
            const Se3 minus = compose(se3_exp(delta), pose_i);
            jac_i.col(k) =
                (edge_error(plus, pose_j, e.measured) - edge_error(minus, pose_j, e.measured)) /
                (2.0 * kStep);

            delta(k) = kStep;
            const Se3 plus_j = compose(se3_exp(delta), pose_j);
            delta(k) = -kStep;
            const Se3 minus_j = compose(se3_exp(delta), pose_j);
            jac_j.col(k) =
                (edge_error(pose_i, plus_j, e.measured) - edge_error(pose_i, minus_j, e.measured)) /
                (2.0 * kStep);
        }

        const int bi = (si - 1) * 6; // block offset, -6 for the fixed gauge vertex
        const int bj = (sj - 1) * 6;
        if (si > 0) {
            sys.hessian.block<6, 6>(bi, bi) += jac_i.transpose() * e.information * jac_i;
            sys.gradient.segment<6>(bi) += jac_i.transpose() * e.information * err;
        }
        if (sj > 0) {
            sys.hessian.block<6, 6>(bj, bj) += jac_j.transpose() * e.information * jac_j;
            sys.gradient.segment<6>(bj) += jac_j.transpose() * e.information * err;
        }
        if (si > 0 && sj > 0) {
            sys.hessian.block<6, 6>(bi, bj) += jac_i.transpose() * e.information * jac_j;
            sys.hessian.block<6, 6>(bj, bi) += jac_j.transpose() * e.information * jac_i;
        }
    }
    return sys;
}

LmStepResult lm_step(const PoseGraph& graph, double lambda) {
    if (graph.edges.empty())
        throw InvalidInputError("lm_step: graph has no edges");
    if (graph.vertices.size() < 2) {
        LmStepResult noop{graph, total_residual(graph), Eigen::VectorXd()};
        return noop;
    }

    const LinearSystem sys = linearize(graph);
    const int dim = static_cast<int>(sys.gradient.size());

    Eigen::MatrixXd damped = sys.hessian;
    damped.diagonal().array() += lambda;

    const Eigen::LDLT<Eigen::MatrixXd> solver(damped);
    if (solver.info() != Eigen::Success)
        throw NumericalFailureError("lm_step: damped Hessian factorization failed");
    const Eigen::VectorXd step = solver.solve(-sys.gradient);
    if (!step.allFinite())
        throw NumericalFailureError("lm_step: singular damped Hessian");
    // LDLT can silently produce garbage on rank-deficient systems; verify.
    const double rhs_norm = sys.gradient.norm();
    if (rhs_norm > 0.0) {
        const double solve_error = (damped * step + sys.gradient).norm();
        if (!(solve_error <= 1e-6 * rhs_norm + 1e-12))
            throw NumericalFailureError("lm_step: damped system is numerically singular");
    }

    LmStepResult result;
    result.updated = graph;
    for (int v = 1; v < static_cast<int>(graph.vertices.size()); ++v) {
        const Twist delta = step.segment<6>((v - 1) * 6);
        result.updated.vertices[static_cast<std::size_t>(v)].pose =
            compose(se3_exp(delta), graph.vertices[static_cast<std::size_t>(v)].pose);
    }
    result.residual_after = total_residual(result.updated);
    result.step = step;
    (void)dim;
    return result;
}

OptimizeResult optimize(const PoseGraph& graph, const OptimizeOptions& options) {
    if (!is_connected(graph))
        throw InvalidInputError("optimize: pose graph is disconnected");

    OptimizeResult result;
    result.graph = graph;
    if (graph.edges.empty() || graph.vertices.size() < 2) {
        result.residual_history.push_back(graph.edges.empty() ? 0.0 : total_residual(graph));
        result.converged = true;
        return result;
    }

    double residual = total_residual(result.graph);
    result.residual_history.push_back(residual);
    double lambda = options.initial_lambda;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (residual == 0.0) {
            result.converged = true;
            break;
        }

        bool accepted = false;
        while (lambda <= options.max_lambda) {
            LmStepResult step;
            try {
                step = lm_step(result.graph, lambda);
            } catch (const NumericalFailureError&) {
                lambda *= options.lambda_raise;
                continue;
            }
            if (step.residual_after < residual) {
                result.graph = std::move(step.updated);
                const double previous = residual;
                residual = step.residual_after;
                result.residual_history.push_back(residual);
                lambda = std::max(lambda / options.lambda_drop, 1e-12);
                accepted = true;
                ++result.iterations;
                if (previous - residual <= options.tolerance * previous)
                    result.converged = true;
                break;
            }
            lambda *= options.lambda_raise;
        }
        if (!accepted) {
            // no step at any damping improved the residual; we are at a
            // (numerical) minimum
            result.converged = true;
            break;
        }
        if (result.converged) break;
    }
    return result;
}

} // namespace echomap::posegraph
