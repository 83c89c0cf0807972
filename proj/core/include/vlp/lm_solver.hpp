#pragma once

// Levenberg-Marquardt for small dense problems with a forward-difference
// Jacobian.

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace vlp {

struct LmOptions {
    double initial_damping = 1e-3;
    double damping_increase = 10.0;
    double damping_decrease = 0.1;
    double gradient_tolerance = 1e-10;
    double step_tolerance = 1e-12;
    int max_iterations = 200;
    double finite_difference_step = 1e-7;  // relative: h_i = step * max(1, |x_i|)

    void validate() const;  // throws InvalidArgument
};

enum class LmStop { GradientTolerance, StepTolerance, MaxIterations };

struct LmResult {
    Eigen::VectorXd solution;
    double final_cost = 0.0;  // sum of squared residuals
    int iterations = 0;       // trial steps taken
    bool converged = false;
    double gradient_norm = 0.0;
    LmStop stop = LmStop::MaxIterations;
    std::vector<double> cost_history;  // initial cost, then each accepted cost
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Throws NonFiniteResidual if the residual is not finite at x0. Non-finite
/// trial points are treated as rejected steps.
LmResult solve(const ResidualFn& residual_fn, const Eigen::VectorXd& x0, const LmOptions& opts = {});

}  // namespace vlp
