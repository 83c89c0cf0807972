#include "vlp/lm_solver.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

#include "vlp/error.hpp"

namespace vlp {

void LmOptions::validate() const {
    if (!(initial_damping > 0.0 && damping_increase > 1.0 && damping_decrease > 0.0 && damping_decrease < 1.0 &&
          gradient_tolerance > 0.0 && step_tolerance > 0.0 && max_iterations > 0 && finite_difference_step > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "invalid LM options");
    }
}

namespace {

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

Eigen::MatrixXd jacobian(const ResidualFn& f, const Eigen::VectorXd& x, const Eigen::VectorXd& r0, double step) {
    Eigen::MatrixXd j(r0.size(), x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = step * std::max(1.0, std::abs(x(i)));
        xp(i) = x(i) + h;
        const Eigen::VectorXd r = f(xp);
        xp(i) = x(i);
        if (r.size() != r0.size() || !finite(r)) {
            throw Error(ErrorCode::NonFiniteResidual, "residual not finite while differencing");
        }
        j.col(i) = (r - r0) / h;
    }
    return j;
}

}  // namespace

LmResult solve(const ResidualFn& residual_fn, const Eigen::VectorXd& x0, const LmOptions& opts) {
    opts.validate();
    LmResult res;
    Eigen::VectorXd x = x0;
    Eigen::VectorXd r = residual_fn(x);
    if (!finite(r) || !finite(x)) throw Error(ErrorCode::NonFiniteResidual, "residual not finite at start");
    double cost = r.squaredNorm();
    res.cost_history.push_back(cost);

    double lambda = opts.initial_damping;
    Eigen::MatrixXd j = jacobian(residual_fn, x, r, opts.finite_difference_step);
    Eigen::VectorXd g = j.transpose() * r;
    const auto n = x.size();

    while (true) {
        res.gradient_norm = g.norm();
        if (res.gradient_norm <= opts.gradient_tolerance) {
            res.converged = true;
            res.stop = LmStop::GradientTolerance;
            break;
        }
        if (res.iterations >= opts.max_iterations) {
            res.stop = LmStop::MaxIterations;
            break;
        }
        ++res.iterations;

        const Eigen::MatrixXd a = j.transpose() * j + lambda * Eigen::MatrixXd::Identity(n, n);
        const Eigen::VectorXd delta = a.ldlt().solve(-g);
        if (!finite(delta)) {
            lambda *= opts.damping_increase;
            continue;
        }
        if (delta.norm() <= opts.step_tolerance * (x.norm() + opts.step_tolerance)) {
            res.converged = true;
            res.stop = LmStop::StepTolerance;
            break;
        }

        const Eigen::VectorXd x_new = x + delta;
        const Eigen::VectorXd r_new = residual_fn(x_new);
        const double cost_new = finite(r_new) ? r_new.squaredNorm() : HUGE_VAL;
        if (cost_new < cost) {
            x = x_new;
            r = r_new;
            cost = cost_new;
            res.cost_history.push_back(cost);
            lambda = std::max(lambda * opts.damping_decrease, 1e-300);
            j = jacobian(residual_fn, x, r, opts.finite_difference_step);
            g = j.transpose() * r;
        } else {
            lambda *= opts.damping_increase;
            if (!std::isfinite(lambda)) {
                // Damping exhausted; no descent is reachable from here.
                res.converged = true;
                res.stop = LmStop::StepTolerance;
                break;
            }
        }
    }
    res.solution = x;
    res.final_cost = cost;
    return res;
}

}  // namespace vlp
