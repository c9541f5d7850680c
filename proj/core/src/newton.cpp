#include "solitonlab/newton.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "solitonlab/errors.hpp"

namespace solitonlab {

Eigen::MatrixXd finite_difference_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& fx, double relative_step) {
  Eigen::MatrixXd jac(fx.size(), x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = relative_step * std::max(std::abs(x[i]), 1e-3);
    probe[i] = x[i] + h;
    const Eigen::VectorXd forward = f(probe);
    probe[i] = x[i] - h;
    const Eigen::VectorXd backward = f(probe);
    probe[i] = x[i];
    jac.col(i) = (forward - backward) / (2.0 * h);
  }
  return jac;
}

NewtonResult damped_newton(const ResidualFunction& f, Eigen::VectorXd x0,
                           const AdmissibleFunction& admissible, const NewtonOptions& options) {
  if (!admissible(x0)) throw UsageError("Newton start point is not admissible");
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd fx = f(x);
  double residual = fx.norm();

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (residual <= options.tolerance) return {x, residual, iter};

    const Eigen::MatrixXd jac = finite_difference_jacobian(f, x, fx, options.fd_step);
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-fx);

    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
      const Eigen::VectorXd trial = x + lambda * step;
      if (!trial.allFinite() || !admissible(trial)) continue;
      const Eigen::VectorXd ft = f(trial);
      const double rt = ft.norm();
      if (std::isfinite(rt) && rt < residual) {
        x = trial;
        fx = ft;
        residual = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (residual <= options.stagnation_tolerance) return {x, residual, iter};
      throw ConvergenceError("damped Newton stalled at residual " + format_real(residual),
                             residual);
    }
  }
  if (residual <= options.stagnation_tolerance) return {x, residual, options.max_iterations};
  throw ConvergenceError("damped Newton did not converge in " +
                             std::to_string(options.max_iterations) + " iterations (residual " + format_real(residual) + ")",
                         residual);
}

}  // namespace solitonlab
