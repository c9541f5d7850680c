#pragma once

#include <functional>

#include <Eigen/Dense>

namespace solitonlab {

struct NewtonOptions {
  int max_iterations = 200;
  // Converged once the residual 2-norm drops below this.
  double tolerance = 1e-13;
  // If the line search cannot decrease the residual any further, the current
  // point is accepted when its residual is below this floor (round-off limit
  // of the residual evaluation); otherwise the search fails.
  double stagnation_tolerance = 1e-9;
  int max_halvings = 30;
  // Relative central-difference step for the Jacobian.
  double fd_step = 1e-6;
};

struct NewtonResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
};

using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using AdmissibleFunction = std::function<bool(const Eigen::VectorXd&)>;

/// Central-difference Jacobian of f at x (rows = residuals, cols = unknowns).
Eigen::MatrixXd finite_difference_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& fx, double relative_step);

/// Damped Gauss-Newton iteration on f(x) = 0. The system may be
/// overdetermined; each step is the minimum-norm least-squares solution of
/// J dx = -f. The step length is halved until the trial point is admissible
/// and the residual decreases. Throws ConvergenceError carrying the best
/// residual on failure.
NewtonResult damped_newton(const ResidualFunction& f, Eigen::VectorXd x0,
                           const AdmissibleFunction& admissible, const NewtonOptions& options = {});

}  // namespace solitonlab
