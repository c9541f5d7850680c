#include "solitonlab/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "solitonlab/errors.hpp"
#include "solitonlab/newton.hpp"

namespace solitonlab {
namespace {

constexpr double kSingleGaussianWidth = 1.0 / (16.0 * std::numbers::pi);
constexpr int kWeightIterations = 5000;
constexpr double kWeightTolerance = 1e-13;
constexpr int kWidthIterations = 200;
constexpr double kHessianStep = 1e-5;
constexpr double kEigenFloor = 1e-8;
constexpr double kStationaryFloor = 1e-8;

// Projector k -> (power of x, sign): gamma: g_k, beta: x g_k, alpha: -x^2 g_k.
constexpr std::array<int, 3> kProjectorPower{0, 1, 2};
constexpr std::array<double, 3> kProjectorSign{1.0, 1.0, -1.0};

using Packed = std::vector<double>;

void pack(std::span<const GaussianTerm> psi, Packed& out) {
  out.resize(6 * psi.size());
  for (std::size_t n = 0; n < psi.size(); ++n) {
    out[6 * n + 0] = psi[n].alpha.real();
    out[6 * n + 1] = psi[n].alpha.imag();
    out[6 * n + 2] = psi[n].beta.real();
    out[6 * n + 3] = psi[n].beta.imag();
    out[6 * n + 4] = psi[n].gamma.real();
    out[6 * n + 5] = psi[n].gamma.imag();
  }
}

void unpack(const Packed& in, GaussianSum& psi) {
  psi.resize(in.size() / 6);
  for (std::size_t n = 0; n < psi.size(); ++n) {
    psi[n].alpha = {in[6 * n + 0], in[6 * n + 1]};
    psi[n].beta = {in[6 * n + 2], in[6 * n + 3]};
    psi[n].gamma = {in[6 * n + 4], in[6 * n + 5]};
  }
}

// Real Gaussian sum sum_k c_k exp(-a_k x^2): overlap, kinetic and quartic tensors.
struct RealBasis {
  explicit RealBasis(const Eigen::VectorXd& widths) : a(widths), n(widths.size()) {
    const double pi = std::numbers::pi;
    overlap.resize(n, n);
    kinetic.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double s = a[i] + a[j];
        overlap(i, j) = std::sqrt(pi / s);
        kinetic(i, j) = overlap(i, j) * 2.0 * a[i] * a[j] / s;
      }
    }
    quartic.resize(static_cast<std::size_t>(n * n * n * n));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index m = 0; m < n; ++m)
          for (Eigen::Index j = 0; j < n; ++j)
            quartic[index(i, l, m, j)] = std::sqrt(pi / (a[i] + a[l] + a[m] + a[j]));
  }

  std::size_t index(Eigen::Index i, Eigen::Index l, Eigen::Index m, Eigen::Index j) const {
    return static_cast<std::size_t>(((i * n + l) * n + m) * n + j);
  }

  // W_ij = sum_lm R_ilmj c_l c_m
  Eigen::MatrixXd mean_field(const Eigen::VectorXd& c) const {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l)
          for (Eigen::Index m = 0; m < n; ++m) w(i, j) += quartic[index(i, l, m, j)] * c[l] * c[m];
    return w;
  }

  double quartic_form(const Eigen::VectorXd& c) const {
    return c.dot(mean_field(c) * c);
  }

  Eigen::VectorXd a;
  Eigen::Index n;
  Eigen::MatrixXd overlap, kinetic;
  std::vector<double> quartic;
};

struct WeightSolution {
  Eigen::VectorXd c;
  double energy = 0.0;
  double mu = 0.0;
};

// Optimal linear weights at fixed widths: damped self-consistent iteration of
// (T - W(c)) c = mu S c on the lowest eigenvector, normalized to c^T S c = 1.
WeightSolution optimal_weights(const RealBasis& basis, Eigen::VectorXd c) {
  const auto normalize = [&](Eigen::VectorXd& v) {
    if (v.sum() < 0.0) v = -v;
    v /= std::sqrt(v.dot(basis.overlap * v));
  };
  if (c.size() != basis.n) c = Eigen::VectorXd::Ones(basis.n);
  normalize(c);
  double mu = 0.0;
  bool converged = false;
  for (int it = 0; it < kWeightIterations && !converged; ++it) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        basis.kinetic - basis.mean_field(c), basis.overlap);
    if (eig.info() != Eigen::Success) break;
    Eigen::VectorXd next = eig.eigenvectors().col(0);
    normalize(next);
    mu = eig.eigenvalues()[0];
    converged = (next - c).lpNorm<Eigen::Infinity>() < kWeightTolerance;
    c = converged ? next : Eigen::VectorXd(0.5 * (c + next));
    normalize(c);
  }
  if (!converged) throw ConvergenceError("ground-state weight iteration did not converge", mu);
  return {c, c.dot(basis.kinetic * c) - 0.5 * basis.quartic_form(c), mu};
}

// Gradient of the normalized energy with respect to ln(a_k) at fixed weights.
Eigen::VectorXd width_gradient(const RealBasis& basis, const Eigen::VectorXd& c) {
  const Eigen::Index n = basis.n;
  const Eigen::VectorXd& a = basis.a;
  double nrm = 0.0, kin = 0.0, quart = 0.0;
  Eigen::VectorXd dn = Eigen::VectorXd::Zero(n), dk = dn, dq = dn;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index m = 0; m < n; ++m) {
      const double s = a[i] + a[m];
      const double ov = basis.overlap(i, m) * c[i] * c[m];
      const double t = 2.0 * a[i] * a[m] / s;
      nrm += ov;
      kin += ov * t;
      dn[i] -= ov / s;
      dk[i] += 2.0 * ov * (-t / (2.0 * s) + 2.0 * a[m] * a[m] / (s * s));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index j = 0; j < n; ++j) {
          const double r = basis.quartic[basis.index(i, l, m, j)] * c[i] * c[l] * c[m] * c[j];
          quart += r;
          dq[i] -= 2.0 * r / (a[i] + a[l] + a[m] + a[j]);
        }
  const double n2 = nrm * nrm;
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g[i] = a[i] * (dk[i] / nrm - kin * dn[i] / n2 - 0.5 * dq[i] / n2 + quart * dn[i] / (n2 * nrm));
  }
  return g;
}

struct WidthPoint {
  Eigen::VectorXd log_widths;
  WeightSolution weights;
  Eigen::VectorXd gradient;
};

WidthPoint evaluate_widths(const Eigen::VectorXd& log_widths, const Eigen::VectorXd& warm) {
  const RealBasis basis(log_widths.array().exp().matrix());
  WeightSolution w = optimal_weights(basis, warm);
  Eigen::VectorXd g = width_gradient(basis, w.c);
  return {log_widths, std::move(w), std::move(g)};
}

// Energy descent over log widths with the weights eliminated: Newton steps on a
// finite-difference Hessian whose eigenvalues are floored to stay positive.
WidthPoint minimize_energy(const std::vector<double>& widths) {
  const auto n = static_cast<Eigen::Index>(widths.size());
  Eigen::VectorXd start(n);
  for (Eigen::Index k = 0; k < n; ++k) start[k] = std::log(widths[static_cast<std::size_t>(k)]);
  WidthPoint cur = evaluate_widths(start, {});

  for (int it = 0; it < kWidthIterations; ++it) {
    if (cur.gradient.norm() < 1e-15) break;
    Eigen::MatrixXd hess(n, n);
    try {
      for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::VectorXd probe = cur.log_widths;
        probe[k] += kHessianStep;
        const Eigen::VectorXd up = evaluate_widths(probe, cur.weights.c).gradient;
        probe[k] -= 2.0 * kHessianStep;
        const Eigen::VectorXd down = evaluate_widths(probe, cur.weights.c).gradient;
        hess.col(k) = (up - down) / (2.0 * kHessianStep);
      }
    } catch (const ConvergenceError&) {
      break;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (hess + hess.transpose()));
    Eigen::VectorXd lambda = eig.eigenvalues().cwiseAbs();
    lambda = lambda.cwiseMax(kEigenFloor * lambda.maxCoeff());
    const Eigen::VectorXd step = -eig.eigenvectors() *
                                 (eig.eigenvectors().transpose() * cur.gradient).cwiseQuotient(lambda);

    bool moved = false;
    for (double scale = 1.0; scale > 1e-6 && !moved; scale *= 0.5) {
      try {
        WidthPoint trial = evaluate_widths(cur.log_widths + scale * step, cur.weights.c);
        if (trial.weights.energy < cur.weights.energy) {
          cur = std::move(trial);
          moved = true;
        }
      } catch (const ConvergenceError&) {
      }
    }
    if (!moved) break;
  }
  return cur;
}

}  // namespace

LinearSystem assemble_system(std::span<const GaussianTerm> psi) {
  const auto n_terms = static_cast<Eigen::Index>(psi.size());
  LinearSystem sys{Eigen::MatrixXcd::Zero(3 * n_terms, 3 * n_terms),
                   Eigen::VectorXcd::Zero(3 * n_terms)};

  for (Eigen::Index k = 0; k < n_terms; ++k) {
    for (Eigen::Index n = 0; n < n_terms; ++n) {
      const auto m = moments(pair_exponent(psi[k], psi[n]));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          sys.matrix(3 * k + i, 3 * n + j) = kProjectorSign[i] * m[kProjectorPower[i] + j];
    }
  }

  // r_k = -<projector_k | |psi|^2 psi>, summed over conj(g_l) g_m g_n; the
  // (m, n) sum is symmetric so only m <= n is visited.
  for (Eigen::Index k = 0; k < n_terms; ++k) {
    std::array<cplx, 3> acc{};
    for (Eigen::Index l = 0; l < n_terms; ++l) {
      const ExponentTriple conj_pair{std::conj(psi[k].alpha + psi[l].alpha),
                                     std::conj(psi[k].beta + psi[l].beta),
                                     std::conj(psi[k].gamma + psi[l].gamma)};
      for (Eigen::Index m = 0; m < n_terms; ++m) {
        for (Eigen::Index n = m; n < n_terms; ++n) {
          const ExponentTriple e{conj_pair.a + psi[m].alpha + psi[n].alpha,
                                 conj_pair.b + psi[m].beta + psi[n].beta,
                                 conj_pair.c + psi[m].gamma + psi[n].gamma};
          const auto mom = moments(e, 2);
          const double weight = (m == n) ? 1.0 : 2.0;
          for (int i = 0; i < 3; ++i) acc[i] += weight * mom[i];
        }
      }
    }
    for (int i = 0; i < 3; ++i) sys.rhs(3 * k + i) = -kProjectorSign[i] * acc[kProjectorPower[i]];
  }
  return sys;
}

PotentialCoefficients solve_potentials(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs) {
  const Eigen::Index size = matrix.rows();
  if (matrix.cols() != size || rhs.size() != size || size % 3 != 0) {
    throw UsageError("solve_potentials: expected a square 3N x 3N system");
  }

  Eigen::VectorXd scale(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double d = std::abs(matrix(i, i));
    scale[i] = (d > 0.0 && std::isfinite(d)) ? 1.0 / std::sqrt(d) : 1.0;
  }
  const Eigen::MatrixXcd scaled = scale.asDiagonal() * matrix * scale.asDiagonal();
  const Eigen::VectorXcd scaled_rhs = scale.asDiagonal() * rhs;

  PotentialCoefficients out;
  Eigen::VectorXcd y;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(scaled);
  const double rcond = lu.rcond();
  out.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();

  if (std::isfinite(out.condition_estimate) && out.condition_estimate <= kConditionLimit) {
    y = lu.solve(scaled_rhs);
  }
  if (y.size() == 0 || !y.allFinite()) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod;
    cod.setThreshold(1.0 / kConditionLimit);
    cod.compute(scaled);
    y = cod.solve(scaled_rhs);
    out.regularized = true;
  }
  const Eigen::VectorXcd v = scale.asDiagonal() * y;

  const double denom = matrix.norm() * v.norm() + rhs.norm();
  out.relative_residual = denom > 0.0 ? (matrix * v - rhs).norm() / denom : 0.0;

  out.terms.resize(static_cast<std::size_t>(size / 3));
  for (std::size_t n = 0; n < out.terms.size(); ++n) {
    const auto base = static_cast<Eigen::Index>(3 * n);
    out.terms[n] = {v(base), v(base + 1), v(base + 2)};
  }
  return out;
}

TimeDerivative time_derivative(std::span<const GaussianTerm> psi) {
  const LinearSystem sys = assemble_system(psi);
  const PotentialCoefficients pot = solve_potentials(sys.matrix, sys.rhs);
  constexpr cplx i{0.0, 1.0};

  TimeDerivative out;
  out.regularized = pot.regularized;
  out.rates.resize(psi.size());
  for (std::size_t n = 0; n < psi.size(); ++n) {
    const auto& g = psi[n];
    const auto& v = pot.terms[n];
    out.rates[n].alpha = -4.0 * i * g.alpha * g.alpha + i * v.v2;
    out.rates[n].beta = -4.0 * i * g.alpha * g.beta - i * v.v1;
    out.rates[n].gamma = -2.0 * i * g.alpha + i * g.beta * g.beta - i * v.v0;
  }
  return out;
}

VariationalTrajectory evolve(const VariationalState& state, double t_end,
                             const EvolveOptions& options) {
  namespace odeint = boost::numeric::odeint;
  if (!(t_end > state.time)) throw UsageError("evolve: t_end must exceed the start time");
  if (!(options.tol > 0.0)) throw UsageError("evolve: tolerance must be positive");

  std::vector<double> outputs = options.output_times;
  if (outputs.empty()) outputs = {state.time, t_end};
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i] < state.time || outputs[i] > t_end || (i > 0 && outputs[i] <= outputs[i - 1])) {
      throw UsageError("evolve: output times must be ascending and within [t0, t_end]");
    }
  }

  VariationalTrajectory traj;
  long regularized_since_sample = 0;
  GaussianSum scratch;
  auto rhs = [&](const Packed& x, Packed& dxdt, double /*t*/) {
    unpack(x, scratch);
    const TimeDerivative d = time_derivative(scratch);
    ++traj.rhs_evaluations;
    if (d.regularized) {
      ++traj.regularized_evaluations;
      ++regularized_since_sample;
    }
    dxdt.resize(x.size());
    for (std::size_t n = 0; n < d.rates.size(); ++n) {
      dxdt[6 * n + 0] = d.rates[n].alpha.real();
      dxdt[6 * n + 1] = d.rates[n].alpha.imag();
      dxdt[6 * n + 2] = d.rates[n].beta.real();
      dxdt[6 * n + 3] = d.rates[n].beta.imag();
      dxdt[6 * n + 4] = d.rates[n].gamma.real();
      dxdt[6 * n + 5] = d.rates[n].gamma.imag();
    }
  };

  auto record = [&](const Packed& x, double t) {
    VariationalSample s;
    s.state.time = t;
    unpack(x, s.state.psi);
    s.norm = norm_squared(s.state.psi);
    s.energy = energy(s.state.psi);
    s.regularized_count = static_cast<int>(regularized_since_sample);
    regularized_since_sample = 0;
    traj.samples.push_back(std::move(s));
  };

  Packed x;
  pack(state.psi, x);
  auto stepper = options.max_step > 0.0
                     ? odeint::make_dense_output(options.tol, options.tol, options.max_step,
                                                 odeint::runge_kutta_dopri5<Packed>())
                     : odeint::make_dense_output(options.tol, options.tol,
                                                 odeint::runge_kutta_dopri5<Packed>());
  const double dt0 = std::min(1e-3, t_end - state.time);
  stepper.initialize(x, state.time, dt0);
  traj.smallest_step = dt0;

  auto underflow = [&](double t, double dt) {
    return StepSizeUnderflow("variational step size " + format_real(dt) + " below minimum at t=" +
                             format_real(t) + " after " + std::to_string(traj.steps) +
                             " steps; regularized solves so far: " +
                             std::to_string(traj.regularized_evaluations) + " of " +
                             std::to_string(traj.rhs_evaluations));
  };

  Packed out;
  for (double t_out : outputs) {
    while (stepper.current_time() < t_out) {
      try {
        stepper.do_step(rhs);
      } catch (const odeint::step_adjustment_error&) {
        throw underflow(stepper.current_time(), stepper.current_time_step());
      }
      ++traj.steps;
      const double taken = stepper.current_time() - stepper.previous_time();
      traj.smallest_step = std::min(traj.smallest_step, taken);
      if (taken < options.min_step || stepper.current_time_step() < options.min_step) {
        throw underflow(stepper.current_time(), std::min(taken, stepper.current_time_step()));
      }
    }
    if (t_out == stepper.current_time()) {
      out = stepper.current_state();
    } else {
      out.resize(x.size());
      stepper.calc_state(t_out, out);
    }
    record(out, t_out);
  }
  return traj;
}

std::vector<double> default_seed_widths(int n_gaussians) {
  if (n_gaussians < 1) throw UsageError("n_gaussians must be >= 1");
  std::vector<double> widths(static_cast<std::size_t>(n_gaussians));
  for (int n = 0; n < n_gaussians; ++n) {
    widths[static_cast<std::size_t>(n)] =
        kSingleGaussianWidth * std::pow(2.0, n - 0.5 * (n_gaussians - 1));
  }
  return widths;
}

Eigen::VectorXd stationary_residual(const Eigen::VectorXd& unknowns) {
  const auto n_terms = (unknowns.size() - 1) / 2;
  GaussianSum psi(static_cast<std::size_t>(n_terms));
  for (Eigen::Index n = 0; n < n_terms; ++n) {
    psi[static_cast<std::size_t>(n)] = {unknowns[n], 0.0, unknowns[n_terms + n]};
  }
  const double mu = unknowns[2 * n_terms];
  const TimeDerivative d = time_derivative(psi);

  Eigen::VectorXd f(4 * n_terms + 1);
  for (Eigen::Index n = 0; n < n_terms; ++n) {
    const auto& r = d.rates[static_cast<std::size_t>(n)];
    f[4 * n + 0] = r.alpha.real();
    f[4 * n + 1] = r.alpha.imag();
    f[4 * n + 2] = r.gamma.real();
    f[4 * n + 3] = r.gamma.imag() + mu;
  }
  f[4 * n_terms] = norm_squared(psi) - 1.0;
  return f;
}

StationaryResult stationary_state(int n_gaussians, std::optional<std::vector<double>> seed_widths) {
  if (n_gaussians < 1) throw UsageError("n_gaussians must be >= 1");
  std::vector<double> widths = seed_widths ? *seed_widths : default_seed_widths(n_gaussians);
  if (static_cast<int>(widths.size()) != n_gaussians) {
    throw UsageError("stationary_state: expected " + std::to_string(n_gaussians) + " seed widths");
  }
  for (double w : widths) {
    if (!(w > 0.0)) throw DomainError("stationary_state: seed widths must be positive");
  }

  const WidthPoint start = minimize_energy(widths);
  const Eigen::Index n = n_gaussians;
  if ((start.weights.c.array() <= 0.0).any()) {
    throw ConvergenceError("stationary_state: energy minimum has non-positive weights",
                           start.gradient.norm());
  }
  Eigen::VectorXd x0(2 * n + 1);
  x0.head(n) = start.log_widths.array().exp().matrix();
  x0.segment(n, n) = start.weights.c.array().log().matrix();
  x0[2 * n] = start.weights.mu;

  const auto admissible = [n](const Eigen::VectorXd& x) { return (x.head(n).array() > 0.0).all(); };
  NewtonOptions options;
  options.stagnation_tolerance = kStationaryFloor;
  NewtonResult sol;
  try {
    sol = damped_newton(stationary_residual, x0, admissible, options);
  } catch (const DomainError& e) {
    throw ConvergenceError(std::string("stationary_state left the admissible region: ") + e.what(),
                           stationary_residual(x0).norm());
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sol.x[a] < sol.x[b]; });

  StationaryResult result;
  result.state.time = 0.0;
  for (Eigen::Index k : order) result.state.psi.push_back({sol.x[k], 0.0, sol.x[n + k]});
  result.mu = sol.x[2 * n];
  result.residual = sol.residual;
  result.iterations = sol.iterations;
  result.energy = energy(result.state.psi);
  if (!(result.mu < 0.0)) {
    throw ConvergenceError("stationary_state converged to an unbound state (mu >= 0)",
                           sol.residual);
  }
  return result;
}

HamiltonianPoint hamiltonian_picture(double q, double p) {
  if (!(q > 0.0)) throw DomainError("hamiltonian_picture requires q > 0");
  HamiltonianPoint pt;
  pt.q = q;
  pt.p = p;
  pt.T = p * p;
  pt.V = 1.0 / (4.0 * q * q) - 1.0 / (4.0 * std::sqrt(std::numbers::pi) * q);
  pt.H = pt.T + pt.V;
  return pt;
}

std::array<double, 2> single_gaussian_coordinates(const GaussianTerm& g) {
  const double re = g.alpha.real();
  if (!(re > 0.0)) throw DomainError("single_gaussian_coordinates requires Re(alpha) > 0");
  return {1.0 / (2.0 * std::sqrt(re)), -g.alpha.imag() / std::sqrt(re)};
}

Observables extract_observables(const VariationalState& state, const Grouping& grouping) {
  const std::size_t n_terms = state.psi.size();
  std::vector<int> seen(n_terms, 0);
  for (const auto& group : grouping) {
    if (group.empty()) throw UsageError("extract_observables: empty group");
    for (std::size_t idx : group) {
      if (idx >= n_terms) throw UsageError("extract_observables: term index out of range");
      ++seen[idx];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw UsageError("extract_observables: grouping must partition the terms");
  }

  Observables obs;
  for (const auto& group : grouping) {
    double w_sum = 0.0, x_sum = 0.0, p_sum = 0.0;
    for (std::size_t idx : group) {
      const auto& g = state.psi[idx];
      const double w = moments(pair_exponent(g, g), 0)[0].real();
      w_sum += w;
      x_sum += w * term_position(g);
      p_sum += w * term_momentum(g);
    }
    obs.groups.push_back({x_sum / w_sum, p_sum / w_sum});
  }
  obs.norm = norm_squared(state.psi);
  obs.energy = energy(state.psi);
  return obs;
}

}  // namespace solitonlab
