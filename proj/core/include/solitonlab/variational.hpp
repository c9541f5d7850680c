#pragma once

// Time-dependent variational dynamics of a sum of complex Gaussians.
//
// The McLachlan principle applied to psi = sum_n g_n yields, per Gaussian,
//   alpha' = -4i alpha^2 + i V2,  beta' = -4i alpha beta - i V1,
//   gamma' = -2i alpha + i beta^2 - i V0,
// where (V0, V1, V2) per term solve the linear system
//   sum_n <dpsi/dz | (V0 + V1 x + V2 x^2) g_n> = -<dpsi/dz | |psi|^2 psi>.
// Projectors per term k: d/dgamma -> g_k, d/dbeta -> x g_k,
// d/dalpha -> -x^2 g_k.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "solitonlab/gaussian.hpp"

namespace solitonlab {

struct VariationalState {
  double time = 0.0;
  GaussianSum psi;
};

struct LinearSystem {
  Eigen::MatrixXcd matrix;  // 3N x 3N, rows (k, projector), cols (n, monomial)
  Eigen::VectorXcd rhs;
};

struct TermPotential {
  cplx v0;
  cplx v1;
  cplx v2;
};

struct PotentialCoefficients {
  std::vector<TermPotential> terms;
  // Set when the system was too ill-conditioned for a direct solve and the
  // minimum-norm least-squares fallback was used instead.
  bool regularized = false;
  // Condition estimate of the equilibrated matrix (1-norm).
  double condition_estimate = 0.0;
  // ||K v - r|| / (||K|| ||v|| + ||r||) on the original system.
  double relative_residual = 0.0;
};

inline constexpr double kConditionLimit = 1e12;

LinearSystem assemble_system(std::span<const GaussianTerm> psi);
inline LinearSystem assemble_system(const VariationalState& state) {
  return assemble_system(state.psi);
}

/// Dense LU with partial pivoting on the diagonally equilibrated system;
/// falls back to a rank-revealing minimum-norm solve (flagged) when the
/// condition estimate exceeds kConditionLimit or a pivot vanishes.
PotentialCoefficients solve_potentials(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs);

struct TermRates {
  cplx alpha;
  cplx beta;
  cplx gamma;
};

struct TimeDerivative {
  std::vector<TermRates> rates;
  bool regularized = false;
};

TimeDerivative time_derivative(std::span<const GaussianTerm> psi);
inline TimeDerivative time_derivative(const VariationalState& state) {
  return time_derivative(state.psi);
}

struct EvolveOptions {
  // Absolute and relative tolerance of the embedded 5(4) pair.
  double tol = 1e-10;
  // Times at which states are reported, ascending, within [t0, t_end]. When
  // empty, the start and end states are reported.
  std::vector<double> output_times;
  // Abort once the adaptive step falls below this.
  double min_step = 1e-12;
  // Upper bound on the adaptive step (0 = unbounded).
  double max_step = 0.0;
};

struct VariationalSample {
  VariationalState state;
  double norm = 0.0;
  double energy = 0.0;
  // Right-hand-side evaluations since the previous sample that needed the
  // regularized solve.
  int regularized_count = 0;
};

struct VariationalTrajectory {
  std::vector<VariationalSample> samples;
  long rhs_evaluations = 0;
  long regularized_evaluations = 0;
  long steps = 0;
  double smallest_step = 0.0;
};

/// Integrates the equations of motion from state.time to t_end with an
/// adaptive Dormand-Prince 5(4) stepper and dense output. Throws
/// StepSizeUnderflow when the step collapses below options.min_step.
VariationalTrajectory evolve(const VariationalState& state, double t_end,
                             const EvolveOptions& options);

struct StationaryResult {
  VariationalState state;
  double mu = 0.0;
  double residual = 0.0;
  double energy = 0.0;
  int iterations = 0;
};

/// Default seed widths: 1/(16 pi) * 2^(n - (N-1)/2), n = 0..N-1.
std::vector<double> default_seed_widths(int n_gaussians);

/// Real stationary ground state with beta = 0: solves alpha' = 0,
/// gamma' = -i mu, <psi|psi> = 1 for real widths, real gamma and mu by
/// damped Newton.
StationaryResult stationary_state(int n_gaussians,
                                  std::optional<std::vector<double>> seed_widths = std::nullopt);

/// Residual vector of the stationary system at real unknowns
/// (alpha_1..N, gamma_1..N, mu). Rows per term: Re alpha', Im alpha',
/// Re gamma', Im gamma' + mu; last row norm - 1.
Eigen::VectorXd stationary_residual(const Eigen::VectorXd& unknowns);

/// Point of the single-Gaussian Hamiltonian picture
/// H(q, p) = p^2 + 1/(4 q^2) - 1/(4 sqrt(pi) q).
struct HamiltonianPoint {
  double q = 0.0;
  double p = 0.0;
  double H = 0.0;
  double T = 0.0;
  double V = 0.0;
};

HamiltonianPoint hamiltonian_picture(double q, double p);

/// (q, p) of a single normalized Gaussian: q = 1/(2 sqrt(Re alpha)),
/// p = -Im(alpha) / sqrt(Re alpha).
std::array<double, 2> single_gaussian_coordinates(const GaussianTerm& g);

struct GroupObservables {
  double position = 0.0;
  double momentum = 0.0;
};

struct Observables {
  std::vector<GroupObservables> groups;
  double norm = 0.0;
  double energy = 0.0;
};

using Grouping = std::vector<std::vector<std::size_t>>;

/// Per-group position and momentum as the self-norm weighted average of the
/// member terms, plus the global norm and energy. The grouping must
/// partition the term indices.
Observables extract_observables(const VariationalState& state, const Grouping& grouping);

}  // namespace solitonlab
