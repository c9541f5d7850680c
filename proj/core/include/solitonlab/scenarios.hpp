#pragma once

// Soliton scenarios shared by both engines: analytic reference profiles,
// initial-condition construction and cross-engine comparison.

#include <span>
#include <vector>

#include "solitonlab/gaussian.hpp"
#include "solitonlab/grid.hpp"
#include "solitonlab/variational.hpp"

namespace solitonlab {

struct SolitonSpec {
  double x0 = 0.0;
  double p = 0.0;
  double phase = 0.0;
  int gaussians = 1;
};

struct Domain {
  double x_min = -60.0;
  double x_max = 60.0;
  double dx = 0.05;
};

struct Scenario {
  std::vector<SolitonSpec> solitons;
  Domain domain;
  GridSettings grid;
  double var_tol = 1e-10;
  // Output times, ascending; the last entry is the end of the run.
  std::vector<double> schedule;
  // Largest tolerated |<psi_a|psi_b>| between initial solitons.
  double max_initial_overlap = 1e-6;
};

struct ComparisonMetrics {
  double time = 0.0;
  double l2_density_mismatch = 0.0;  // sqrt(integral (rho_var - rho_grid)^2)
  double sup_mismatch = 0.0;         // max |rho_var - rho_grid| on the lattice
  double norm_var = 0.0;
  double energy_var = 0.0;
  double norm_grid = 0.0;
  double energy_grid = 0.0;
};

/// b / cosh(a x) exp(-i mu t) with a^2 = -mu, b^2 = -2 mu.
cplx analytic_ground_state(double x, double t, double mu = -1.0 / 16.0);

/// sqrt(1/8) exp(i p (x - x0) + i phase) / cosh((x - x0) / 4).
cplx analytic_moving_soliton(double x, const SolitonSpec& spec);

/// Maps every term g(x) to g(x - x0) exp(i p (x - x0) + i phase).
GaussianSum boost_translate(std::span<const GaussianTerm> psi, double x0, double p, double phase);

/// Samples the sum of analytic_moving_soliton over `solitons` on the lattice.
GridState sample_solitons(std::span<const SolitonSpec> solitons, const Domain& domain);

struct InitialStates {
  VariationalState variational;
  // Term indices per soliton, fixed for the whole run.
  Grouping grouping;
  GridState grid;
};

/// Boosted stationary Gaussian sets (variational) and sampled analytic
/// solitons (lattice). Throws ConfigError naming the offending pair when two
/// solitons overlap by more than scenario.max_initial_overlap.
InitialStates build_initial_states(const Scenario& scenario);

/// Metrics at each schedule time; both trajectories must contain a sample at
/// every scheduled time (UsageError otherwise).
std::vector<ComparisonMetrics> compare(const VariationalTrajectory& var_traj,
                                       const GridTrajectory& grid_traj,
                                       std::span<const double> schedule);

/// |psi|^2 of a Gaussian sum at every site of `lattice`.
std::vector<double> density_on_lattice(std::span<const GaussianTerm> psi, const GridState& lattice);
std::vector<double> density_on_lattice(const GridState& state);

/// max_j |rho(x_j) - rho(-x_j)| for a lattice symmetric about x = 0.
double mirror_asymmetry(std::span<const double> density);

}  // namespace solitonlab
