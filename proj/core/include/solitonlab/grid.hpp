#pragma once

// Lattice engine: explicit time stepping of
//   i dpsi/dt = -d^2 psi/dx^2 - |psi|^2 psi
// with the three-point Laplacian and zero (Dirichlet) values outside the
// lattice.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace solitonlab {

using cplx = std::complex<double>;

struct GridState {
  double x_min = 0.0;
  double dx = 0.0;
  std::vector<cplx> amplitudes;
  double time = 0.0;

  std::size_t n_points() const noexcept { return amplitudes.size(); }
  double x(std::size_t j) const noexcept { return x_min + static_cast<double>(j) * dx; }
};

/// Zero-filled lattice spanning [x_min, x_max] (x_max rounded to a whole
/// number of spacings).
GridState make_grid(double x_min, double x_max, double dx);

enum class GridScheme {
  euler,  // first order, U = 1 - i H dt
  rk4,    // classical fourth-order Runge-Kutta
};

struct GridSettings {
  double dt = 6.25e-4;
  GridScheme scheme = GridScheme::rk4;
  int norm_monitor_interval = 100;
  // Relative norm change that aborts a run.
  double norm_drift_bound = 1e-3;
  // Largest modulus tolerated on the two boundary sites.
  double boundary_bound = 1e-6;
  // Coefficient of the cubic term; 1 for the attractive equation. Setting it
  // to 0 gives the free Schroedinger equation (used by tests).
  double interaction = 1.0;
};

/// Largest stable step for rk4 (lambda_max dt <= 2) and the dx^2/8 bound for
/// euler. Forward Euler has no unconditional bound on an imaginary spectrum;
/// see euler_growth_exponent().
double stability_bound(double dx, GridScheme scheme);

/// Forward Euler amplifies the highest lattice mode by
/// exp(lambda_max^2 dt duration / 2) over `duration`; this returns the
/// exponent with lambda_max = 4 / dx^2 + peak_density.
double euler_growth_exponent(double dx, double dt, double duration, double peak_density = 0.0);

/// Largest growth exponent accepted for an euler run (round-off of 1e-16
/// stays below 1e-6).
inline constexpr double kEulerGrowthLimit = 23.0;

cplx discrete_laplacian(const GridState& state, std::size_t j);

GridState euler_step(const GridState& state, double dt, double interaction = 1.0);
GridState rk4_step(const GridState& state, double dt, double interaction = 1.0);

/// Trapezoidal dx * sum |psi_j|^2.
double grid_norm(const GridState& state);

/// Trapezoidal dx * sum of the forward-difference |psi'|^2 averaged to sites.
double grid_kinetic(const GridState& state);

/// grid_kinetic - 1/2 dx * sum |psi_j|^4 (trapezoidal).
double grid_energy(const GridState& state);

/// max(|psi_0|, |psi_{n-1}|).
double boundary_amplitude(const GridState& state);

struct MonitorEntry {
  long step = 0;
  double time = 0.0;
  double norm = 0.0;
  double energy = 0.0;
  double boundary = 0.0;
};

struct GridTrajectory {
  std::vector<GridState> samples;
  std::vector<MonitorEntry> monitor;
  long steps = 0;
  double max_norm_drift = 0.0;
};

/// Steps `state` to t_end with uniform steps no longer than settings.dt,
/// landing exactly on every output time. Throws NormDriftError or
/// BoundaryLeakError when the monitor detects a violation, ConfigError when
/// an euler run would be unstable.
GridTrajectory evolve_grid(const GridState& state, double t_end, const GridSettings& settings,
                           std::span<const double> output_times = {});

struct GridSoliton {
  double position = 0.0;
  double momentum = 0.0;
  double norm = 0.0;
};

/// Splits the lattice into `count` consecutive segments of equal norm and
/// returns the centroid, mean momentum and norm of each, left to right.
/// Separated unit-norm solitons fall into one segment each.
std::vector<GridSoliton> segment_solitons(const GridState& state, std::size_t count);

}  // namespace solitonlab
