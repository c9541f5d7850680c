#include "solitonlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "solitonlab/errors.hpp"

namespace solitonlab {
namespace {

constexpr cplx kI{0.0, 1.0};

// Right-hand side i [psi'' + g |psi|^2 psi] into `out`.
void gpe_rhs(std::span<const cplx> psi, double dx, double interaction, std::span<cplx> out) {
  const std::size_t n = psi.size();
  const double inv_dx2 = 1.0 / (dx * dx);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx left = j > 0 ? psi[j - 1] : cplx{};
    const cplx right = j + 1 < n ? psi[j + 1] : cplx{};
    const cplx lap = (left + right - 2.0 * psi[j]) * inv_dx2;
    out[j] = kI * (lap + interaction * std::norm(psi[j]) * psi[j]);
  }
}

class Stepper {
 public:
  Stepper(std::size_t n, double dx, double interaction)
      : dx_(dx), g_(interaction), k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  void euler(std::vector<cplx>& psi, double dt) {
    gpe_rhs(psi, dx_, g_, k1_);
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] += dt * k1_[j];
  }

  void rk4(std::vector<cplx>& psi, double dt) {
    const std::size_t n = psi.size();
    gpe_rhs(psi, dx_, g_, k1_);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = psi[j] + 0.5 * dt * k1_[j];
    gpe_rhs(tmp_, dx_, g_, k2_);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = psi[j] + 0.5 * dt * k2_[j];
    gpe_rhs(tmp_, dx_, g_, k3_);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = psi[j] + dt * k3_[j];
    gpe_rhs(tmp_, dx_, g_, k4_);
    const double w = dt / 6.0;
    for (std::size_t j = 0; j < n; ++j) {
      psi[j] += w * (k1_[j] + 2.0 * k2_[j] + 2.0 * k3_[j] + k4_[j]);
    }
  }

  void step(GridScheme scheme, std::vector<cplx>& psi, double dt) {
    scheme == GridScheme::euler ? euler(psi, dt) : rk4(psi, dt);
  }

 private:
  double dx_;
  double g_;
  std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

double trapezoid_weight(std::size_t j, std::size_t n, double dx) {
  return (j == 0 || j + 1 == n) ? 0.5 * dx : dx;
}

}  // namespace

GridState make_grid(double x_min, double x_max, double dx) {
  if (!(dx > 0.0) || !(x_max > x_min)) throw UsageError("make_grid: need dx > 0 and x_max > x_min");
  const auto n = static_cast<std::size_t>(std::llround((x_max - x_min) / dx)) + 1;
  if (n < 3) throw UsageError("make_grid: lattice needs at least 3 points");
  GridState s;
  s.x_min = x_min;
  s.dx = dx;
  s.amplitudes.assign(n, cplx{});
  return s;
}

double stability_bound(double dx, GridScheme scheme) {
  return scheme == GridScheme::rk4 ? 0.5 * dx * dx : dx * dx / 8.0;
}

double euler_growth_exponent(double dx, double dt, double duration, double peak_density) {
  const double lambda_max = 4.0 / (dx * dx) + peak_density;
  return 0.5 * lambda_max * lambda_max * dt * duration;
}

cplx discrete_laplacian(const GridState& state, std::size_t j) {
  const auto& a = state.amplitudes;
  if (j >= a.size()) throw UsageError("discrete_laplacian: site index out of range");
  const cplx left = j > 0 ? a[j - 1] : cplx{};
  const cplx right = j + 1 < a.size() ? a[j + 1] : cplx{};
  return (left + right - 2.0 * a[j]) / (state.dx * state.dx);
}

GridState euler_step(const GridState& state, double dt, double interaction) {
  GridState next = state;
  Stepper(state.n_points(), state.dx, interaction).euler(next.amplitudes, dt);
  next.time += dt;
  return next;
}

GridState rk4_step(const GridState& state, double dt, double interaction) {
  GridState next = state;
  Stepper(state.n_points(), state.dx, interaction).rk4(next.amplitudes, dt);
  next.time += dt;
  return next;
}

double grid_norm(const GridState& state) {
  const std::size_t n = state.n_points();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += trapezoid_weight(j, n, state.dx) * std::norm(state.amplitudes[j]);
  return sum;
}

double grid_kinetic(const GridState& state) {
  const auto& a = state.amplitudes;
  const std::size_t n = a.size();
  // Link j joins sites j-1 and j; links 0 and n touch the zero exterior.
  auto link = [&](std::size_t j) {
    const cplx left = j > 0 ? a[j - 1] : cplx{};
    const cplx right = j < n ? a[j] : cplx{};
    return std::norm((right - left) / state.dx);
  };
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sum += trapezoid_weight(j, n, state.dx) * 0.5 * (link(j) + link(j + 1));
  }
  return sum;
}

double grid_energy(const GridState& state) {
  const std::size_t n = state.n_points();
  double quartic = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = std::norm(state.amplitudes[j]);
    quartic += trapezoid_weight(j, n, state.dx) * rho * rho;
  }
  return grid_kinetic(state) - 0.5 * quartic;
}

double boundary_amplitude(const GridState& state) {
  if (state.amplitudes.empty()) return 0.0;
  return std::max(std::abs(state.amplitudes.front()), std::abs(state.amplitudes.back()));
}

GridTrajectory evolve_grid(const GridState& state, double t_end, const GridSettings& settings,
                           std::span<const double> output_times) {
  if (!(t_end > state.time)) throw UsageError("evolve_grid: t_end must exceed the start time");
  if (!(settings.dt > 0.0)) throw ConfigError("grid dt must be positive");
  if (settings.norm_monitor_interval < 1) throw ConfigError("norm_monitor_interval must be >= 1");
  if (state.n_points() < 3) throw UsageError("evolve_grid: lattice needs at least 3 points");

  const double duration = t_end - state.time;
  if (settings.dt > stability_bound(state.dx, settings.scheme)) {
    throw ConfigError("grid dt " + format_real(settings.dt) + " exceeds the stability bound " +
                      format_real(stability_bound(state.dx, settings.scheme)));
  }
  if (settings.scheme == GridScheme::euler) {
    double peak = 0.0;
    for (const auto& v : state.amplitudes) peak = std::max(peak, std::norm(v));
    const double growth = euler_growth_exponent(state.dx, settings.dt, duration, peak);
    if (growth > kEulerGrowthLimit) {
      throw ConfigError("euler run unstable: lattice-mode growth exponent " + format_real(growth) +
                        " exceeds " + format_real(kEulerGrowthLimit) +
                        "; reduce dt, coarsen dx or use rk4");
    }
  }

  std::vector<double> outputs(output_times.begin(), output_times.end());
  if (outputs.empty()) outputs = {state.time, t_end};
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i] < state.time || outputs[i] > t_end || (i > 0 && outputs[i] <= outputs[i - 1])) {
      throw UsageError("evolve_grid: output times must be ascending and within [t0, t_end]");
    }
  }

  GridTrajectory traj;
  GridState cur = state;
  Stepper stepper(cur.n_points(), cur.dx, settings.interaction);
  const double norm0 = grid_norm(cur);

  auto monitor = [&]() {
    MonitorEntry e{traj.steps, cur.time, grid_norm(cur), grid_energy(cur), boundary_amplitude(cur)};
    traj.monitor.push_back(e);
    const double drift = norm0 > 0.0 ? std::abs(e.norm - norm0) / norm0 : std::abs(e.norm);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (!std::isfinite(e.norm) || drift > settings.norm_drift_bound) {
      throw NormDriftError("grid norm drifted by " + format_real(drift) + " (bound " +
                           format_real(settings.norm_drift_bound) + ") at t=" +
                           format_real(cur.time));
    }
    if (e.boundary > settings.boundary_bound) {
      throw BoundaryLeakError("boundary amplitude " + format_real(e.boundary) +
                              " exceeds " + format_real(settings.boundary_bound) +
                              " at t=" + format_real(cur.time) + "; enlarge the domain");
    }
  };

  monitor();
  for (double t_out : outputs) {
    const double span = t_out - cur.time;
    if (span > 0.0) {
      const auto n_steps = static_cast<long>(std::ceil(span / settings.dt - 1e-9));
      const double h = span / static_cast<double>(n_steps);
      const double t_start = cur.time;
      for (long k = 1; k <= n_steps; ++k) {
        stepper.step(settings.scheme, cur.amplitudes, h);
        ++traj.steps;
        cur.time = k == n_steps ? t_out : t_start + static_cast<double>(k) * h;
        if (traj.steps % settings.norm_monitor_interval == 0) monitor();
      }
    }
    if (traj.monitor.back().step != traj.steps) monitor();
    traj.samples.push_back(cur);
  }
  return traj;
}

std::vector<GridSoliton> segment_solitons(const GridState& state, std::size_t count) {
  if (count == 0) throw UsageError("segment_solitons: count must be positive");
  const auto& a = state.amplitudes;
  const std::size_t n = a.size();
  const double total = grid_norm(state);
  std::vector<GridSoliton> out(count);
  std::vector<double> x_sum(count, 0.0), p_sum(count, 0.0);

  double cumulative = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = trapezoid_weight(j, n, state.dx);
    const double rho = std::norm(a[j]) * w;
    // Assign by the cumulative norm at the site midpoint.
    const double mid = cumulative + 0.5 * rho;
    cumulative += rho;
    auto seg = static_cast<std::size_t>(total > 0.0 ? mid / total * static_cast<double>(count) : 0.0);
    seg = std::min(seg, count - 1);

    const cplx left = j > 0 ? a[j - 1] : cplx{};
    const cplx right = j + 1 < n ? a[j + 1] : cplx{};
    const cplx deriv = (right - left) / (2.0 * state.dx);
    out[seg].norm += rho;
    x_sum[seg] += rho * state.x(j);
    p_sum[seg] += w * (std::conj(a[j]) * deriv).imag();
  }
  for (std::size_t s = 0; s < count; ++s) {
    if (out[s].norm > 0.0) {
      out[s].position = x_sum[s] / out[s].norm;
      out[s].momentum = p_sum[s] / out[s].norm;
    }
  }
  return out;
}

}  // namespace solitonlab
