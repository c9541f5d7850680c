#include "solitonlab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "solitonlab/errors.hpp"

namespace solitonlab {
namespace {

constexpr double kTimeMatch = 1e-9;

template <typename Samples, typename TimeOf>
auto find_sample(const Samples& samples, double t, TimeOf time_of, const char* engine) {
  const auto it = std::find_if(samples.begin(), samples.end(),
                               [&](const auto& s) { return std::abs(time_of(s) - t) <= kTimeMatch; });
  if (it == samples.end()) {
    throw UsageError(std::string("compare: ") + engine + " trajectory has no sample at t=" +
                     format_real(t));
  }
  return it;
}

}  // namespace

cplx analytic_ground_state(double x, double t, double mu) {
  if (!(mu < 0.0)) throw DomainError("analytic_ground_state requires mu < 0");
  const double a = std::sqrt(-mu);
  const double b = std::sqrt(-2.0 * mu);
  return b / std::cosh(a * x) * std::exp(cplx{0.0, -mu * t});
}

cplx analytic_moving_soliton(double x, const SolitonSpec& spec) {
  const double u = x - spec.x0;
  return std::sqrt(1.0 / 8.0) * std::exp(cplx{0.0, spec.p * u + spec.phase}) / std::cosh(u / 4.0);
}

GaussianSum boost_translate(std::span<const GaussianTerm> psi, double x0, double p, double phase) {
  constexpr cplx i{0.0, 1.0};
  GaussianSum out;
  out.reserve(psi.size());
  for (const auto& g : psi) {
    out.push_back({g.alpha, g.beta + 2.0 * g.alpha * x0 + i * p,
                   g.gamma - g.alpha * x0 * x0 - g.beta * x0 - i * p * x0 + i * phase});
  }
  return out;
}

GridState sample_solitons(std::span<const SolitonSpec> solitons, const Domain& domain) {
  GridState grid = make_grid(domain.x_min, domain.x_max, domain.dx);
  for (std::size_t j = 0; j < grid.n_points(); ++j) {
    cplx v{};
    for (const auto& s : solitons) v += analytic_moving_soliton(grid.x(j), s);
    grid.amplitudes[j] = v;
  }
  return grid;
}

InitialStates build_initial_states(const Scenario& scenario) {
  if (scenario.solitons.empty()) throw ConfigError("scenario has no solitons");
  for (const auto& s : scenario.solitons) {
    if (s.gaussians < 1) throw ConfigError("soliton gaussians must be >= 1");
  }

  const GridState lattice = make_grid(scenario.domain.x_min, scenario.domain.x_max, scenario.domain.dx);
  const std::size_t n_sol = scenario.solitons.size();
  std::vector<std::vector<cplx>> profiles(n_sol, std::vector<cplx>(lattice.n_points()));
  for (std::size_t s = 0; s < n_sol; ++s)
    for (std::size_t j = 0; j < lattice.n_points(); ++j)
      profiles[s][j] = analytic_moving_soliton(lattice.x(j), scenario.solitons[s]);

  for (std::size_t a = 0; a < n_sol; ++a) {
    for (std::size_t b = a + 1; b < n_sol; ++b) {
      cplx overlap{};
      for (std::size_t j = 0; j < lattice.n_points(); ++j)
        overlap += std::conj(profiles[a][j]) * profiles[b][j];
      const double value = std::abs(overlap) * lattice.dx;
      if (value > scenario.max_initial_overlap) {
        throw ConfigError("solitons " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                          " overlap by " + format_real(value) + " (limit " +
                          format_real(scenario.max_initial_overlap) + ")");
      }
    }
  }

  InitialStates init;
  init.grid = lattice;
  for (std::size_t j = 0; j < lattice.n_points(); ++j) {
    cplx v{};
    for (std::size_t s = 0; s < n_sol; ++s) v += profiles[s][j];
    init.grid.amplitudes[j] = v;
  }

  std::map<int, GaussianSum> stationary;
  for (const auto& spec : scenario.solitons) {
    auto it = stationary.find(spec.gaussians);
    if (it == stationary.end()) {
      it = stationary.emplace(spec.gaussians, stationary_state(spec.gaussians).state.psi).first;
    }
    const GaussianSum moved = boost_translate(it->second, spec.x0, spec.p, spec.phase);
    std::vector<std::size_t> group;
    for (const auto& g : moved) {
      group.push_back(init.variational.psi.size());
      init.variational.psi.push_back(g);
    }
    init.grouping.push_back(std::move(group));
  }
  return init;
}

std::vector<double> density_on_lattice(std::span<const GaussianTerm> psi, const GridState& lattice) {
  std::vector<double> rho(lattice.n_points());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(evaluate(psi, lattice.x(j)));
  return rho;
}

std::vector<double> density_on_lattice(const GridState& state) {
  std::vector<double> rho(state.n_points());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(state.amplitudes[j]);
  return rho;
}

double mirror_asymmetry(std::span<const double> density) {
  double worst = 0.0;
  const std::size_t n = density.size();
  for (std::size_t j = 0; j < n / 2; ++j) worst = std::max(worst, std::abs(density[j] - density[n - 1 - j]));
  return worst;
}

std::vector<ComparisonMetrics> compare(const VariationalTrajectory& var_traj,
                                       const GridTrajectory& grid_traj,
                                       std::span<const double> schedule) {
  std::vector<ComparisonMetrics> out;
  out.reserve(schedule.size());
  for (double t : schedule) {
    const auto vs = find_sample(var_traj.samples, t, [](const auto& s) { return s.state.time; }, "variational");
    const auto gs = find_sample(grid_traj.samples, t, [](const auto& s) { return s.time; }, "grid");

    const std::vector<double> rho_var = density_on_lattice(vs->state.psi, *gs);
    const std::vector<double> rho_grid = density_on_lattice(*gs);
    ComparisonMetrics m;
    m.time = t;
    double l2 = 0.0;
    const std::size_t n = rho_grid.size();
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = rho_var[j] - rho_grid[j];
      const double w = (j == 0 || j + 1 == n) ? 0.5 * gs->dx : gs->dx;
      l2 += w * diff * diff;
      m.sup_mismatch = std::max(m.sup_mismatch, std::abs(diff));
    }
    m.l2_density_mismatch = std::sqrt(l2);
    m.norm_var = vs->norm;
    m.energy_var = vs->energy;
    m.norm_grid = grid_norm(*gs);
    m.energy_grid = grid_energy(*gs);
    out.push_back(m);
  }
  return out;
}

}  // namespace solitonlab
