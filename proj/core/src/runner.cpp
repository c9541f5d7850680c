#include "solitonlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <ostream>

#include "solitonlab/errors.hpp"
#include "solitonlab/output.hpp"

namespace solitonlab {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> snapshot_sites(const GridState& lattice, int stride) {
  std::vector<std::size_t> sites;
  for (std::size_t j = 0; j < lattice.n_points(); j += static_cast<std::size_t>(stride)) {
    sites.push_back(j);
  }
  return sites;
}

double relative_change(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

struct VarRun {
  VariationalTrajectory traj;
  double seconds = 0.0;
};

struct GridRun {
  GridTrajectory traj;
  double seconds = 0.0;
};

VarRun run_variational(const InitialStates& init, const Scenario& sc) {
  const auto start = Clock::now();
  EvolveOptions options;
  options.tol = sc.var_tol;
  options.output_times = sc.schedule;
  VarRun r{evolve(init.variational, sc.schedule.back(), options), 0.0};
  r.seconds = seconds_since(start);
  return r;
}

GridRun run_grid(const InitialStates& init, const Scenario& sc) {
  const auto start = Clock::now();
  GridRun r{evolve_grid(init.grid, sc.schedule.back(), sc.grid, sc.schedule), 0.0};
  r.seconds = seconds_since(start);
  return r;
}

void describe_scenario(Summary& s, const Command command, const RunConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  s.set("command", std::string(command_name(command)));
  s.set("solitons", static_cast<long>(sc.solitons.size()));
  long terms = 0;
  for (const auto& spec : sc.solitons) terms += spec.gaussians;
  s.set("gaussians_total", terms);
  s.set("t_end", sc.schedule.back());
  s.set("x_min", sc.domain.x_min);
  s.set("x_max", sc.domain.x_max);
  s.set("dx", sc.domain.dx);
}

void summarize_var(Summary& s, const VarRun& run) {
  const auto& samples = run.traj.samples;
  double norm_drift = 0.0, energy_drift = 0.0;
  for (const auto& smp : samples) {
    norm_drift = std::max(norm_drift, relative_change(smp.norm, samples.front().norm));
    energy_drift = std::max(energy_drift, relative_change(smp.energy, samples.front().energy));
  }
  s.set("norm_initial", samples.front().norm);
  s.set("norm_final", samples.back().norm);
  s.set("energy_initial", samples.front().energy);
  s.set("energy_final", samples.back().energy);
  s.set("max_relative_norm_drift", norm_drift);
  s.set("max_relative_energy_drift", energy_drift);
  s.set("steps", run.traj.steps);
  s.set("rhs_evaluations", run.traj.rhs_evaluations);
  s.set("regularized_evaluations", run.traj.regularized_evaluations);
  s.set("smallest_step", run.traj.smallest_step);
}

void summarize_grid(Summary& s, const GridRun& run, const GridSettings& settings) {
  const auto& samples = run.traj.samples;
  double boundary = 0.0;
  for (const auto& e : run.traj.monitor) boundary = std::max(boundary, e.boundary);
  s.set("norm_initial", grid_norm(samples.front()));
  s.set("norm_final", grid_norm(samples.back()));
  s.set("energy_initial", grid_energy(samples.front()));
  s.set("energy_final", grid_energy(samples.back()));
  s.set("max_relative_norm_drift", run.traj.max_norm_drift);
  s.set("max_boundary_amplitude", boundary);
  s.set("scheme", settings.scheme == GridScheme::rk4 ? "rk4" : "euler");
  s.set("dt", settings.dt);
  s.set("steps", run.traj.steps);
}

void ground_state(const RunConfig& cfg, const std::filesystem::path& out) {
  const auto start = Clock::now();
  const StationaryResult sr = stationary_state(cfg.n_gaussians, cfg.seed_widths);
  const double seconds = seconds_since(start);
  const GridState lattice =
      make_grid(cfg.scenario.domain.x_min, cfg.scenario.domain.x_max, cfg.scenario.domain.dx);

  CsvWriter snaps(out / "snapshots.csv", snapshot_header());
  for (std::size_t j : snapshot_sites(lattice, cfg.snapshot_stride)) {
    const cplx v = evaluate(sr.state.psi, lattice.x(j));
    snaps.row(std::vector<double>{0.0, lattice.x(j), v.real(), v.imag(), std::norm(v)});
  }
  snaps.close();

  Grouping all(1);
  for (std::size_t k = 0; k < sr.state.psi.size(); ++k) all[0].push_back(k);
  const Observables obs = extract_observables(sr.state, all);
  CsvWriter observables(out / "observables.csv", observable_header(1));
  observables.row(std::vector<double>{0.0, obs.norm, obs.energy, obs.groups[0].position,
                                      obs.groups[0].momentum, 0.0});
  observables.close();

  Summary s;
  s.set("command", std::string(command_name(Command::ground_state)));
  s.set("n_gaussians", cfg.n_gaussians);
  s.set("mu", sr.mu);
  s.set("energy", sr.energy);
  s.set("delta_E", sr.energy + 1.0 / 48.0);
  s.set("residual", sr.residual);
  s.set("iterations", sr.iterations);
  s.section("terms");
  for (std::size_t k = 0; k < sr.state.psi.size(); ++k) {
    const std::string idx = std::to_string(k + 1);
    s.set("alpha_" + idx, sr.state.psi[k].alpha.real());
    s.set("gamma_" + idx, sr.state.psi[k].gamma.real());
  }
  s.section("timing");
  s.set("wall_seconds", seconds);
  s.write(out / "summary.txt");
}

void evolve_variational_command(const RunConfig& cfg, const std::filesystem::path& out) {
  const Scenario& sc = cfg.scenario;
  const InitialStates init = build_initial_states(sc);
  const VarRun run = run_variational(init, sc);
  const auto sites = snapshot_sites(init.grid, cfg.snapshot_stride);

  CsvWriter snaps(out / "snapshots.csv", snapshot_header());
  CsvWriter observables(out / "observables.csv", observable_header(sc.solitons.size()));
  for (const auto& smp : run.traj.samples) {
    for (std::size_t j : sites) {
      const cplx v = evaluate(smp.state.psi, init.grid.x(j));
      snaps.row(std::vector<double>{smp.state.time, init.grid.x(j), v.real(), v.imag(), std::norm(v)});
    }
    const Observables obs = extract_observables(smp.state, init.grouping);
    std::vector<double> row{smp.state.time, smp.norm, smp.energy};
    for (const auto& g : obs.groups) row.insert(row.end(), {g.position, g.momentum});
    row.push_back(smp.regularized_count);
    observables.row(row);
  }
  snaps.close();
  observables.close();

  Summary s;
  describe_scenario(s, Command::evolve_var, cfg);
  s.section("variational");
  summarize_var(s, run);
  s.section("timing");
  s.set("var_seconds", run.seconds);
  s.write(out / "summary.txt");
}

void evolve_grid_command(const RunConfig& cfg, const std::filesystem::path& out) {
  const Scenario& sc = cfg.scenario;
  const InitialStates init = build_initial_states(sc);
  const GridRun run = run_grid(init, sc);
  const auto sites = snapshot_sites(init.grid, cfg.snapshot_stride);

  CsvWriter snaps(out / "snapshots.csv", snapshot_header());
  CsvWriter observables(out / "observables.csv", observable_header(sc.solitons.size()));
  for (const auto& state : run.traj.samples) {
    for (std::size_t j : sites) {
      const cplx v = state.amplitudes[j];
      snaps.row(std::vector<double>{state.time, state.x(j), v.real(), v.imag(), std::norm(v)});
    }
    std::vector<double> row{state.time, grid_norm(state), grid_energy(state)};
    for (const auto& g : segment_solitons(state, sc.solitons.size())) {
      row.insert(row.end(), {g.position, g.momentum});
    }
    row.push_back(0.0);
    observables.row(row);
  }
  snaps.close();
  observables.close();

  Summary s;
  describe_scenario(s, Command::evolve_grid, cfg);
  s.section("grid");
  summarize_grid(s, run, sc.grid);
  s.section("timing");
  s.set("grid_seconds", run.seconds);
  s.write(out / "summary.txt");
}

void compare_command(const RunConfig& cfg, const std::filesystem::path& out) {
  const Scenario& sc = cfg.scenario;
  const InitialStates init = build_initial_states(sc);

  VarRun var;
  GridRun grid;
  if (compare_threads() >= 2) {
    auto var_future = std::async(std::launch::async, [&] { return run_variational(init, sc); });
    grid = run_grid(init, sc);
    var = var_future.get();
  } else {
    var = run_variational(init, sc);
    grid = run_grid(init, sc);
  }
  const std::vector<ComparisonMetrics> metrics = compare(var.traj, grid.traj, sc.schedule);
  const auto sites = snapshot_sites(init.grid, cfg.snapshot_stride);
  const std::size_t n_sol = sc.solitons.size();

  CsvWriter snaps(out / "snapshots.csv", compare_snapshot_header());
  CsvWriter observables(out / "observables.csv", compare_observable_header(n_sol));
  double max_l2 = 0.0, max_sup = 0.0;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const auto& m = metrics[i];
    const auto& vs = var.traj.samples[i];
    const auto& gs = grid.traj.samples[i];
    for (std::size_t j : sites) {
      const cplx a = evaluate(vs.state.psi, gs.x(j));
      const cplx b = gs.amplitudes[j];
      snaps.row(std::vector<double>{m.time, gs.x(j), a.real(), a.imag(), std::norm(a), b.real(),
                                    b.imag(), std::norm(b)});
    }
    std::vector<double> row{m.time, m.norm_var, m.energy_var, m.norm_grid, m.energy_grid};
    for (const auto& g : extract_observables(vs.state, init.grouping).groups) {
      row.insert(row.end(), {g.position, g.momentum});
    }
    for (const auto& g : segment_solitons(gs, n_sol)) row.insert(row.end(), {g.position, g.momentum});
    row.insert(row.end(), {static_cast<double>(vs.regularized_count), m.l2_density_mismatch,
                           m.sup_mismatch});
    observables.row(row);
    max_l2 = std::max(max_l2, m.l2_density_mismatch);
    max_sup = std::max(max_sup, m.sup_mismatch);
  }
  snaps.close();
  observables.close();

  Summary s;
  describe_scenario(s, Command::compare, cfg);
  s.set("max_l2_mismatch", max_l2);
  s.set("max_sup_mismatch", max_sup);
  s.section("variational");
  summarize_var(s, var);
  s.section("grid");
  summarize_grid(s, grid, sc.grid);
  s.section("timing");
  s.set("var_seconds", var.seconds);
  s.set("grid_seconds", grid.seconds);
  s.set("grid_to_var_ratio", grid.seconds / std::max(var.seconds, 1e-9));
  s.write(out / "summary.txt");
}

void hamiltonian_scan(const RunConfig& cfg, const std::filesystem::path& out) {
  const HamiltonianScan& scan = cfg.scan;
  CsvWriter observables(out / "observables.csv", scan_header());
  const double h = (scan.q_max - scan.q_min) / (scan.points - 1);
  for (int i = 0; i < scan.points; ++i) {
    const double q = scan.q_min + i * h;
    observables.row(std::vector<double>{q, hamiltonian_picture(q, 0.0).V});
  }
  observables.close();

  const double q_min = 2.0 * std::sqrt(std::numbers::pi);
  Summary s;
  s.set("command", std::string(command_name(Command::hamiltonian_scan)));
  s.set("q_min", scan.q_min);
  s.set("q_max", scan.q_max);
  s.set("points", scan.points);
  s.set("q_at_minimum", q_min);
  s.set("V_at_minimum", hamiltonian_picture(q_min, 0.0).V);
  s.write(out / "summary.txt");
}

}  // namespace

int compare_threads() {
  const char* env = std::getenv("SOLITONLAB_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

void execute(Command command, const RunConfig& config, const std::filesystem::path& out_dir) {
  if (config.command && *config.command != command) {
    throw UsageError("command '" + std::string(command_name(command)) +
                     "' does not match the configuration's command '" +
                     std::string(command_name(*config.command)) + "'");
  }
  RunConfig cfg = config;
  cfg.command = command;
  validate(cfg);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  switch (command) {
    case Command::ground_state:
      ground_state(cfg, out_dir);
      break;
    case Command::evolve_var:
      evolve_variational_command(cfg, out_dir);
      break;
    case Command::evolve_grid:
      evolve_grid_command(cfg, out_dir);
      break;
    case Command::compare:
      compare_command(cfg, out_dir);
      break;
    case Command::hamiltonian_scan:
      hamiltonian_scan(cfg, out_dir);
      break;
  }
}

int run(Command command, const RunConfig& config, const std::filesystem::path& out_dir,
        std::ostream& err) {
  try {
    execute(command, config, out_dir);
    return 0;
  } catch (const Error& e) {
    err << "solitonlab: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "solitonlab: internal error: " << e.what() << '\n';
    return InternalError("").exit_code();
  }
}

}  // namespace solitonlab
