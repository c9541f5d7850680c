// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Collision scenarios run through the same pipeline
// as the command-line tool and are judged from the files it writes.
//
// Usage: solitonlab_acceptance [artifact-dir]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "solitonlab/config.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/runner.hpp"
#include "solitonlab/scenarios.hpp"
#include "solitonlab/variational.hpp"

using namespace solitonlab;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

constexpr double kExactEnergy = -1.0 / 48.0;
constexpr double kAlpha1 = 1.0 / (16.0 * pi);

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail += (detail.empty() ? "" : "; ") + std::string(ok ? "" : "NOT ") + what;
  }
};

// ---------------------------------------------------------------- files

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Table t;
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream rs(line);
    for (std::string cell; std::getline(rs, cell, ',');) row.push_back(std::strtod(cell.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::map<std::string, std::string> read_summary(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::map<std::string, std::string> out;
  std::string section;
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with("[")) {
      section = line.substr(1, line.size() - 2) + ".";
    } else if (const auto eq = line.find(" = "); eq != std::string::npos) {
      out[section + line.substr(0, eq)] = line.substr(eq + 3);
    }
  }
  return out;
}

double summary_number(const std::map<std::string, std::string>& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end()) throw std::runtime_error("summary lacks " + key);
  return std::strtod(it->second.c_str(), nullptr);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Densities of one engine per snapshot time, in lattice order.
struct Frames {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<std::vector<double>> var;
  std::vector<std::vector<double>> grid;
};

Frames read_frames(const fs::path& path) {
  const Table t = read_csv(path);
  const auto ct = t.column("t"), cx = t.column("x");
  const auto cv = t.column("density_var"), cg = t.column("density_grid");
  Frames f;
  for (const auto& row : t.rows) {
    if (f.times.empty() || row[ct] != f.times.back()) {
      f.times.push_back(row[ct]);
      f.var.emplace_back();
      f.grid.emplace_back();
    }
    if (f.times.size() == 1) f.x.push_back(row[cx]);
    f.var.back().push_back(row[cv]);
    f.grid.back().push_back(row[cg]);
  }
  return f;
}

struct Peak {
  double x;
  double value;
};

// Local maxima above `fraction` of the global maximum.
std::vector<Peak> peaks(const std::vector<double>& x, const std::vector<double>& rho, double fraction) {
  const double top = *std::max_element(rho.begin(), rho.end());
  std::vector<Peak> out;
  for (std::size_t j = 1; j + 1 < rho.size(); ++j) {
    if (rho[j] > rho[j - 1] && rho[j] >= rho[j + 1] && rho[j] > fraction * top) out.push_back({x[j], rho[j]});
  }
  return out;
}

// Per-soliton (x, p) of one engine from an observables row, ordered by x.
std::vector<std::array<double, 2>> solitons_by_position(const Table& t, const std::vector<double>& row,
                                                        const std::string& engine, std::size_t count) {
  std::vector<std::array<double, 2>> s;
  for (std::size_t i = 1; i <= count; ++i) {
    s.push_back({row[t.column("x_" + engine + "_" + std::to_string(i))],
                 row[t.column("p_" + engine + "_" + std::to_string(i))]});
  }
  std::sort(s.begin(), s.end());
  return s;
}

RunConfig load_scenario(const std::string& name) {
  return parse_config(read_text(fs::path(SOLITONLAB_SOURCE_DIR) / "scenarios" / name));
}

struct CompareRun {
  RunConfig config;
  fs::path dir;
  double seconds = 0.0;
};

CompareRun run_compare(const std::string& scenario, const fs::path& root) {
  CompareRun r{load_scenario(scenario + ".cfg"), root / scenario, 0.0};
  const auto start = Clock::now();
  execute(Command::compare, r.config, r.dir);
  r.seconds = seconds_since(start);
  return r;
}

// Relative norm and energy drift of a densely sampled variational run.
std::array<double, 2> variational_drift(const Scenario& sc, double spacing) {
  const auto init = build_initial_states(sc);
  EvolveOptions opt;
  opt.tol = sc.var_tol;
  const double t_end = sc.schedule.back();
  for (double t = 0.0; t < t_end; t += spacing) opt.output_times.push_back(t);
  opt.output_times.push_back(t_end);
  const auto traj = evolve(init.variational, t_end, opt);
  const double n0 = traj.samples.front().norm, e0 = traj.samples.front().energy;
  std::array<double, 2> drift{0.0, 0.0};
  for (const auto& s : traj.samples) {
    drift[0] = std::max(drift[0], std::abs(s.norm - n0) / std::abs(n0));
    drift[1] = std::max(drift[1], std::abs(s.energy - e0) / std::abs(e0));
  }
  return drift;
}

// ---------------------------------------------------------------- criteria

std::vector<StationaryResult> g_ladder;  // stationary states N = 1..6

Outcome criterion_1() {
  Outcome o;
  const auto start = Clock::now();
  const auto st = stationary_state(1);
  const double secs = seconds_since(start);
  const double alpha_err = std::abs(st.state.psi[0].alpha.real() - kAlpha1);
  const double delta = st.energy - kExactEnergy;
  o.require(alpha_err <= 1e-10, fmt("|alpha - 1/(16 pi)| = %.2e <= 1e-10", alpha_err));
  o.require(std::abs(delta - 9.39e-4) <= 1e-6, fmt("delta_E = %.6e within 1e-6 of 9.39e-4", delta));
  o.require(secs < 1.0, fmt("%.3f s < 1 s", secs));
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const auto start = Clock::now();
  g_ladder.clear();
  for (int n = 1; n <= 6; ++n) g_ladder.push_back(stationary_state(n));
  const double secs = seconds_since(start);
  std::vector<double> delta;
  std::string listing;
  for (const auto& st : g_ladder) {
    delta.push_back(st.energy - kExactEnergy);
    listing += fmt("%s%.3e", listing.empty() ? "" : " ", delta.back());
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < delta.size(); ++i) decreasing = decreasing && delta[i] < delta[i - 1] && delta[i] > 0.0;
  const double decades = (std::log10(delta.front()) - std::log10(delta.back())) / 5.0;
  o.require(decreasing, "delta_E strictly decreasing [" + listing + "]");
  o.require(decades >= 1.0, fmt("mean gain %.2f decades per Gaussian >= 1", decades));
  o.require(delta.back() <= 1e-8, fmt("delta_E(6) = %.2e <= 1e-8", delta.back()));
  o.require(secs < 30.0, fmt("%.2f s < 30 s", secs));
  return o;
}

std::vector<double> sorted_widths(const StationaryResult& st) {
  std::vector<double> a;
  for (const auto& g : st.state.psi) a.push_back(g.alpha.real());
  std::sort(a.begin(), a.end());
  return a;
}

Outcome criterion_3() {
  Outcome o;
  if (g_ladder.size() != 6) throw std::runtime_error("stationary ladder unavailable");
  const auto a6 = sorted_widths(g_ladder[5]);
  o.require(a6.front() < kAlpha1 && kAlpha1 < a6.back(),
            fmt("min alpha %.4g < 1/(16 pi) < max alpha %.4g", a6.front(), a6.back()));
  bool distinct = true;
  for (std::size_t i = 1; i < a6.size(); ++i) distinct = distinct && a6[i] > 1.01 * a6[i - 1];
  o.require(distinct, "N=6 widths distinct (>1% apart)");
  // Each added Gaussian pushes the extreme widths outwards.
  bool spreading = true;
  for (std::size_t n = 1; n < g_ladder.size(); ++n) {
    const auto prev = sorted_widths(g_ladder[n - 1]);
    const auto cur = sorted_widths(g_ladder[n]);
    spreading = spreading && cur.front() < prev.front() && cur.back() > prev.back();
  }
  o.require(spreading, "smallest width shrinks and largest grows for N = 1..6");
  std::string listing;
  for (double a : a6) listing += fmt(" %.4g", a / kAlpha1);
  o.detail += "; N=6 alpha/(1/(16 pi)) =" + listing;
  return o;
}

Outcome criterion_4() {
  Outcome o;
  if (g_ladder.size() != 6) throw std::runtime_error("stationary ladder unavailable");
  const auto& psi = g_ladder[5].state.psi;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double x = 10.0; x <= 25.0 + 1e-9; x += 0.1, ++n) {
    const double y = std::log(std::norm(evaluate(psi, x)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  o.require(std::abs(slope + 0.5) <= 0.05, fmt("log-density slope on [10, 25] = %.4f, target -0.5 +- 10%%", slope));
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const auto start = Clock::now();
  const auto lattice = sample_solitons(std::vector<SolitonSpec>{{0.0, 0.0, 0.0, 1}}, Domain{});
  const double e = grid_energy(lattice);
  const double k = grid_kinetic(lattice);
  const double secs = seconds_since(start);
  o.require(std::abs(e - kExactEnergy) <= 1e-4, fmt("grid energy %.7f = -1/48 +- 1e-4", e));
  o.require(std::abs(k - 1.0 / 48.0) <= 1e-4, fmt("kinetic %.7f = 1/48 +- 1e-4 (rest momentum %.4f)", k, std::sqrt(k)));
  o.require(secs < 5.0, fmt("%.3f s < 5 s", secs));
  return o;
}

CompareRun g_high;  // high-energy collision, reused by criteria 9 and 11

Outcome criterion_6(const fs::path& root) {
  Outcome o;
  g_high = run_compare("high_energy_collision", root);
  const Table t = read_csv(g_high.dir / "observables.csv");
  const auto ct = t.column("t"), cs = t.column("sup_mismatch");
  for (double when : {0.0, 8.0, 20.0}) {
    const auto row = std::find_if(t.rows.begin(), t.rows.end(), [&](const auto& r) { return r[ct] == when; });
    if (row == t.rows.end()) throw std::runtime_error(fmt("no observables at t=%g", when));
    o.require((*row)[cs] <= 2e-2, fmt("sup mismatch at t=%g: %.3e <= 2e-2", when, (*row)[cs]));
  }
  const auto& last = t.rows.back();
  for (const std::string engine : {"var", "grid"}) {
    const auto s = solitons_by_position(t, last, engine, 2);
    const bool ok = std::abs(s[0][1] + 1.0) <= 0.01 && std::abs(s[1][1] - 1.0) <= 0.01;
    o.require(ok, fmt("%s momenta at t=%g: %.5f, %.5f within 1%% of -1, +1", engine.c_str(), last[ct], s[0][1], s[1][1]));
  }
  o.require(g_high.seconds < 600.0, fmt("%.2f s < 10 min", g_high.seconds));
  return o;
}

CompareRun g_three;

Outcome criterion_7(const fs::path& root) {
  Outcome o;
  g_three = run_compare("three_soliton_collision", root);
  const Table t = read_csv(g_three.dir / "observables.csv");
  const auto& last = t.rows.back();
  const double t_end = last[t.column("t")];
  const double targets[3] = {-1.5, 0.0, 1.5};
  for (const std::string engine : {"var", "grid"}) {
    const auto s = solitons_by_position(t, last, engine, 3);
    bool ok = true;
    for (int i = 0; i < 3; ++i) ok = ok && std::abs(s[i][1] - targets[i]) <= 0.01 * 1.5;
    const bool separated = s[1][0] - s[0][0] > 20.0 && s[2][0] - s[1][0] > 20.0;
    o.require(separated, fmt("%s solitons separated at t=%g (x = %.1f, %.1f, %.1f)", engine.c_str(), t_end, s[0][0], s[1][0], s[2][0]));
    o.require(ok, fmt("%s momenta %.4f, %.4f, %.4f within 0.015 of -1.5, 0, 1.5", engine.c_str(), s[0][1], s[1][1], s[2][1]));
  }
  const Frames f = read_frames(g_three.dir / "snapshots.csv");
  double asym_var = 0.0, asym_grid = 0.0;
  for (std::size_t i = 0; i < f.times.size(); ++i) {
    asym_var = std::max(asym_var, mirror_asymmetry(f.var[i]));
    asym_grid = std::max(asym_grid, mirror_asymmetry(f.grid[i]));
  }
  o.require(asym_var <= 1e-6 && asym_grid <= 1e-6,
            fmt("mirror asymmetry var %.1e, grid %.1e <= 1e-6 at all %zu times", asym_var, asym_grid, f.times.size()));
  o.require(g_three.seconds < 900.0, fmt("%.2f s < 15 min", g_three.seconds));
  return o;
}

CompareRun g_low;

Outcome criterion_8(const fs::path& root) {
  Outcome o;
  g_low = run_compare("low_energy_collision", root);
  const auto& sol = g_low.config.scenario.solitons;
  const double initial_separation = std::abs(sol[1].x0 - sol[0].x0);
  const Frames f = read_frames(g_low.dir / "snapshots.csv");

  // Separation time: first frame after the lattice packet has merged into a
  // single peak at which its two peaks are again as far apart as initially.
  bool merged = false;
  std::size_t sep = f.times.size();
  for (std::size_t i = 1; i < f.times.size(); ++i) {
    const auto p = peaks(f.x, f.grid[i], 0.1);
    if (p.size() == 1) merged = true;
    if (merged && p.size() >= 2 && p.back().x - p.front().x >= initial_separation) {
      sep = i;
      break;
    }
  }
  o.require(merged, "lattice solitons merge during the collision");
  if (sep == f.times.size()) {
    o.require(false, "lattice solitons separate again within the run");
    return o;
  }
  const double t_sep = f.times[sep];
  const auto pg = peaks(f.x, f.grid[sep], 0.1);
  o.require(pg.size() >= 2 && pg.back().x - pg.front().x > 5.0,
            fmt("t=%g: lattice maxima at %.2f and %.2f (> 5 apart)", t_sep, pg.front().x, pg.back().x));

  const auto& rho = f.var[sep];
  const std::size_t imax = static_cast<std::size_t>(std::max_element(rho.begin(), rho.end()) - rho.begin());
  const double xmax = f.x[imax];
  bool lone = true;
  for (const auto& p : peaks(f.x, rho, 0.0)) {
    if (std::abs(p.x - xmax) > 5.0 && p.value >= 0.5 * rho[imax]) lone = false;
  }
  o.require(std::abs(xmax) <= 2.0, fmt("variational global maximum at x = %.2f (|x| <= 2)", xmax));
  o.require(lone, "no separated variational peak reaching half the maximum");

  const auto s = read_summary(g_low.dir / "summary.txt");
  const double dv = summary_number(s, "variational.max_relative_norm_drift");
  const double dg = summary_number(s, "grid.max_relative_norm_drift");
  o.require(dv <= 1e-6, fmt("variational norm drift %.1e <= 1e-6", dv));
  o.require(dg <= g_low.config.scenario.grid.norm_drift_bound,
            fmt("lattice norm drift %.1e <= %.0e", dg, g_low.config.scenario.grid.norm_drift_bound));
  o.require(g_low.seconds < 900.0, fmt("%.2f s < 15 min", g_low.seconds));
  return o;
}

Outcome criterion_9() {
  Outcome o;
  const std::pair<const CompareRun*, const char*> runs[] = {
      {&g_high, "high-energy"}, {&g_three, "three-soliton"}, {&g_low, "low-energy"}};
  for (const auto& [run, label] : runs) {
    if (run->dir.empty()) throw std::runtime_error(std::string(label) + " run unavailable");
    const auto s = read_summary(run->dir / "summary.txt");
    const double n_sched = summary_number(s, "variational.max_relative_norm_drift");
    const double e_sched = summary_number(s, "variational.max_relative_energy_drift");
    const auto dense = variational_drift(run->config.scenario, 0.5);
    const double n = std::max(n_sched, dense[0]);
    const double e = std::max(e_sched, dense[1]);
    o.require(n <= 1e-6 && e <= 1e-6, fmt("%s: norm %.1e, energy %.1e <= 1e-6", label, n, e));
  }
  return o;
}

Outcome criterion_10() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  double worst = 0.0;
  int checked = 0;
  const auto check = [&](const std::function<cplx(double)>& f, oracle::Window w, cplx value) {
    const cplx ref = oracle::integrate(f, w.lo, w.hi);
    const double scale = oracle::integrate_abs(f, w.lo, w.hi);
    worst = std::max(worst, std::abs(value - ref) / scale);
    ++checked;
  };
  for (int set = 0; set < 1000; ++set) {
    GaussianTerm g[4];
    for (auto& t : g) t = oracle::random_term(rng, 0.025, 2.5);
    // Pair brackets <g0| x^d |g1>.
    const ExponentTriple pair = pair_exponent(g[0], g[1]);
    const auto wp = oracle::window(pair.a, pair.b);
    const auto m = moments(pair);
    for (int d = 0; d <= kMaxMoment; ++d) {
      check([&](double x) { return std::conj(oracle::term_value(g[0], x)) * std::pow(x, d) * oracle::term_value(g[1], x); },
            wp, m[d]);
    }
    // Kinetic bracket <g0| -d^2/dx^2 |g1> against <g0'|g1'>.
    const auto q = second_derivative_factor(g[1]);
    check([&](double x) { return std::conj(oracle::term_derivative(g[0], x)) * oracle::term_derivative(g[1], x); }, wp,
          -(q.c2 * m[2] + q.c1 * m[1] + q.c0 * m[0]));
    // Quartic brackets <g0 g1| x^d |g2 g3>.
    const std::vector<GaussianTerm> conj{g[0], g[1]}, plain{g[2], g[3]};
    const ExponentTriple quartic = product_exponent(conj, plain);
    const auto mq = moments(quartic, 2);
    const auto wq = oracle::window(quartic.a, quartic.b);
    for (int d = 0; d <= 2; ++d) {
      check([&](double x) {
        return std::conj(oracle::term_value(g[0], x) * oracle::term_value(g[1], x)) * std::pow(x, d) *
               oracle::term_value(g[2], x) * oracle::term_value(g[3], x);
      }, wq, mq[d]);
    }
  }
  o.require(worst <= 1e-8, fmt("%d brackets over 1000 random sets, worst relative error %.1e <= 1e-8", checked, worst));

  // Single Gaussian with real width against Hamilton's equations.
  double worst_qp = 0.0;
  for (double scale : {1.3, 0.8}) {
    const double q0 = scale * 2.0 * std::sqrt(pi);
    std::vector<double> times;
    for (int i = 1; i <= 100; ++i) times.push_back(0.5 * i);
    EvolveOptions opt;
    opt.output_times = times;
    const auto traj = evolve({0.0, {oracle::gaussian_from_coordinates(q0, 0.0)}}, 50.0, opt);
    const auto ham = oracle::hamilton_trajectory(q0, 0.0, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto qp = single_gaussian_coordinates(traj.samples[i].state.psi[0]);
      worst_qp = std::max({worst_qp, std::abs(qp[0] - ham[i][0]), std::abs(qp[1] - ham[i][1])});
    }
  }
  o.require(worst_qp <= 1e-6, fmt("single-Gaussian (q, p) vs Hamilton integration over [0, 50]: %.1e <= 1e-6", worst_qp));
  return o;
}

Outcome criterion_11() {
  Outcome o;
  if (g_high.dir.empty()) throw std::runtime_error("high-energy run unavailable");
  const auto s = read_summary(g_high.dir / "summary.txt");
  const double var = summary_number(s, "timing.var_seconds");
  const double grid = summary_number(s, "timing.grid_seconds");
  const double ratio = summary_number(s, "timing.grid_to_var_ratio");
  o.require(std::isfinite(ratio) && ratio > 0.0,
            fmt("reported: variational %.3f s, lattice %.3f s, lattice/variational = %.1f", var, grid, ratio));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_artifacts");
  fs::create_directories(root);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"stationary single Gaussian", criterion_1},
      {"stationary convergence N = 1..6", criterion_2},
      {"width spread", criterion_3},
      {"tail decay", criterion_4},
      {"analytic lattice anchors", criterion_5},
      {"high-energy collision", [&] { return criterion_6(root); }},
      {"three-soliton collision", [&] { return criterion_7(root); }},
      {"low-energy collision", [&] { return criterion_8(root); }},
      {"variational conservation", criterion_9},
      {"quadrature and Hamilton oracles", criterion_10},
      {"wall-clock report", criterion_11},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s [%2zu] %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(start), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
