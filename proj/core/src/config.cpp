#include "solitonlab/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "solitonlab/errors.hpp"

namespace solitonlab {
namespace {

constexpr std::array<std::pair<Command, std::string_view>, 5> kCommands{{
    {Command::ground_state, "ground-state"},
    {Command::evolve_var, "evolve-var"},
    {Command::evolve_grid, "evolve-grid"},
    {Command::compare, "compare"},
    {Command::hamiltonian_scan, "hamiltonian-scan"},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text, int line) {
  if (text == "pi") return std::numbers::pi;
  if (text == "-pi") return -std::numbers::pi;
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(std::string(key) + ": expected a real number, got '" + std::string(text) + "'",
                      line);
  }
  return value;
}

int parse_int(std::string_view key, std::string_view text, int line) {
  int value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'",
                      line);
  }
  return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text, int line) {
  std::vector<double> values;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (item.empty()) throw ConfigError(std::string(key) + ": empty list entry", line);
    values.push_back(parse_real(key, item, line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return values;
}

void set_top_level(RunConfig& cfg, std::string_view key, std::string_view value, int line) {
  Scenario& sc = cfg.scenario;
  const auto real = [&] { return parse_real(key, value, line); };
  const auto integer = [&] { return parse_int(key, value, line); };

  if (key == "command") {
    try {
      cfg.command = parse_command(value);
    } catch (const UsageError& e) {
      throw ConfigError(e.what(), line);
    }
  } else if (key == "n_gaussians") {
    cfg.n_gaussians = integer();
  } else if (key == "seed_widths") {
    cfg.seed_widths = parse_list(key, value, line);
  } else if (key == "schedule") {
    sc.schedule = parse_list(key, value, line);
  } else if (key == "var_tol") {
    sc.var_tol = real();
  } else if (key == "x_min") {
    sc.domain.x_min = real();
  } else if (key == "x_max") {
    sc.domain.x_max = real();
  } else if (key == "dx") {
    sc.domain.dx = real();
  } else if (key == "dt") {
    sc.grid.dt = real();
  } else if (key == "scheme") {
    if (value == "euler") {
      sc.grid.scheme = GridScheme::euler;
    } else if (value == "rk4") {
      sc.grid.scheme = GridScheme::rk4;
    } else {
      throw ConfigError("scheme: expected euler or rk4, got '" + std::string(value) + "'", line);
    }
  } else if (key == "norm_monitor_interval") {
    sc.grid.norm_monitor_interval = integer();
  } else if (key == "norm_drift_bound") {
    sc.grid.norm_drift_bound = real();
  } else if (key == "boundary_bound") {
    sc.grid.boundary_bound = real();
  } else if (key == "max_initial_overlap") {
    sc.max_initial_overlap = real();
  } else if (key == "q_min") {
    cfg.scan.q_min = real();
  } else if (key == "q_max") {
    cfg.scan.q_max = real();
  } else if (key == "q_points") {
    cfg.scan.points = integer();
  } else if (key == "snapshot_stride") {
    cfg.snapshot_stride = integer();
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'", line);
  }
}

void set_soliton(SolitonSpec& spec, std::string_view key, std::string_view value, int line) {
  if (key == "x0") {
    spec.x0 = parse_real(key, value, line);
  } else if (key == "p") {
    spec.p = parse_real(key, value, line);
  } else if (key == "phase") {
    spec.phase = parse_real(key, value, line);
  } else if (key == "gaussians") {
    spec.gaussians = parse_int(key, value, line);
  } else {
    throw ConfigError("unknown soliton key '" + std::string(key) + "'", line);
  }
}

std::pair<std::string_view, std::string_view> split_assignment(std::string_view text, int line) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected 'key = value', got '" + std::string(text) + "'", line);
  }
  const auto key = trim(text.substr(0, eq));
  const auto value = trim(text.substr(eq + 1));
  if (key.empty()) throw ConfigError("missing key before '='", line);
  if (value.empty()) throw ConfigError(std::string(key) + ": missing value", line);
  return {key, value};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::string_view command_name(Command command) {
  for (const auto& [c, name] : kCommands)
    if (c == command) return name;
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommands)
    if (n == name) return c;
  throw UsageError("unknown command '" + std::string(name) +
                   "' (expected ground-state, evolve-var, evolve-grid, compare or hamiltonian-scan)");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::set<std::string, std::less<>> soliton_seen;
  bool in_soliton = false;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line != "[soliton]") {
        throw ConfigError("unknown section '" + std::string(line) + "'", line_no);
      }
      cfg.scenario.solitons.emplace_back();
      soliton_seen.clear();
      in_soliton = true;
      continue;
    }

    const auto [key, value] = split_assignment(line, line_no);
    auto& keys = in_soliton ? soliton_seen : seen;
    if (!keys.insert(std::string(key)).second) {
      throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
    }
    if (in_soliton) {
      set_soliton(cfg.scenario.solitons.back(), key, value, line_no);
    } else {
      set_top_level(cfg, key, value, line_no);
    }
  }
  validate(cfg);
  return cfg;
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto [key, value] = split_assignment(trim(assignment), 0);
  set_top_level(config, key, value, 0);
  validate(config);
}

void validate(const RunConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  const Domain& d = sc.domain;
  require(cfg.n_gaussians >= 1, "n_gaussians: must be >= 1");
  if (cfg.seed_widths) {
    require(static_cast<int>(cfg.seed_widths->size()) == cfg.n_gaussians,
            "seed_widths: expected n_gaussians entries");
    require(std::all_of(cfg.seed_widths->begin(), cfg.seed_widths->end(),
                        [](double w) { return w > 0.0; }),
            "seed_widths: entries must be positive");
  }
  require(d.dx > 0.0, "dx: must be positive");
  require(d.x_max > d.x_min, "x_max: must exceed x_min");
  require((d.x_max - d.x_min) / d.dx >= 2.0, "dx: domain must hold at least 3 lattice sites");
  require(sc.grid.dt > 0.0, "dt: must be positive");
  require(sc.grid.norm_monitor_interval >= 1, "norm_monitor_interval: must be >= 1");
  require(sc.grid.norm_drift_bound > 0.0, "norm_drift_bound: must be positive");
  require(sc.grid.boundary_bound > 0.0, "boundary_bound: must be positive");
  require(sc.var_tol > 0.0 && sc.var_tol <= 1e-2, "var_tol: must lie in (0, 1e-2]");
  require(sc.max_initial_overlap > 0.0 && sc.max_initial_overlap < 1.0,
          "max_initial_overlap: must lie in (0, 1)");
  require(cfg.snapshot_stride >= 1, "snapshot_stride: must be >= 1");
  require(cfg.scan.q_min > 0.0, "q_min: must be positive");
  require(cfg.scan.q_max > cfg.scan.q_min, "q_max: must exceed q_min");
  require(cfg.scan.points >= 2, "q_points: must be >= 2");
  for (std::size_t i = 0; i < sc.solitons.size(); ++i) {
    require(sc.solitons[i].gaussians >= 1,
            "gaussians: soliton " + std::to_string(i + 1) + " needs at least one Gaussian");
  }
  for (std::size_t i = 0; i < sc.schedule.size(); ++i) {
    require(sc.schedule[i] >= 0.0, "schedule: times must be non-negative");
    if (i > 0) require(sc.schedule[i] > sc.schedule[i - 1], "schedule: times must increase");
  }

  if (!cfg.command) return;
  switch (*cfg.command) {
    case Command::evolve_var:
    case Command::evolve_grid:
    case Command::compare:
      require(!sc.solitons.empty(), "[soliton]: at least one soliton is required");
      require(!sc.schedule.empty() && sc.schedule.back() > 0.0,
              "schedule: needs at least one positive time");
      break;
    case Command::ground_state:
    case Command::hamiltonian_scan:
      break;
  }
}

}  // namespace solitonlab
