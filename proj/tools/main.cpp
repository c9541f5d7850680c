// solitonlab <command> --config <path> --out <dir> [--override key=value ...]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solitonlab/config.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw solitonlab::ConfigError("cannot read configuration file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bright-soliton dynamics: Gaussian variational engine and lattice reference"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  app.add_option("command", command,
                 "ground-state | evolve-var | evolve-grid | compare | hamiltonian-scan")
      ->required();
  app.add_option("--config", config_path, "Scenario configuration file")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--override", overrides, "Top-level key=value applied after the file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : solitonlab::UsageError("").exit_code();
  }

  solitonlab::Command cmd{};
  solitonlab::RunConfig config;
  std::string stage = config_path;
  try {
    cmd = solitonlab::parse_command(command);
    config = solitonlab::parse_config(read_file(config_path));
    for (const auto& assignment : overrides) {
      stage = "--override " + assignment;
      solitonlab::apply_override(config, assignment);
    }
  } catch (const solitonlab::Error& e) {
    std::cerr << "solitonlab: " << stage << ": " << e.what() << '\n';
    return e.exit_code();
  }
  return solitonlab::run(cmd, config, out_dir, std::cerr);
}
