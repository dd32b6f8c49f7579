#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aconet/harness.hpp"

namespace {

// Output directory precedence: --out flag, then ACONET_OUT, then the config.
std::string out_override(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("ACONET_OUT")) return env;
  return "";
}

std::vector<double> parse_alpha_grid(const std::string& grid_text) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  const auto first = grid_text.find(':');
  const auto second = grid_text.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw aconet::ConfigError("alpha-grid must be lo:hi:step");
  try {
    lo = std::stod(grid_text.substr(0, first));
    hi = std::stod(grid_text.substr(first + 1, second - first - 1));
    step = std::stod(grid_text.substr(second + 1));
  } catch (const std::exception&) {
    throw aconet::ConfigError("alpha-grid must be lo:hi:step with numeric fields");
  }
  if (!(step > 0.0) || !(lo <= hi) || !(lo >= 0.0) || !(hi < 1.0))
    throw aconet::ConfigError("alpha-grid requires 0 <= lo <= hi < 1 and step > 0");
  std::vector<double> grid;
  for (double a = lo; a <= hi + step * 1e-9; a += step) grid.push_back(std::min(a, hi));
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ant colony search over a growing pheromone reference network"};
  app.require_subcommand(1);
  // --h is a model parameter on the theory subcommand; keep help on --help.
  app.set_help_flag("--help", "Print this help message and exit");

  std::string config_path, out_flag;
  int threads = 0;
  bool resume = false;

  auto* simulate = app.add_subcommand("simulate", "Run the (omega, alpha) trial sweep");
  simulate->add_option("--config", config_path, "Run configuration file")->required();
  simulate->add_option("--threads", threads, "Worker threads (default: all cores)");
  simulate->add_flag("--resume", resume, "Skip cells with completed cell files");
  simulate->add_option("--out", out_flag, "Output directory override");

  auto* meanfield = app.add_subcommand("meanfield", "Integrate the magnetization SDE per cell");
  meanfield->add_option("--config", config_path, "Run configuration file")->required();

  std::string theory_grid = "0.5:0.99:0.01";
  double theory_j = 0.0, theory_h = 0.0;
  auto* theory = app.add_subcommand("theory", "Print the fixed-point table as CSV");
  theory->set_help_flag("--help", "Print this help message and exit");
  theory->add_option("--J", theory_j, "Exchange coupling")->required();
  theory->add_option("--h", theory_h, "External field")->required();
  theory->add_option("--alpha-grid", theory_grid, "Grid as lo:hi:step");

  double dump_omega = 0.0;
  auto* dump = app.add_subcommand("dump-network", "Grow and dump one network realization");
  dump->add_option("--config", config_path, "Run configuration file")->required();
  dump->add_option("--omega", dump_omega, "Asymmetry value from the config's omega list")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const aconet::RunConfig config = aconet::load_config(config_path);
      aconet::SweepOptions options;
      options.threads = threads;
      options.resume = resume;
      options.out_override = out_override(out_flag);
      int status = 0;
      if (config.mode != aconet::RunMode::meanfield)
        status = aconet::run_sweep(config, options).exit_code;
      if (config.mode != aconet::RunMode::colony)
        status = std::max(status, aconet::run_meanfield(config, options));
      return status;
    }
    if (meanfield->parsed()) {
      const aconet::RunConfig config = aconet::load_config(config_path);
      aconet::SweepOptions options;
      options.out_override = out_override("");
      return aconet::run_meanfield(config, options);
    }
    if (theory->parsed()) {
      const std::vector<double> grid = parse_alpha_grid(theory_grid);
      if (!(theory_j > 0.0)) throw aconet::ConfigError("--J must be positive");
      const auto rows = aconet::theory_table(theory_j, theory_h, grid);
      aconet::write_theory_csv(std::cout, rows);
      return 0;
    }
    if (dump->parsed()) {
      const aconet::RunConfig config = aconet::load_config(config_path);
      aconet::SweepOptions options;
      options.out_override = out_override("");
      return aconet::dump_network_file(config, dump_omega, options);
    }
  } catch (const aconet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
