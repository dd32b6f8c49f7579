#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "aconet/analysis.hpp"
#include "aconet/meanfield.hpp"

namespace aconet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { colony, meanfield, both };
enum class NetworkMode { coevolve, frozen };

// Flat key=value run configuration; list-valued keys repeat.
struct RunConfig {
  int n_spins = 0;
  double coupling = 0.0;
  double field = 0.0;
  int in_degree = 0;
  std::vector<double> omega;
  std::vector<double> alpha;
  std::int64_t ants_per_trial = 0;  // T
  int trials = 0;                   // S
  std::uint64_t master_seed = 0;
  RunMode mode = RunMode::colony;
  NetworkMode network_mode = NetworkMode::coevolve;
  std::string out_dir = "out";
  int hist_bins = 50;
  std::int64_t trace_interval = -1;  // -1 off, 0 auto (T/1000), > 0 every k ants
  std::string network_file;          // frozen-mode replay source (optional)

  void validate() const;
  ColonyParams cell_params(double omega_value, double alpha_value) const;
};

RunConfig load_config(const std::string& path);

struct SweepOptions {
  int threads = 0;           // 0 picks hardware concurrency
  bool resume = false;       // skip cells with a completed cell file
  std::string out_override;  // replaces RunConfig::out_dir when non-empty
  bool quiet = false;
};

struct CellOutcome {
  std::size_t omega_index = 0;
  std::size_t alpha_index = 0;
  double omega = 0.0;
  double alpha = 0.0;
  std::vector<TrialResult> trials;
  SweepCell stats;
  bool failed = false;
  bool loaded = false;  // restored from disk instead of recomputed
  std::string error;
};

struct SweepExecution {
  int exit_code = 0;  // 0 success, 2 partial cell failures
  std::filesystem::path out_dir;
  std::vector<CellOutcome> cells;  // omega-major, alpha-minor order
};

// Runs trials for every (omega, alpha) cell with per-trial seeds derived from
// (master_seed, omega index, alpha index, trial index), then writes
// sweep.csv, hist.csv, per-cell files under cells/ and, when tracing is on,
// trace.csv. Outputs are byte-identical for identical configs regardless of
// the thread count.
SweepExecution run_sweep(const RunConfig& config, const SweepOptions& options = {});

// Writes theory.csv (alpha, m_star, alpha_s, alpha_c, unstable) and
// meanfield.csv with integrator trajectories per cell.
int run_meanfield(const RunConfig& config, const SweepOptions& options = {});

// Grows one network for the given omega (which must appear in the config's
// omega list) and writes its dump under the output directory.
int dump_network_file(const RunConfig& config, double omega_value,
                      const SweepOptions& options = {});

struct TheoryRow {
  double alpha = 0.0;
  TheoryPoint point;
};

std::vector<TheoryRow> theory_table(double coupling, double field, std::span<const double> alphas);
void write_theory_csv(std::ostream& os, std::span<const TheoryRow> rows);

// Stream tags keep auxiliary seed derivations clear of the per-trial index
// space (trial indices are < 2^31).
inline constexpr std::uint64_t kNetworkStreamTag = 0x4e4554ull << 32;
inline constexpr std::uint64_t kMeanFieldStreamTag = 0x4d46ull << 32;

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t omega_index,
                                std::size_t alpha_index, std::int64_t trial_index) {
  return derive_seed(master, omega_index, alpha_index, static_cast<std::uint64_t>(trial_index));
}

}  // namespace aconet
