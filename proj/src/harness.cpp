#include "aconet/harness.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace aconet {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail_line(const std::string& path, int line, const std::string& message) {
  throw ConfigError(path + ":" + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& path, int line, const std::string& key,
                    const std::string& value) {
  double out = 0.0;
  const auto result = std::from_chars(value.data(), value.data() + value.size(), out);
  if (result.ec != std::errc{} || result.ptr != value.data() + value.size())
    fail_line(path, line, "invalid number for '" + key + "': " + value);
  return out;
}

std::int64_t parse_int(const std::string& path, int line, const std::string& key,
                       const std::string& value) {
  std::int64_t out = 0;
  const auto result = std::from_chars(value.data(), value.data() + value.size(), out);
  if (result.ec != std::errc{} || result.ptr != value.data() + value.size())
    fail_line(path, line, "invalid integer for '" + key + "': " + value);
  return out;
}

std::uint64_t parse_uint(const std::string& path, int line, const std::string& key,
                         const std::string& value) {
  std::uint64_t out = 0;
  const auto result = std::from_chars(value.data(), value.data() + value.size(), out);
  if (result.ec != std::errc{} || result.ptr != value.data() + value.size())
    fail_line(path, line, "invalid unsigned integer for '" + key + "': " + value);
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << contents;
  }
  fs::rename(tmp, path);
}

fs::path resolve_out_dir(const RunConfig& config, const SweepOptions& options) {
  return options.out_override.empty() ? fs::path(config.out_dir) : fs::path(options.out_override);
}

std::string cell_file_name(std::size_t omega_index, std::size_t alpha_index) {
  return "cell_w" + std::to_string(omega_index) + "_a" + std::to_string(alpha_index) + ".csv";
}

std::string trace_file_name(std::size_t omega_index, std::size_t alpha_index) {
  return "trace_w" + std::to_string(omega_index) + "_a" + std::to_string(alpha_index) + ".csv";
}

constexpr const char* kCellCsvHeader = "trial,seed,ground_state,spin,magnetization";
constexpr const char* kCompleteFooter = "# complete";

std::string render_cell_file(const RunConfig& config, std::span<const TrialResult> trials) {
  std::ostringstream os;
  os << kCellCsvHeader << '\n';
  for (std::size_t s = 0; s < trials.size(); ++s) {
    const TrialResult& trial = trials[s];
    for (int k = 0; k < config.n_spins; ++k) {
      os << s << ',' << trial.seed << ',' << (trial.ground_state_found ? 1 : 0) << ',' << k << ','
         << format_double(trial.final_magnetizations[static_cast<std::size_t>(k)]) << '\n';
    }
  }
  os << kCompleteFooter << '\n';
  return os.str();
}

std::string render_trace_cell_file(std::span<const TrialResult> trials) {
  std::ostringstream os;
  os << kTraceCsvHeader << '\n';
  for (std::size_t s = 0; s < trials.size(); ++s) {
    for (const auto& [t, e] : trials[s].energy_trace)
      os << s << ',' << t << ',' << format_double(e) << '\n';
  }
  os << kCompleteFooter << '\n';
  return os.str();
}

// Restores the per-trial results of a completed cell file, or nullopt if the
// file is absent, incomplete or inconsistent with the config.
std::optional<std::vector<TrialResult>> load_cell_file(const fs::path& path,
                                                       const RunConfig& config) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  std::string line;
  if (!std::getline(is, line) || line != kCellCsvHeader) return std::nullopt;
  std::vector<TrialResult> trials;
  std::size_t rows = 0;
  bool complete = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line == kCompleteFooter) {
      complete = true;
      break;
    }
    ++rows;
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> cols;
    while (std::getline(fields, field, ',')) cols.push_back(field);
    if (cols.size() != 5) return std::nullopt;
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    int ground = 0, spin = 0;
    double m = 0.0;
    try {
      trial_index = static_cast<std::size_t>(std::stoull(cols[0]));
      seed = std::stoull(cols[1]);
      ground = std::stoi(cols[2]);
      spin = std::stoi(cols[3]);
      m = std::stod(cols[4]);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (trial_index >= static_cast<std::size_t>(config.trials)) return std::nullopt;
    if (trials.size() <= trial_index) {
      trials.resize(trial_index + 1);
      trials[trial_index].seed = seed;
      trials[trial_index].ground_state_found = ground != 0;
      trials[trial_index].total_ants = config.ants_per_trial;
      trials[trial_index].final_magnetizations.assign(
          static_cast<std::size_t>(config.n_spins), 0.0);
    }
    if (spin < 0 || spin >= config.n_spins) return std::nullopt;
    trials[trial_index].final_magnetizations[static_cast<std::size_t>(spin)] = m;
  }
  if (!complete || trials.size() != static_cast<std::size_t>(config.trials) ||
      rows != trials.size() * static_cast<std::size_t>(config.n_spins))
    return std::nullopt;
  return trials;
}

std::optional<std::vector<std::vector<std::pair<std::int64_t, double>>>> load_trace_cell_file(
    const fs::path& path, int trials) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  std::string line;
  if (!std::getline(is, line) || line != std::string(kTraceCsvHeader)) return std::nullopt;
  std::vector<std::vector<std::pair<std::int64_t, double>>> traces(
      static_cast<std::size_t>(trials));
  bool complete = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line == kCompleteFooter) {
      complete = true;
      break;
    }
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> cols;
    while (std::getline(fields, field, ',')) cols.push_back(field);
    if (cols.size() != 3) return std::nullopt;
    try {
      const std::size_t trial_index = static_cast<std::size_t>(std::stoull(cols[0]));
      if (trial_index >= traces.size()) return std::nullopt;
      traces[trial_index].emplace_back(std::stoll(cols[1]), std::stod(cols[2]));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (!complete) return std::nullopt;
  return traces;
}

std::string network_dump_name(double omega_value) {
  return "network_w" + format_double(omega_value) + ".csv";
}

}  // namespace

void RunConfig::validate() const {
  if (n_spins < 2) throw ConfigError("n_spins must be at least 2");
  if (!std::isfinite(coupling)) throw ConfigError("coupling must be finite");
  if (!std::isfinite(field)) throw ConfigError("field must be finite");
  if (in_degree < 1) throw ConfigError("in_degree must be at least 1");
  for (double w : omega)
    if (!std::isfinite(w) || w < -1.0) throw ConfigError("omega values must be finite and >= -1");
  for (double a : alpha)
    if (!(a >= 0.0 && a < 1.0)) throw ConfigError("alpha values must lie in [0, 1)");
  if (ants_per_trial < in_degree + 2)
    throw ConfigError("ants_per_trial must be at least in_degree + 2");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (hist_bins < 1) throw ConfigError("hist_bins must be at least 1");
  if (!network_file.empty()) {
    if (network_mode != NetworkMode::frozen)
      throw ConfigError("network_file requires network_mode=frozen");
    if (omega.size() != 1)
      throw ConfigError("network_file requires a single omega value");
  }
}

ColonyParams RunConfig::cell_params(double omega_value, double alpha_value) const {
  ColonyParams params;
  params.ising = IsingParams{n_spins, coupling, field};
  params.growth = GrowthParams{in_degree, omega_value};
  params.decision = DecisionParams{alpha_value};
  return params;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path + ": cannot open config file");
  RunConfig config;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) fail_line(path, line_no, "expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail_line(path, line_no, "empty key");

    const bool list_key = key == "omega" || key == "alpha";
    if (!list_key && !seen.insert(key).second)
      fail_line(path, line_no, "duplicate key '" + key + "'");

    if (key == "n_spins") {
      config.n_spins = static_cast<int>(parse_int(path, line_no, key, value));
    } else if (key == "coupling") {
      config.coupling = parse_double(path, line_no, key, value);
    } else if (key == "field") {
      config.field = parse_double(path, line_no, key, value);
    } else if (key == "in_degree") {
      config.in_degree = static_cast<int>(parse_int(path, line_no, key, value));
    } else if (key == "omega") {
      config.omega.push_back(parse_double(path, line_no, key, value));
    } else if (key == "alpha") {
      config.alpha.push_back(parse_double(path, line_no, key, value));
    } else if (key == "ants_per_trial") {
      config.ants_per_trial = parse_int(path, line_no, key, value);
    } else if (key == "trials") {
      config.trials = static_cast<int>(parse_int(path, line_no, key, value));
    } else if (key == "master_seed") {
      config.master_seed = parse_uint(path, line_no, key, value);
    } else if (key == "mode") {
      if (value == "colony")
        config.mode = RunMode::colony;
      else if (value == "meanfield")
        config.mode = RunMode::meanfield;
      else if (value == "both")
        config.mode = RunMode::both;
      else
        fail_line(path, line_no, "mode must be colony, meanfield or both");
    } else if (key == "network_mode") {
      if (value == "coevolve")
        config.network_mode = NetworkMode::coevolve;
      else if (value == "frozen")
        config.network_mode = NetworkMode::frozen;
      else
        fail_line(path, line_no, "network_mode must be coevolve or frozen");
    } else if (key == "out_dir") {
      config.out_dir = value;
    } else if (key == "hist_bins") {
      config.hist_bins = static_cast<int>(parse_int(path, line_no, key, value));
    } else if (key == "trace_interval") {
      if (value == "auto")
        config.trace_interval = 0;
      else if (value == "off")
        config.trace_interval = -1;
      else
        config.trace_interval = parse_int(path, line_no, key, value);
    } else if (key == "network_file") {
      config.network_file = value;
    } else {
      fail_line(path, line_no, "unknown key '" + key + "'");
    }
  }
  for (const char* required : {"n_spins", "coupling", "field", "in_degree", "ants_per_trial",
                               "trials", "master_seed"}) {
    if (!seen.contains(required))
      throw ConfigError(path + ": missing required key '" + std::string(required) + "'");
  }
  config.validate();
  return config;
}

SweepExecution run_sweep(const RunConfig& config, const SweepOptions& options) {
  config.validate();
  SweepExecution execution;
  execution.out_dir = resolve_out_dir(config, options);
  const fs::path cells_dir = execution.out_dir / "cells";
  fs::create_directories(cells_dir);

  if (config.omega.empty() || config.alpha.empty()) {
    if (!options.quiet)
      std::cerr << "warning: empty omega or alpha grid; writing headers only\n";
    std::ostringstream sweep_os, hist_os;
    write_sweep_header(sweep_os);
    write_hist_header(hist_os);
    write_file_atomic(execution.out_dir / "sweep.csv", sweep_os.str());
    write_file_atomic(execution.out_dir / "hist.csv", hist_os.str());
    return execution;
  }

  // Frozen mode fixes one network realization per omega; every trial of that
  // omega replays the same selection sequence.
  std::vector<SelectionRecord> frozen(config.omega.size());
  if (config.network_mode == NetworkMode::frozen) {
    if (!config.network_file.empty()) {
      std::ifstream is(config.network_file);
      if (!is) throw ConfigError(config.network_file + ": cannot open network file");
      frozen[0] = read_network_dump(is, GrowthParams{config.in_degree, config.omega[0]});
      if (frozen[0].refs.size() <
          static_cast<std::size_t>(config.ants_per_trial - (config.in_degree + 1)))
        throw ConfigError(config.network_file + ": network shorter than ants_per_trial");
    } else {
      for (std::size_t wi = 0; wi < config.omega.size(); ++wi) {
        const GrowthParams growth{config.in_degree, config.omega[wi]};
        frozen[wi] = grow_network(growth, config.ants_per_trial,
                                  derive_seed(config.master_seed, wi, kNetworkStreamTag, 0));
        std::ostringstream os;
        write_network_dump(os, growth, frozen[wi]);
        write_file_atomic(execution.out_dir / network_dump_name(config.omega[wi]), os.str());
      }
    }
  }

  const bool tracing = config.trace_interval >= 0;
  const std::size_t n_cells = config.omega.size() * config.alpha.size();
  const std::size_t n_trials = static_cast<std::size_t>(config.trials);

  struct CellSlot {
    std::vector<TrialResult> results;
    std::vector<std::string> errors;
    bool loaded = false;
  };
  std::vector<CellSlot> slots(n_cells);
  for (auto& slot : slots) {
    slot.results.resize(n_trials);
    slot.errors.resize(n_trials);
  }

  const auto cell_index = [&](std::size_t wi, std::size_t ai) {
    return wi * config.alpha.size() + ai;
  };

  // Resume: reuse cells whose persisted trial results are complete.
  if (options.resume) {
    for (std::size_t wi = 0; wi < config.omega.size(); ++wi) {
      for (std::size_t ai = 0; ai < config.alpha.size(); ++ai) {
        auto restored = load_cell_file(cells_dir / cell_file_name(wi, ai), config);
        if (!restored) continue;
        if (tracing) {
          auto traces = load_trace_cell_file(cells_dir / trace_file_name(wi, ai), config.trials);
          if (!traces) continue;  // incomplete trace: recompute the cell
          for (std::size_t s = 0; s < restored->size(); ++s)
            (*restored)[s].energy_trace = std::move((*traces)[s]);
        }
        CellSlot& slot = slots[cell_index(wi, ai)];
        slot.results = std::move(*restored);
        slot.loaded = true;
      }
    }
  }

  struct Task {
    std::size_t wi, ai, trial;
  };
  std::vector<Task> tasks;
  tasks.reserve(n_cells * n_trials);
  for (std::size_t wi = 0; wi < config.omega.size(); ++wi)
    for (std::size_t ai = 0; ai < config.alpha.size(); ++ai) {
      if (slots[cell_index(wi, ai)].loaded) continue;
      for (std::size_t s = 0; s < n_trials; ++s) tasks.push_back({wi, ai, s});
    }

  std::atomic<std::size_t> next_task{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next_task.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      CellSlot& slot = slots[cell_index(task.wi, task.ai)];
      try {
        TrialConfig trial_config;
        trial_config.total_ants = config.ants_per_trial;
        trial_config.seed = trial_seed(config.master_seed, task.wi, task.ai,
                                       static_cast<std::int64_t>(task.trial));
        trial_config.trace_interval = tracing ? config.trace_interval : -1;
        if (config.network_mode == NetworkMode::frozen)
          trial_config.replay = &frozen[config.network_file.empty() ? task.wi : 0];
        slot.results[task.trial] =
            run_trial(config.cell_params(config.omega[task.wi], config.alpha[task.ai]),
                      trial_config);
      } catch (const std::exception& e) {
        slot.errors[task.trial] = e.what();
      }
    }
  };

  int thread_count = options.threads > 0
                         ? options.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  if (thread_count < 1) thread_count = 1;
  if (static_cast<std::size_t>(thread_count) > tasks.size() && !tasks.empty())
    thread_count = static_cast<int>(tasks.size());
  if (tasks.size() <= 1 || thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Deterministic aggregation and output, in cell order.
  std::ostringstream sweep_os, hist_os, trace_os;
  write_sweep_header(sweep_os);
  write_hist_header(hist_os);
  write_trace_header(trace_os);
  const SweepContext context{config.n_spins, config.ants_per_trial, config.in_degree,
                             config.coupling, config.field, config.master_seed};
  for (std::size_t wi = 0; wi < config.omega.size(); ++wi) {
    for (std::size_t ai = 0; ai < config.alpha.size(); ++ai) {
      const std::size_t ci = cell_index(wi, ai);
      CellSlot& slot = slots[ci];
      CellOutcome outcome;
      outcome.omega_index = wi;
      outcome.alpha_index = ai;
      outcome.omega = config.omega[wi];
      outcome.alpha = config.alpha[ai];
      outcome.loaded = slot.loaded;
      for (std::size_t s = 0; s < n_trials; ++s) {
        if (!slot.errors[s].empty()) {
          outcome.failed = true;
          outcome.error = "trial " + std::to_string(s) + ": " + slot.errors[s];
          break;
        }
      }
      if (outcome.failed) {
        if (!options.quiet)
          std::cerr << "cell omega=" << format_double(outcome.omega)
                    << " alpha=" << format_double(outcome.alpha) << " failed: " << outcome.error
                    << '\n';
        execution.exit_code = 2;
        execution.cells.push_back(std::move(outcome));
        continue;
      }
      outcome.trials = std::move(slot.results);
      outcome.stats =
          aggregate_cell(outcome.omega, outcome.alpha, outcome.trials, config.hist_bins);
      if (!slot.loaded) {
        write_file_atomic(cells_dir / cell_file_name(wi, ai),
                          render_cell_file(config, outcome.trials));
        if (tracing)
          write_file_atomic(cells_dir / trace_file_name(wi, ai),
                            render_trace_cell_file(outcome.trials));
      }
      write_sweep_row(sweep_os, outcome.stats, context);
      write_hist_rows(hist_os, outcome.stats);
      if (tracing) {
        const std::int64_t base = static_cast<std::int64_t>(ci) * config.trials;
        for (std::size_t s = 0; s < outcome.trials.size(); ++s)
          write_trace_rows(trace_os, base + static_cast<std::int64_t>(s), outcome.trials[s]);
      }
      execution.cells.push_back(std::move(outcome));
    }
  }
  write_file_atomic(execution.out_dir / "sweep.csv", sweep_os.str());
  write_file_atomic(execution.out_dir / "hist.csv", hist_os.str());
  if (tracing) write_file_atomic(execution.out_dir / "trace.csv", trace_os.str());
  return execution;
}

std::vector<TheoryRow> theory_table(double coupling, double field, std::span<const double> alphas) {
  std::vector<TheoryRow> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) rows.push_back({a, theory_point(coupling, field, a)});
  return rows;
}

void write_theory_csv(std::ostream& os, std::span<const TheoryRow> rows) {
  os << "alpha,m_star,alpha_s,alpha_c,unstable\n";
  for (const TheoryRow& row : rows) {
    os << format_double(row.alpha) << ',' << format_double(row.point.m_star) << ','
       << format_double(row.point.alpha_s) << ',' << format_double(row.point.alpha_c) << ','
       << (row.point.unstable ? 1 : 0) << '\n';
  }
}

int run_meanfield(const RunConfig& config, const SweepOptions& options) {
  config.validate();
  if (config.alpha.empty()) {
    std::cerr << "warning: empty alpha grid; nothing to do\n";
    return 0;
  }
  const fs::path out = resolve_out_dir(config, options);
  fs::create_directories(out);

  std::ostringstream theory_os;
  write_theory_csv(theory_os, theory_table(config.coupling, config.field, config.alpha));
  write_file_atomic(out / "theory.csv", theory_os.str());

  if (config.omega.empty()) return 0;
  std::ostringstream mf_os;
  mf_os << "omega,alpha,t,m_mean,m_min,m_max\n";
  for (std::size_t wi = 0; wi < config.omega.size(); ++wi) {
    for (std::size_t ai = 0; ai < config.alpha.size(); ++ai) {
      MeanFieldParams params;
      params.n_spins = config.n_spins;
      params.coupling = config.coupling;
      params.field = config.field;
      params.alpha = config.alpha[ai];
      params.growth = GrowthParams{config.in_degree, config.omega[wi]};
      IntegrateConfig integrate_config;
      integrate_config.total_steps = config.ants_per_trial;
      integrate_config.seed = derive_seed(config.master_seed, wi, ai, kMeanFieldStreamTag);
      integrate_config.snapshot_interval =
          config.trace_interval > 0 ? config.trace_interval : 0;
      const MeanFieldTrajectory trajectory = integrate(params, integrate_config);
      for (const MeanFieldState& snap : trajectory.snapshots) {
        double sum = 0.0, lo = snap.m.front(), hi = snap.m.front();
        for (double v : snap.m) {
          sum += v;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        mf_os << format_double(config.omega[wi]) << ',' << format_double(config.alpha[ai]) << ','
              << snap.t << ',' << format_double(sum / static_cast<double>(snap.m.size())) << ','
              << format_double(lo) << ',' << format_double(hi) << '\n';
      }
    }
  }
  write_file_atomic(out / "meanfield.csv", mf_os.str());
  return 0;
}

int dump_network_file(const RunConfig& config, double omega_value, const SweepOptions& options) {
  config.validate();
  std::size_t wi = config.omega.size();
  for (std::size_t i = 0; i < config.omega.size(); ++i)
    if (config.omega[i] == omega_value) wi = i;
  if (wi == config.omega.size())
    throw ConfigError("omega " + format_double(omega_value) + " is not in the config's omega list");
  const fs::path out = resolve_out_dir(config, options);
  fs::create_directories(out);
  const GrowthParams growth{config.in_degree, omega_value};
  const SelectionRecord record =
      grow_network(growth, config.ants_per_trial,
                   derive_seed(config.master_seed, wi, kNetworkStreamTag, 0));
  std::ostringstream os;
  write_network_dump(os, growth, record);
  write_file_atomic(out / network_dump_name(omega_value), os.str());
  return 0;
}

}  // namespace aconet
