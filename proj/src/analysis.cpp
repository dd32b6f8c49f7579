#include "aconet/analysis.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace aconet {

namespace {

double trial_mean(const TrialResult& result) {
  double sum = 0.0;
  for (double m : result.final_magnetizations) sum += m;
  return sum / static_cast<double>(result.final_magnetizations.size());
}

}  // namespace

double mean_magnetization(std::span<const TrialResult> results) {
  if (results.empty()) throw std::invalid_argument("mean_magnetization needs at least one trial");
  double sum = 0.0;
  std::size_t count = 0;
  for (const TrialResult& result : results) {
    for (double m : result.final_magnetizations) sum += m;
    count += result.final_magnetizations.size();
  }
  return sum / static_cast<double>(count);
}

double mean_magnetization_se(std::span<const TrialResult> results) {
  if (results.size() < 2) return 0.0;
  const double s = static_cast<double>(results.size());
  double mean = 0.0;
  for (const TrialResult& result : results) mean += trial_mean(result);
  mean /= s;
  double var = 0.0;
  for (const TrialResult& result : results) {
    const double d = trial_mean(result) - mean;
    var += d * d;
  }
  var /= (s - 1.0);
  return std::sqrt(var / s);
}

double success_probability(std::span<const TrialResult> results) {
  if (results.empty()) throw std::invalid_argument("success_probability needs at least one trial");
  std::int64_t successes = 0;
  for (const TrialResult& result : results) {
    bool all_up = true;
    for (double m : result.final_magnetizations) all_up = all_up && m >= 0.0;
    if (all_up) ++successes;
  }
  return static_cast<double>(successes) / static_cast<double>(results.size());
}

double success_probability_se(std::span<const TrialResult> results) {
  const double p = success_probability(results);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(results.size()));
}

double Histogram::bin_lo(std::size_t i) const {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(counts.size());
}

double Histogram::bin_hi(std::size_t i) const {
  return lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(counts.size());
}

Histogram histogram(std::span<const double> values, int bins, double lo, double hi) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (!(lo < hi)) throw std::invalid_argument("histogram range must be non-empty");
  Histogram hist;
  hist.lo = lo;
  hist.hi = hi;
  hist.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double v : values) {
    std::int64_t idx = static_cast<std::int64_t>(std::floor((v - lo) / width));
    if (v < lo) {
      idx = 0;
      hist.n_below += 1;
    } else if (v > hi) {
      idx = bins - 1;
      hist.n_above += 1;
    } else if (idx >= bins) {
      idx = bins - 1;  // v == hi
    }
    hist.counts[static_cast<std::size_t>(idx)] += 1;
  }
  return hist;
}

SweepCell aggregate_cell(double omega, double alpha, std::span<const TrialResult> results,
                         int hist_bins) {
  SweepCell cell;
  cell.omega = omega;
  cell.alpha = alpha;
  cell.n_trials = static_cast<std::int64_t>(results.size());
  cell.m_mean = mean_magnetization(results);
  cell.m_mean_se = mean_magnetization_se(results);
  cell.success_prob = success_probability(results);
  cell.success_se = success_probability_se(results);
  std::vector<double> values;
  for (const TrialResult& result : results)
    values.insert(values.end(), result.final_magnetizations.begin(),
                  result.final_magnetizations.end());
  cell.hist = histogram(values, hist_bins);
  return cell;
}

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_sweep_header(std::ostream& os) { os << kSweepCsvHeader << '\n'; }

void write_sweep_row(std::ostream& os, const SweepCell& cell, const SweepContext& context) {
  os << format_double(cell.omega) << ',' << format_double(cell.alpha) << ','
     << format_double(cell.m_mean) << ',' << format_double(cell.m_mean_se) << ','
     << format_double(cell.success_prob) << ',' << format_double(cell.success_se) << ','
     << cell.n_trials << ',' << context.n_spins << ',' << context.total_ants << ','
     << context.in_degree << ',' << format_double(context.coupling) << ','
     << format_double(context.field) << ',' << context.master_seed << '\n';
}

void write_hist_header(std::ostream& os) { os << kHistCsvHeader << '\n'; }

void write_hist_rows(std::ostream& os, const SweepCell& cell) {
  for (std::size_t i = 0; i < cell.hist.counts.size(); ++i) {
    os << format_double(cell.omega) << ',' << format_double(cell.alpha) << ','
       << format_double(cell.hist.bin_lo(i)) << ',' << format_double(cell.hist.bin_hi(i)) << ','
       << cell.hist.counts[i] << '\n';
  }
}

void write_trace_header(std::ostream& os) { os << kTraceCsvHeader << '\n'; }

void write_trace_rows(std::ostream& os, std::int64_t trial_index, const TrialResult& result) {
  for (const auto& [t, e] : result.energy_trace)
    os << trial_index << ',' << t << ',' << format_double(e) << '\n';
}

}  // namespace aconet
