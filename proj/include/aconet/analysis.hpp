#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aconet/colony.hpp"

namespace aconet {

// Mean over all N*S final magnetizations of the given trials.
double mean_magnetization(std::span<const TrialResult> results);

// Standard error of the per-trial means (sample std / sqrt(S)).
double mean_magnetization_se(std::span<const TrialResult> results);

// Fraction of trials whose final magnetizations are all non-negative
// (sgn(0) counts as +1, i.e. toward the ground state).
double success_probability(std::span<const TrialResult> results);

// Binomial standard error sqrt(p(1-p)/S) of the success fraction.
double success_probability_se(std::span<const TrialResult> results);

struct Histogram {
  double lo = -1.0;
  double hi = 1.0;
  std::vector<std::int64_t> counts;
  // Out-of-range values are folded into the end bins and flagged here.
  std::int64_t n_below = 0;
  std::int64_t n_above = 0;

  double bin_lo(std::size_t i) const;
  double bin_hi(std::size_t i) const;
};

// Equal-width bins over [lo, hi]. A value exactly on an interior edge goes
// to the upper bin; hi itself belongs to the last bin.
Histogram histogram(std::span<const double> values, int bins, double lo = -1.0, double hi = 1.0);

// Aggregated observables of one (omega, alpha) sweep cell.
struct SweepCell {
  double omega = 0.0;
  double alpha = 0.0;
  double m_mean = 0.0;
  double m_mean_se = 0.0;
  double success_prob = 0.0;
  double success_se = 0.0;
  Histogram hist;
  std::int64_t n_trials = 0;
};

SweepCell aggregate_cell(double omega, double alpha, std::span<const TrialResult> results,
                         int hist_bins);

// Shortest round-trip decimal form of a double (via std::to_chars).
std::string format_double(double value);

// CSV writers; headers are part of the file contract.
inline constexpr const char* kSweepCsvHeader =
    "omega,alpha,m_mean,m_mean_se,success_prob,success_se,n_trials,n_spins,T,r,J,h,seed";
inline constexpr const char* kHistCsvHeader = "omega,alpha,bin_lo,bin_hi,count";
inline constexpr const char* kTraceCsvHeader = "trial,t,energy";

struct SweepContext {
  int n_spins = 0;
  std::int64_t total_ants = 0;
  int in_degree = 0;
  double coupling = 0.0;
  double field = 0.0;
  std::uint64_t master_seed = 0;
};

void write_sweep_header(std::ostream& os);
void write_sweep_row(std::ostream& os, const SweepCell& cell, const SweepContext& context);
void write_hist_header(std::ostream& os);
void write_hist_rows(std::ostream& os, const SweepCell& cell);
void write_trace_header(std::ostream& os);
void write_trace_rows(std::ostream& os, std::int64_t trial_index, const TrialResult& result);

}  // namespace aconet
