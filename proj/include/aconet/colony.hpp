#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "aconet/ising.hpp"
#include "aconet/random.hpp"
#include "aconet/refnet.hpp"

namespace aconet {

// Response strength of the decision function f(z) = (1-alpha)/2 + alpha z.
struct DecisionParams {
  double alpha = 0.0;  // in [0, 1)

  void validate() const;
};

inline double decision_probability(double alpha, double z) {
  return (1.0 - alpha) * 0.5 + alpha * z;
}

// One ant: its bit-packed choices and their energy. The deposited pheromone
// is the Boltzmann weight exp(-energy), kept in log domain.
struct AntRecord {
  SpinConfig choices;
  double energy = 0.0;

  double log_weight() const { return -energy; }
};

// Pheromone totals over one reference set: log S and the per-spin ratios
// Z(k) = S_1(k)/S, each in [0, 1].
struct PheromoneAggregate {
  double log_total = 0.0;
  std::vector<double> ratios;
};

// Sums Boltzmann weights over the referenced ants, normalized by the largest
// log-weight in the set. Iterates ants in ascending id order.
PheromoneAggregate aggregate_pheromone(std::span<const AntRecord> ants, const ReferenceSet& refs);

// Draws all N choices independently, spin k succeeding with probability
// f(Z(k)). Consumes exactly N uniforms in spin order.
SpinConfig decide(const PheromoneAggregate& agg, const DecisionParams& params, RandomSource& rng);

struct ColonyParams {
  IsingParams ising;
  GrowthParams growth;
  DecisionParams decision;

  void validate() const;
};

// Full search state: ant history plus the co-evolving reference network.
// Strictly sequential; one trial owns one state.
class ColonyState {
 public:
  // Seeds the colony: the first r+1 ants choose by fair coin (alpha = 0) on
  // the complete graph. Consumes (r+1) * N uniforms in ant-major spin order.
  static ColonyState bootstrap(const ColonyParams& params, RandomSource& rng,
                               std::size_t reserve_ants = 0);

  // Advances by one ant: select references, aggregate pheromone, decide,
  // evaluate energy, deposit, grow the network. Consumes r uniforms for the
  // selection followed by N uniforms for the decision.
  void step(RandomSource& rng);

  // Same, but replays a fixed reference set instead of sampling one (frozen
  // network mode). Consumes only the N decision uniforms.
  void step_with_refs(const ReferenceSet& refs, RandomSource& rng);

  const ColonyParams& params() const { return params_; }
  const std::vector<AntRecord>& ants() const { return ants_; }
  const NetworkState& network() const { return network_; }
  // Aggregate and references used by the most recent step.
  const PheromoneAggregate& last_aggregate() const { return last_aggregate_; }
  const ReferenceSet& last_references() const { return last_refs_; }

 private:
  ColonyState(ColonyParams params, NetworkState network)
      : params_(std::move(params)), network_(std::move(network)) {}
  void advance(ReferenceSet refs, RandomSource& rng);

  ColonyParams params_;
  std::vector<AntRecord> ants_;
  NetworkState network_;
  PheromoneAggregate last_aggregate_;
  ReferenceSet last_refs_;
};

struct TrialConfig {
  std::int64_t total_ants = 0;       // T
  std::uint64_t seed = 0;
  // Energy-trace subsampling: > 0 records every that many ants, 0 picks
  // max(1, T/1000), < 0 disables the trace.
  std::int64_t trace_interval = 0;
  const SelectionRecord* replay = nullptr;  // frozen network, or null to co-evolve
};

struct TrialResult {
  std::vector<double> final_magnetizations;  // M(k,T) = 2 alpha (Z(k) - 1/2)
  std::uint64_t seed = 0;
  std::int64_t total_ants = 0;
  std::vector<std::pair<std::int64_t, double>> energy_trace;  // (t, E(t))
  ColonyParams params;
  bool ground_state_found = false;  // every final magnetization >= 0
};

// Runs one trial of T ants from a single seeded stream. Deterministic:
// identical (params, config) pairs produce identical results.
TrialResult run_trial(const ColonyParams& params, const TrialConfig& config);

}  // namespace aconet
