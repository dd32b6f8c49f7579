#include "aconet/colony.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aconet {

void DecisionParams::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
}

void ColonyParams::validate() const {
  ising.validate();
  growth.validate();
  decision.validate();
}

PheromoneAggregate aggregate_pheromone(std::span<const AntRecord> ants, const ReferenceSet& refs) {
  if (refs.ants.empty()) throw std::invalid_argument("reference set is empty");
  for (AntId id : refs.ants)
    if (id < 1 || static_cast<std::size_t>(id) > ants.size())
      throw std::out_of_range("reference id outside ant history");

  double max_log_w = -std::numeric_limits<double>::infinity();
  for (AntId id : refs.ants)
    max_log_w = std::max(max_log_w, ants[static_cast<std::size_t>(id - 1)].log_weight());

  const int n = ants[static_cast<std::size_t>(refs.ants.front() - 1)].choices.size();
  PheromoneAggregate agg;
  agg.ratios.assign(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (AntId id : refs.ants) {
    const AntRecord& ant = ants[static_cast<std::size_t>(id - 1)];
    const double w = std::exp(ant.log_weight() - max_log_w);
    total += w;
    const auto words = ant.choices.words();
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      std::uint64_t bits = words[wi];
      const std::size_t base = wi * 64;
      while (bits) {
        agg.ratios[base + static_cast<std::size_t>(std::countr_zero(bits))] += w;
        bits &= bits - 1;
      }
    }
  }
  for (double& z : agg.ratios) z /= total;
  agg.log_total = max_log_w + std::log(total);
  return agg;
}

SpinConfig decide(const PheromoneAggregate& agg, const DecisionParams& params, RandomSource& rng) {
  SpinConfig config(static_cast<int>(agg.ratios.size()));
  for (std::size_t k = 0; k < agg.ratios.size(); ++k) {
    if (rng.uniform() < decision_probability(params.alpha, agg.ratios[k]))
      config.set(static_cast<int>(k), true);
  }
  return config;
}

ColonyState ColonyState::bootstrap(const ColonyParams& params, RandomSource& rng,
                                   std::size_t reserve_ants) {
  params.validate();
  ColonyState state(params, NetworkState::complete_graph(params.growth, reserve_ants));
  state.ants_.reserve(reserve_ants);
  const int n = params.ising.n_spins;
  for (int s = 0; s < params.growth.in_degree + 1; ++s) {
    SpinConfig config(n);
    for (int k = 0; k < n; ++k)
      if (rng.uniform() < 0.5) config.set(k, true);
    const double e = energy(params.ising, config);
    state.ants_.push_back(AntRecord{std::move(config), e});
  }
  return state;
}

void ColonyState::advance(ReferenceSet refs, RandomSource& rng) {
  last_aggregate_ = aggregate_pheromone(ants_, refs);
  SpinConfig config = decide(last_aggregate_, params_.decision, rng);
  const double e = energy(params_.ising, config);
  ants_.push_back(AntRecord{std::move(config), e});
  network_.apply_selection(refs);
  last_refs_ = std::move(refs);
}

void ColonyState::step(RandomSource& rng) {
  advance(network_.select_references(rng), rng);
}

void ColonyState::step_with_refs(const ReferenceSet& refs, RandomSource& rng) {
  advance(refs, rng);
}

TrialResult run_trial(const ColonyParams& params, const TrialConfig& config) {
  params.validate();
  const std::int64_t t_total = config.total_ants;
  const int r = params.growth.in_degree;
  if (t_total < r + 2)
    throw std::invalid_argument("total_ants must be at least in_degree + 2");
  if (config.replay &&
      config.replay->refs.size() < static_cast<std::size_t>(t_total - (r + 1)))
    throw std::invalid_argument("replay record shorter than the trial");

  std::int64_t interval = config.trace_interval;
  if (interval == 0) interval = std::max<std::int64_t>(1, t_total / 1000);

  RandomStream rng(config.seed);
  ColonyState state = ColonyState::bootstrap(params, rng, static_cast<std::size_t>(t_total));

  TrialResult result;
  result.seed = config.seed;
  result.total_ants = t_total;
  result.params = params;

  const auto trace = [&](std::int64_t t) {
    if (interval > 0 && (t % interval == 0 || t == t_total))
      result.energy_trace.emplace_back(t, state.ants()[static_cast<std::size_t>(t - 1)].energy);
  };
  for (std::int64_t t = 1; t <= r + 1; ++t) trace(t);

  std::size_t replay_pos = 0;
  while (state.network().ant_count() < t_total) {
    if (config.replay)
      state.step_with_refs(config.replay->refs[replay_pos++], rng);
    else
      state.step(rng);
    trace(state.network().ant_count());
  }

  const double alpha = params.decision.alpha;
  const auto& ratios = state.last_aggregate().ratios;
  result.final_magnetizations.resize(ratios.size());
  bool all_non_negative = true;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    const double m = 2.0 * alpha * (ratios[k] - 0.5);
    result.final_magnetizations[k] = m;
    all_non_negative = all_non_negative && m >= 0.0;
  }
  result.ground_state_found = all_non_negative;
  return result;
}

}  // namespace aconet
