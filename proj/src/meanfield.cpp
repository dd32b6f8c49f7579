#include "aconet/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aconet/colony.hpp"

namespace aconet {

void MeanFieldParams::validate() const {
  if (n_spins < 1) throw std::invalid_argument("n_spins must be at least 1");
  if (!std::isfinite(coupling) || !std::isfinite(field))
    throw std::invalid_argument("coupling and field must be finite");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
  growth.validate();
}

TheoryPoint theory_point(double coupling, double field, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
  if (!(coupling > 0.0)) throw std::invalid_argument("coupling must be positive");
  TheoryPoint point;
  point.alpha_c = 1.0 / (1.0 + 2.0 * coupling);
  point.alpha_s = (1.0 - field / 2.0) / (1.0 + 2.0 * coupling);
  point.potential_curvature = 1.0 - alpha * (1.0 + 2.0 * coupling);
  point.unstable = alpha > point.alpha_c;
  if (alpha >= point.alpha_s || point.potential_curvature <= 0.0) {
    point.m_star = alpha;
  } else {
    // Unconstrained minimizer of u(m), clamped to the physical range
    // [-alpha, alpha] (the minimum sits on the boundary once it crosses).
    point.m_star = std::min(alpha * field / point.potential_curvature, alpha);
  }
  return point;
}

double potential(std::span<const double> m, double coupling, double field, double alpha) {
  const std::size_t n = m.size();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : m) {
    sum += v;
    sum_sq += v * v;
  }
  // sum_{k != l} M(k) M(l) = (sum M)^2 - sum M^2
  const double pair_sum = sum * sum - sum_sq;
  const double pair_coef = n > 1 ? coupling / (static_cast<double>(n) - 1.0) : coupling;
  return 0.5 * (1.0 - alpha) * sum_sq - alpha * (field * sum + pair_coef * pair_sum);
}

double uniform_potential(double m, double coupling, double field, double alpha) {
  return 0.5 * (1.0 - alpha * (1.0 + 2.0 * coupling)) * m * m - alpha * field * m;
}

std::vector<double> sde_drift(const MeanFieldParams& params, std::span<const double> m) {
  const std::size_t n = m.size();
  double sum = 0.0;
  for (double v : m) sum += v;
  std::vector<double> drift(n);
  const double two_j = 2.0 * params.coupling;
  for (std::size_t k = 0; k < n; ++k) {
    const double neighbors =
        n > 1 ? two_j * (sum - m[k]) / (static_cast<double>(n) - 1.0) : two_j * m[k];
    drift[k] = -(1.0 - params.alpha) * m[k] + params.alpha * (params.field + neighbors);
  }
  return drift;
}

void sde_step(MeanFieldState& state, const MeanFieldParams& params, RandomSource& rng) {
  if (state.t < params.growth.in_degree + 1)
    throw std::invalid_argument("sde_step requires t >= in_degree + 1");
  if (state.m.size() != static_cast<std::size_t>(params.n_spins))
    throw std::invalid_argument("state dimension does not match n_spins");
  const double rate = params.growth.in_degree / total_popularity(params.growth, state.t);
  const double noise_scale = params.alpha * rate;
  const std::vector<double> drift = sde_drift(params, state.m);
  for (std::size_t k = 0; k < state.m.size(); ++k) {
    const double updated = state.m[k] + rate * drift[k] + noise_scale * rng.normal();
    state.m[k] = std::clamp(updated, -params.alpha, params.alpha);
  }
  state.t += 1;
}

namespace {

// Aggregate of the r+1 fair-coin seed ants, matching the colony state at
// t = r+1. Consumes (r+1) * N uniforms.
std::vector<double> colony_matched_init(const MeanFieldParams& params, RandomSource& rng) {
  ColonyParams colony_params;
  colony_params.ising = IsingParams{params.n_spins, params.coupling, params.field};
  colony_params.growth = params.growth;
  colony_params.decision = DecisionParams{params.alpha};
  // The scalar-reduction case (n_spins == 1) cannot go through the Ising
  // energy, which needs two spins; seed it at zero instead.
  if (params.n_spins < 2) return std::vector<double>(1, 0.0);
  ColonyState colony = ColonyState::bootstrap(colony_params, rng);
  ReferenceSet all_seed_ants;
  for (AntId id = 1; id <= colony.network().ant_count(); ++id) all_seed_ants.ants.push_back(id);
  const PheromoneAggregate agg = aggregate_pheromone(colony.ants(), all_seed_ants);
  std::vector<double> m(agg.ratios.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = 2.0 * params.alpha * (agg.ratios[k] - 0.5);
  return m;
}

}  // namespace

MeanFieldTrajectory integrate(const MeanFieldParams& params, const IntegrateConfig& config) {
  params.validate();
  const std::int64_t t_start = params.growth.in_degree + 1;
  if (config.total_steps < t_start + 1)
    throw std::invalid_argument("total_steps must be at least in_degree + 2");

  std::int64_t interval = config.snapshot_interval;
  if (interval == 0) interval = std::max<std::int64_t>(1, config.total_steps / 1000);

  RandomStream rng(config.seed);
  MeanFieldState state;
  state.t = t_start;
  state.m = config.init == MeanFieldInit::colony_matched
                ? colony_matched_init(params, rng)
                : std::vector<double>(static_cast<std::size_t>(params.n_spins), 0.0);

  MeanFieldTrajectory trajectory;
  trajectory.snapshots.push_back(state);
  while (state.t < config.total_steps) {
    sde_step(state, params, rng);
    if ((interval > 0 && state.t % interval == 0) || state.t == config.total_steps)
      trajectory.snapshots.push_back(state);
  }
  trajectory.final_state = std::move(state);
  return trajectory;
}

double stationary_density_lattice(std::span<const double> m, const MeanFieldParams& params) {
  const double r_plus_1 = params.growth.in_degree + 1.0;
  const double theta = 2.0 * params.alpha * params.alpha / (r_plus_1 * r_plus_1);
  return std::exp(-potential(m, params.coupling, params.field, params.alpha) / theta);
}

}  // namespace aconet
