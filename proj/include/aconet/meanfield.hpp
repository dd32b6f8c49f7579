#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aconet/random.hpp"
#include "aconet/refnet.hpp"

namespace aconet {

// Parameters of the magnetization SDE
//   dM(k) = (r/D(t)) [-(1-alpha) M(k) + alpha (h + (2J/(N-1)) sum_{l!=k} M(l))] dt
//           + (alpha r / D(t)) dW(k),
// integrated with unit time steps (one ant per step).
struct MeanFieldParams {
  int n_spins = 1;
  double coupling = 0.0;  // J
  double field = 0.0;     // h
  double alpha = 0.0;
  GrowthParams growth;

  void validate() const;
};

// Closed-form fixed point and thresholds of the uniform-mode potential
// u(m) = (1/2)(1 - alpha(1+2J)) m^2 - alpha h m on [-alpha, alpha].
struct TheoryPoint {
  double m_star = 0.0;
  double alpha_s = 0.0;              // saturation threshold (1 - h/2)/(1 + 2J)
  double alpha_c = 0.0;              // instability threshold 1/(1 + 2J)
  double potential_curvature = 0.0;  // 1 - alpha (1 + 2J)
  bool unstable = false;             // alpha > alpha_c: stable states +-alpha
};

TheoryPoint theory_point(double coupling, double field, double alpha);

// U({M}) = (1/2)(1-alpha) sum M^2 - alpha [h sum M + (J/(N-1)) sum_{k!=l} M(k)M(l)].
double potential(std::span<const double> m, double coupling, double field, double alpha);

// u(m): the per-spin potential at uniform magnetization.
double uniform_potential(double m, double coupling, double field, double alpha);

// Drift vector of the SDE before the r/D(t) factor; equals -grad U.
// For n_spins == 1 the coupling term uses the spin's own magnetization
// (the uniform-mode scalar reduction).
std::vector<double> sde_drift(const MeanFieldParams& params, std::span<const double> m);

struct MeanFieldState {
  std::int64_t t = 0;
  std::vector<double> m;
};

// One Euler-Maruyama step with dt = 1. Consumes exactly N normals in spin
// order. The result is clamped to [-alpha, alpha].
void sde_step(MeanFieldState& state, const MeanFieldParams& params, RandomSource& rng);

enum class MeanFieldInit {
  colony_matched,  // aggregate of r+1 fair-coin ants, Boltzmann weighted
  zero,
};

struct IntegrateConfig {
  std::int64_t total_steps = 0;  // final time T
  std::uint64_t seed = 0;
  std::int64_t snapshot_interval = 0;  // 0 picks max(1, T/1000); < 0 keeps only endpoints
  MeanFieldInit init = MeanFieldInit::colony_matched;
};

struct MeanFieldTrajectory {
  std::vector<MeanFieldState> snapshots;  // includes t = r+1 and t = T
  MeanFieldState final_state;
};

MeanFieldTrajectory integrate(const MeanFieldParams& params, const IntegrateConfig& config);

// Unnormalized stationary density exp(-U({m}) / (2 alpha^2 / (r+1)^2)) of the
// lattice-limit (omega = -1) dynamics. Diagnostic only.
double stationary_density_lattice(std::span<const double> m, const MeanFieldParams& params);

}  // namespace aconet
