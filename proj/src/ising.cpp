#include "aconet/ising.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace aconet {

void IsingParams::validate() const {
  if (n_spins < 2) throw std::invalid_argument("n_spins must be at least 2");
  if (!std::isfinite(coupling)) throw std::invalid_argument("coupling must be finite");
  if (!std::isfinite(field)) throw std::invalid_argument("field must be finite");
}

SpinConfig::SpinConfig(int n_spins)
    : n_(n_spins), words_(static_cast<std::size_t>((n_spins + 63) / 64), 0) {
  if (n_spins <= 0) throw std::invalid_argument("SpinConfig needs at least one spin");
}

SpinConfig SpinConfig::from_bits(std::span<const int> bits) {
  SpinConfig config(static_cast<int>(bits.size()));
  for (std::size_t k = 0; k < bits.size(); ++k) {
    config.set(static_cast<int>(k), bits[k] != 0);
  }
  return config;
}

bool SpinConfig::get(int k) const {
  if (k < 0 || k >= n_) throw std::out_of_range("spin index out of range");
  return (words_[static_cast<std::size_t>(k) / 64] >> (k % 64)) & 1u;
}

void SpinConfig::set(int k, bool value) {
  if (k < 0 || k >= n_) throw std::out_of_range("spin index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (k % 64);
  if (value)
    words_[static_cast<std::size_t>(k) / 64] |= mask;
  else
    words_[static_cast<std::size_t>(k) / 64] &= ~mask;
}

int SpinConfig::count_ones() const {
  int ones = 0;
  for (std::uint64_t w : words_) ones += std::popcount(w);
  return ones;
}

std::vector<int> SpinConfig::to_bits() const {
  std::vector<int> bits(static_cast<std::size_t>(n_));
  for (int k = 0; k < n_; ++k) bits[static_cast<std::size_t>(k)] = get(k) ? 1 : 0;
  return bits;
}

double energy(const IsingParams& params, const SpinConfig& config) {
  params.validate();
  if (config.size() != params.n_spins)
    throw std::invalid_argument("configuration length does not match n_spins");
  // With S = sum_i sigma(i), the pair sum over i != j is S^2 - N, so
  // E = -h S - J (S^2 - N)/(N - 1). S is an integer, exact in doubles.
  const double s = config.spin_sum();
  return -params.field * s - params.coupling * (s * s - params.n_spins) / (params.n_spins - 1);
}

double energy_of_magnetization(const IsingParams& params, double m) {
  params.validate();
  if (!(std::abs(m) <= 1.0)) throw std::domain_error("magnetization must lie in [-1, 1]");
  return -params.n_spins * (params.field * m + params.coupling * m * m);
}

double effective_field(const IsingParams& params, const SpinConfig& config, int k) {
  params.validate();
  if (config.size() != params.n_spins)
    throw std::invalid_argument("configuration length does not match n_spins");
  if (k < 0 || k >= params.n_spins) throw std::out_of_range("spin index out of range");
  const double others = config.spin_sum() - (config.get(k) ? 1 : -1);
  return params.field + 2.0 * params.coupling * others / (params.n_spins - 1);
}

}  // namespace aconet
