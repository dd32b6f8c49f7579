#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace aconet {

// Infinite-range Ising model with uniform exchange coupling and external
// field, over N binary choice variables X(k) in {0,1} (spins sigma = 2X-1).
struct IsingParams {
  int n_spins = 2;       // N
  double coupling = 0.0; // J
  double field = 0.0;    // h

  void validate() const;
};

// Bit-packed binary choice vector, one bit per spin. Unused high bits of the
// last word are kept zero so word-parallel counting stays exact.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(int n_spins);
  static SpinConfig from_bits(std::span<const int> bits);

  int size() const { return n_; }
  bool get(int k) const;
  void set(int k, bool value);
  int count_ones() const;
  // Sum of sigma(k) = 2X(k) - 1 over all spins.
  int spin_sum() const { return 2 * count_ones() - n_; }
  double magnetization() const { return static_cast<double>(spin_sum()) / n_; }
  std::span<const std::uint64_t> words() const { return words_; }
  std::vector<int> to_bits() const;

  bool operator==(const SpinConfig&) const = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

// E = -sum_i h sigma(i) - (1/(N-1)) sum_{i != j} J sigma(i) sigma(j),
// evaluated through the spin-sum identity in O(N/64).
double energy(const IsingParams& params, const SpinConfig& config);

// E(m) = -N (h m + J m^2), the analytic energy at magnetization m.
double energy_of_magnetization(const IsingParams& params, double m);

// h + (1/(N-1)) sum_{l != k} 2 J sigma(l); equals -(1/2) dE/dX(k).
double effective_field(const IsingParams& params, const SpinConfig& config, int k);

}  // namespace aconet
