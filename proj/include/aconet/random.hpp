#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace aconet {

// SplitMix64 mixing step. Stable across platforms and compilers.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives a stream seed from (master, a, b, c). Each index is absorbed
// through its own mix so adding new (a, b, c) combinations never perturbs
// the streams of existing ones.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                           std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = splitmix64(master ^ 0x5851f42d4c957f2dull);
  s = splitmix64(s ^ splitmix64(a + 0x14057b7ef767814full));
  s = splitmix64(s ^ splitmix64(b + 0x27d4eb2f165667c5ull));
  s = splitmix64(s ^ splitmix64(c + 0x9e3779b97f4a7c15ull));
  return s;
}

// Source of randomness for the simulation kernels. Virtual so tests can
// substitute recorded tapes for the real stream.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual double uniform() = 0;  // in [0, 1)
  virtual double normal() = 0;   // standard normal
};

// mt19937_64-backed stream. uniform() and normal() are built here from raw
// engine words (53-bit mantissa scaling, Box-Muller) instead of the standard
// distributions, whose output sequences are implementation-defined.
class RandomStream final : public RandomSource {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform() override { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() override {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace aconet
