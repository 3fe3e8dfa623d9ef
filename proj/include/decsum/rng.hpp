#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace decsum {

// Seeded generator used by all samplers. Doubles are built from raw
// mt19937_64 output so sequences do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // [0, 1)
  double uniform() { return double(gen_() >> 11) * kInv53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Draw an index proportional to unnormalized non-negative weights.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("categorical: zero total mass");
    double u = uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0.0) last_positive = i;
      acc += weights[i];
      if (u < acc) return i;
    }
    return last_positive;  // fp round-off fell past the end
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  static constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
  std::mt19937_64 gen_;
};

}  // namespace decsum
