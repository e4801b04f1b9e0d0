#pragma once

#include <cstdint>
#include <random>

namespace uq {

/// Seeded random source shared by samplers and data generators. Thin wrapper
/// over mt19937_64 so all draw paths go through one place.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return uni_(gen_); }             // U(0,1)
  double normal() { return normal_(gen_); }           // N(0,1)
  double gamma(double shape) {                        // Gamma(shape, 1)
    std::gamma_distribution<double> d(shape, 1.0);
    return d(gen_);
  }
  std::uint64_t integer(std::uint64_t bound) {        // uniform in [0, bound)
    std::uniform_int_distribution<std::uint64_t> d(0, bound - 1);
    return d(gen_);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> uni_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace uq
