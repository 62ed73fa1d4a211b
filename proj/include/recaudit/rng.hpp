#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace recaudit {

// Deterministic random stream. The raw generator is std::mt19937_64, whose
// output sequence is fixed by the standard; every transform below is
// implemented here instead of relying on <random> distributions, whose
// algorithms differ between standard libraries. Given a seed, the draw
// sequence is reproducible.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, n). n must be positive.
  uint64_t uniform_int(uint64_t n);

  // Standard normal (Box-Muller).
  double normal();

  // Poisson count with the given mean (Knuth product method, chunked so the
  // exp() threshold never underflows).
  int poisson(double mean);

  // Unit-scale gamma draw (Marsaglia-Tsang; shape < 1 via boost).
  double gamma(double shape);

  // Symmetric Dirichlet with concentration `conc` written into `out`.
  void dirichlet(double conc, std::span<double> out);

 private:
  std::mt19937_64 gen_;
};

// Stable seed for a named component, mixed from the run-wide master seed.
// Hashing the name keeps components decoupled: consuming more draws in one
// never shifts another's stream.
uint64_t derive_seed(uint64_t master, std::string_view component);

}  // namespace recaudit
