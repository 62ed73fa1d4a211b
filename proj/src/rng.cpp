#include "recaudit/rng.hpp"

#include <cmath>

namespace recaudit {

uint64_t Rng::uniform_int(uint64_t n) {
  // Reject draws below 2^64 mod n so the modulo is unbiased.
  const uint64_t threshold = (0 - n) % n;
  for (;;) {
    uint64_t x = next();
    if (x >= threshold) return x % n;
  }
}

double Rng::normal() {
  double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int Rng::poisson(double mean) {
  int total = 0;
  while (mean > 0) {
    double chunk = mean < 500.0 ? mean : 500.0;
    mean -= chunk;
    double limit = std::exp(-chunk);
    double prod = 1.0;
    int k = 0;
    do {
      ++k;
      prod *= uniform();
    } while (prod > limit);
    total += k - 1;
  }
  return total;
}

double Rng::gamma(double shape) {
  if (shape < 1.0) {
    double u = uniform();
    while (u == 0.0) u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

void Rng::dirichlet(double conc, std::span<double> out) {
  double sum = 0.0;
  for (double& x : out) {
    x = gamma(conc);
    sum += x;
  }
  if (sum <= 0.0) {
    double flat = 1.0 / static_cast<double>(out.size());
    for (double& x : out) x = flat;
    return;
  }
  for (double& x : out) x /= sum;
}

uint64_t derive_seed(uint64_t master, std::string_view component) {
  // FNV-1a over the component name, then a splitmix64 finalizer.
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : component) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  uint64_t z = master ^ h;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace recaudit
