#include "sglab/perturb.hpp"

#include <cmath>
#include <random>

#include "sglab/numerics.hpp"

namespace sg {

namespace {

// Uniform in [0,1) from the raw engine output; avoids distribution objects,
// whose streams differ between standard library implementations.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Field bumps(const Grid& g, std::mt19937_64& rng, bool even) {
  Field f(g);
  for (int b = 0; b < 5; ++b) {
    const double c = -10.0 + 20.0 * unit(rng);
    const double s = 0.5 + 1.5 * unit(rng);
    const double a = 2.0 * unit(rng) - 1.0;
    for (int i = 0; i < g.n; ++i) {
      const double x = g.node(i);
      double v = a * std::exp(-0.5 * (x - c) * (x - c) / (s * s));
      if (even) {
        v += a * std::exp(-0.5 * (x + c) * (x + c) / (s * s));
        v *= 0.5;
      }
      f[i] += v;
    }
  }
  return f;
}

}  // namespace

FieldPair random_bump_pair(const Grid& g, double eta, std::uint64_t seed, bool even) {
  std::mt19937_64 rng(seed);
  FieldPair p(bumps(g, rng, even), bumps(g, rng, even));
  const double norm = energy_norm(p);
  if (norm == 0.0) return p;
  return (eta / norm) * p;
}

}  // namespace sg
