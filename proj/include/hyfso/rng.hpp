#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hyfso {

// One splitmix64 step. Used for seed derivation, not for sampling.
uint64_t splitmix64_next(uint64_t& state);

// Child seed from a base seed and a path of indices. Order-sensitive:
// derive_seed(s, {a, b}) != derive_seed(s, {b, a}).
uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> path);

// Sampler stack on top of mt19937_64. std::*_distribution output is
// implementation-defined, so every transform is done by hand: the same seed
// must produce bit-identical realizations on any conforming toolchain.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // Uniform on (0,1); never returns 0 or 1 exactly.
  double uniform01();

  // Standard normal via Box-Muller. Consumes exactly two uniforms per call
  // and keeps no cached spare, so the draw count stays predictable.
  double normal();

  // Gamma(shape, scale 1) via Marsaglia-Tsang; shape < 1 boosted from
  // shape + 1 with a U^(1/shape) factor.
  double gamma(double shape);

  // Product of two independent unit-mean Gammas with the given shapes.
  // E = 1, Var = 1/a + 1/b + 1/(a*b).
  double gamma_gamma(double shape_a, double shape_b);

  // |mu + s*(Z1 + i*Z2)| with mu = sqrt(power*k/(1+k)),
  // s = sqrt(power/(2*(1+k))). E[mag^2] = power.
  double rician_mag(double k_factor, double power);

  uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hyfso
