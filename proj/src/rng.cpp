#include "hyfso/rng.hpp"

#include <cmath>

namespace hyfso {

uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> path) {
  uint64_t s = base;
  for (uint64_t p : path) {
    s ^= splitmix64_next(p) + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    uint64_t st = s;
    s = splitmix64_next(st);
  }
  return s;
}

double Rng::uniform01() {
  // 53 high bits, offset by half an ulp so 0 and 1 are unreachable.
  return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform01();
  double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double shape) {
  if (shape < 1.0) {
    double u = uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = uniform01();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::gamma_gamma(double shape_a, double shape_b) {
  return (gamma(shape_a) / shape_a) * (gamma(shape_b) / shape_b);
}

double Rng::rician_mag(double k_factor, double power) {
  double mu = std::sqrt(power * k_factor / (1.0 + k_factor));
  double s = std::sqrt(power / (2.0 * (1.0 + k_factor)));
  double re = mu + s * normal();
  double im = s * normal();
  return std::sqrt(re * re + im * im);
}

}  // namespace hyfso
