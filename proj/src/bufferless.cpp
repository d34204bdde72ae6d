#include "hyfso/bufferless.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyfso {

// min(inflow, outflow) per relay for an assembled decision; also fixes
// tau = sum so the decomposition invariant holds exactly.
void fill_relay_rates(const CapacityMatrix& c, SelectionDecision& d) {
  d.relay_rates.assign(c.relay_count, 0.0);
  double total = 0.0;
  for (int m = 0; m < c.relay_count; ++m) {
    double in = (d.alpha[0] == m ? c.fso[0][m] : 0.0) +
                d.rho1 * (d.beta[0] == m ? c.rf[0][m] : 0.0);
    double out = (d.alpha[1] == m ? c.fso[1][m] : 0.0) +
                 (1.0 - d.rho1) * (d.beta[1] == m ? c.rf[1][m] : 0.0);
    d.relay_rates[m] = std::min(in, out);
    total += d.relay_rates[m];
  }
  d.tau = total;
}

RatePoint hybrid_rate(const CapacityMatrix& c, int m) {
  double c1f = c.fso[0][m], c2f = c.fso[1][m];
  double c1r = c.rf[0][m], c2r = c.rf[1][m];
  RatePoint r;
  if (c1r + c2r == 0.0) {
    r.tau = std::min(c1f, c2f);
    r.rho1 = 0.0;
    return r;
  }
  r.rho1 = std::clamp((c2f + c2r - c1f) / (c1r + c2r), 0.0, 1.0);
  r.tau = std::min(c1f + r.rho1 * c1r, c2f + (1.0 - r.rho1) * c2r);
  return r;
}

RatePoint independent_rate(const CapacityMatrix& c, int m, int n) {
  double c1r = c.rf[0][n], c2r = c.rf[1][n];
  RatePoint r;
  r.tau = std::min(c.fso[0][m], c.fso[1][m]);
  if (c1r + c2r > 0.0) {
    r.tau += c1r * c2r / (c1r + c2r);
    r.rho1 = c2r / (c1r + c2r);
  }
  return r;
}

RatePoint mixed_rate(const CapacityMatrix& c, int m, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  double c1f = c.fso[0][m], c2r = c.rf[1][m];
  double c2f = c.fso[1][n], c1r = c.rf[0][n];
  double t1 = c2f == 0.0 ? 0.0 : (c1r == 0.0 ? inf : c2f / c1r);
  double t2 = c1f == 0.0 ? 0.0 : (c2r == 0.0 ? inf : c1f / c2r);
  RatePoint r;
  if (t1 + t2 <= 1.0) {
    r.tau = c1f + c2f;
    r.rho1 = t1;
  }
  return r;
}

RatePoint mixed_rate_best(const CapacityMatrix& c, int m, int n) {
  // Fully loaded configuration when feasible: bit-identical to mixed_rate,
  // including the conventional rho1.
  RatePoint full = mixed_rate(c, m, n);
  double a = c.fso[0][m], d = c.rf[1][m];
  double b = c.rf[0][n], e = c.fso[1][n];
  if (full.tau > 0.0 || (a == 0.0 && e == 0.0)) return full;
  // Otherwise the concave split objective peaks on one of its breakpoints.
  auto value = [&](double rho) {
    return std::min(a, (1.0 - rho) * d) + std::min(rho * b, e);
  };
  double cands[4] = {b > 0.0 ? std::clamp(e / b, 0.0, 1.0) : 0.0,
                     d > 0.0 ? std::clamp(1.0 - a / d, 0.0, 1.0) : 0.0, 0.0,
                     1.0};
  RatePoint r;
  r.rho1 = cands[0];
  r.tau = value(cands[0]);
  for (int i = 1; i < 4; ++i) {
    double v = value(cands[i]);
    if (v > r.tau) {
      r.tau = v;
      r.rho1 = cands[i];
    }
  }
  return r;
}

SelectionDecision select_bufferless(const CapacityMatrix& c) {
  const int M = c.relay_count;

  // Case 1: best single-relay hybrid.
  int hyb_m = 0;
  RatePoint hyb = hybrid_rate(c, 0);
  for (int m = 1; m < M; ++m) {
    RatePoint r = hybrid_rate(c, m);
    if (r.tau > hyb.tau) {
      hyb = r;
      hyb_m = m;
    }
  }

  // Case 2: the two terms maximize independently.
  auto rf_harmonic = [&c](int n) {
    double c1r = c.rf[0][n], c2r = c.rf[1][n];
    return c1r + c2r > 0.0 ? c1r * c2r / (c1r + c2r) : 0.0;
  };
  int ind_m = 0, ind_n = 0;
  double best_fso = std::min(c.fso[0][0], c.fso[1][0]);
  double best_rf = rf_harmonic(0);
  for (int m = 1; m < M; ++m) {
    double v = std::min(c.fso[0][m], c.fso[1][m]);
    if (v > best_fso) {
      best_fso = v;
      ind_m = m;
    }
  }
  for (int n = 1; n < M; ++n) {
    double v = rf_harmonic(n);
    if (v > best_rf) {
      best_rf = v;
      ind_n = n;
    }
  }
  RatePoint ind = independent_rate(c, ind_m, ind_n);

  // Case 3: best disjoint pair, scored at its exact split optimum so the
  // selection stays optimal when a pair can only be partially loaded
  // (absent for M = 1).
  int mix_m = -1, mix_n = -1;
  RatePoint mix;
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < M; ++n) {
      if (m == n) continue;
      RatePoint r = mixed_rate_best(c, m, n);
      if (r.tau > mix.tau) {
        mix = r;
        mix_m = m;
        mix_n = n;
      }
    }
  }

  SelectionDecision d;
  if (ind.tau > hyb.tau && ind.tau >= mix.tau) {
    d.mode = SlotMode::kIndependent;
    d.alpha[0] = d.alpha[1] = ind_m;
    d.beta[0] = d.beta[1] = ind_n;
    d.rho1 = ind.rho1;
  } else if (mix_m >= 0 && mix.tau > hyb.tau && mix.tau > ind.tau) {
    d.mode = SlotMode::kMixed;
    d.alpha[0] = mix_m;
    d.alpha[1] = mix_n;
    d.beta[0] = mix_n;
    d.beta[1] = mix_m;
    d.rho1 = mix.rho1;
  } else {
    d.mode = SlotMode::kHybrid;
    d.alpha[0] = d.alpha[1] = hyb_m;
    d.beta[0] = d.beta[1] = hyb_m;
    d.rho1 = hyb.rho1;
  }
  fill_relay_rates(c, d);
  return d;
}

}  // namespace hyfso
