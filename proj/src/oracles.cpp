#include "hyfso/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyfso/buffered.hpp"

namespace hyfso {

namespace {

// Output mixture density of the binary {0, p} input at unit noise.
double mix_pdf(double y, double p) {
  const double c = 1.0 / std::sqrt(2.0 * M_PI);
  double d0 = y;
  double d1 = y - p;
  return 0.5 * c * (std::exp(-0.5 * d0 * d0) + std::exp(-0.5 * d1 * d1));
}

}  // namespace

double ook_mi_oracle(double ratio, int intervals) {
  if (ratio < 0) throw std::invalid_argument("ook_mi_oracle: ratio must be >= 0");
  if (ratio == 0.0) return 0.0;
  if (intervals % 2 != 0) ++intervals;
  // 14 sigma of padding keeps the truncated tail below 1e-40.
  const double lo = -14.0;
  const double hi = ratio + 14.0;
  const double h = (hi - lo) / intervals;
  auto integrand = [&](double y) {
    double f = mix_pdf(y, ratio);
    if (f < 1e-300) return 0.0;
    return -f * std::log2(f);
  };
  double acc = integrand(lo) + integrand(hi);
  for (int i = 1; i < intervals; ++i) {
    acc += integrand(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  double h_out = acc * h / 3.0;
  double h_noise = 0.5 * std::log2(2.0 * M_PI * std::exp(1.0));
  return h_out - h_noise;
}

double exhaustive_selection_tau(const CapacityMatrix& c, double rho_step) {
  const int m_count = c.relay_count;
  const int steps = static_cast<int>(std::round(1.0 / rho_step));
  double best = 0.0;
  for (int a1 = 0; a1 < m_count; ++a1) {
    for (int a2 = 0; a2 < m_count; ++a2) {
      for (int b1 = 0; b1 < m_count; ++b1) {
        for (int b2 = 0; b2 < m_count; ++b2) {
          // Involved relays, deduplicated; everyone else contributes 0.
          int set[4];
          int n = 0;
          for (int r : {a1, a2, b1, b2}) {
            bool seen = false;
            for (int k = 0; k < n; ++k) seen = seen || set[k] == r;
            if (!seen) set[n++] = r;
          }
          // Per relay: min(A + B*rho, C + D*(1-rho)).
          double A[4], B[4], C[4], D[4];
          for (int k = 0; k < n; ++k) {
            int m = set[k];
            A[k] = (a1 == m) ? c.fso[0][m] : 0.0;
            B[k] = (b1 == m) ? c.rf[0][m] : 0.0;
            C[k] = (a2 == m) ? c.fso[1][m] : 0.0;
            D[k] = (b2 == m) ? c.rf[1][m] : 0.0;
          }
          for (int s = 0; s <= steps; ++s) {
            double rho = static_cast<double>(s) / steps;
            double tau = 0.0;
            for (int k = 0; k < n; ++k) {
              tau += std::min(A[k] + B[k] * rho, C[k] + D[k] * (1.0 - rho));
            }
            best = std::max(best, tau);
          }
        }
      }
    }
  }
  return best;
}

LambdaGridPoint lambda_grid_search(const std::vector<CapacityMatrix>& stream,
                                   double step) {
  if (stream.empty()) return {};
  const int m_count = stream.front().relay_count;
  const int points = static_cast<int>(std::lround(1.0 / step));
  LambdaGridPoint best;
  best.tau = -1.0;
  for (int i = 0; i <= points; ++i) {
    const double lam = static_cast<double>(i) / points;
    const double tau =
        ba_throughput_on_stream(stream, BaWeights::uniform(m_count, lam));
    if (tau > best.tau) {
      best.tau = tau;
      best.lambda = lam;
    }
  }
  return best;
}

}  // namespace hyfso
