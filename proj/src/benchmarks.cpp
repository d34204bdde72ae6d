#include "hyfso/benchmarks.hpp"

#include <algorithm>

namespace hyfso {

double nonba_maxmin_fso(const CapacityMatrix& c) {
  double best = 0.0;
  for (int m = 0; m < c.relay_count; ++m)
    best = std::max(best, std::min(c.fso[0][m], c.fso[1][m]));
  return best;
}

double nonba_independent(const CapacityMatrix& c) {
  double rf = 0.0;
  for (int n = 0; n < c.relay_count; ++n)
    rf = std::max(rf, 0.5 * std::min(c.rf[0][n], c.rf[1][n]));
  return nonba_maxmin_fso(c) + rf;
}

GreedyStep greedy_step(GreedyState& s, const std::vector<double>& rx_cap,
                       const std::vector<double>& tx_cap) {
  const int m_count = static_cast<int>(s.q.size());
  GreedyStep step;
  double best = -1.0;
  for (int m = 0; m < m_count; ++m) {
    const double amount = std::min(rx_cap[m], s.q_max - s.q[m]);
    if (amount > best) {
      best = amount;
      step = {false, m, amount, 0.0};
    }
  }
  for (int m = 0; m < m_count; ++m) {
    const double amount = std::min(tx_cap[m], s.q[m]);
    if (amount > best) {
      best = amount;
      step = {true, m, amount, amount};
    }
  }
  if (step.tx)
    s.q[step.relay] -= step.moved;
  else
    s.q[step.relay] = std::min(s.q[step.relay] + step.moved, s.q_max);
  return step;
}

double ba_best_fso_rate(const std::vector<CapacityMatrix>& stream,
                        double q_max) {
  if (stream.empty()) return 0.0;
  GreedyState s(stream.front().relay_count, q_max);
  double delivered = 0.0;
  for (const CapacityMatrix& c : stream)
    delivered += greedy_step(s, c.fso[0], c.fso[1]).delivered;
  return delivered / static_cast<double>(stream.size());
}

double ba_independent_rate(const std::vector<CapacityMatrix>& stream,
                           double q_max) {
  if (stream.empty()) return 0.0;
  const int m_count = stream.front().relay_count;
  GreedyState fso(m_count, q_max);
  GreedyState rf(m_count, q_max);
  double delivered = 0.0;
  for (const CapacityMatrix& c : stream) {
    delivered += greedy_step(fso, c.fso[0], c.fso[1]).delivered;
    delivered += greedy_step(rf, c.rf[0], c.rf[1]).delivered;
  }
  return delivered / static_cast<double>(stream.size());
}

}  // namespace hyfso
