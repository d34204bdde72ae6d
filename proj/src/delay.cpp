#include "hyfso/delay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyfso/rng.hpp"

namespace hyfso {

QueueState QueueState::make(std::vector<double> q_max, bool track_age) {
  QueueState s;
  s.q.assign(q_max.size(), 0.0);
  s.q_max = std::move(q_max);
  s.track_age = track_age;
  if (track_age) s.ledger.resize(s.q.size());
  return s;
}

void QueueState::fill(const std::vector<double>& q0) {
  if (q0.size() != q.size())
    throw std::invalid_argument("queue fill: size mismatch");
  for (std::size_t m = 0; m < q.size(); ++m) {
    if (q0[m] < 0.0 || q0[m] > q_max[m])
      throw std::invalid_argument("queue fill: level outside [0, q_max]");
    q[m] = q0[m];
    if (track_age) {
      ledger[m].clear();
      if (q0[m] > 0.0) ledger[m].push_back({q0[m], 0});
    }
  }
}

double QueueState::mean_bit_delay() const {
  return departed_bits > 0.0 ? delayed_bit_slots / departed_bits : 0.0;
}

BaMetrics modified_metrics(const CapacityMatrix& c, const BaWeights& w,
                           const QueueState& q, bool literal_tx_rf) {
  if (q.q.size() != static_cast<std::size_t>(c.relay_count))
    throw std::invalid_argument("queue state: size != relay_count");
  const int m_count = c.relay_count;
  BaMetrics out;
  out.fso_rx.resize(m_count);
  out.fso_tx.resize(m_count);
  out.rf_rx.resize(m_count);
  out.rf_tx.resize(m_count);
  for (int m = 0; m < m_count; ++m) {
    const double lam = w.lambda[m];
    const double headroom = q.q_max[m] - q.q[m];
    const double content = q.q[m];
    out.fso_rx[m] = lam * std::min(c.fso[0][m], headroom);
    out.fso_tx[m] = (1.0 - lam) * std::min(c.fso[1][m], content);
    out.rf_rx[m] = lam * std::min(c.rf[0][m], headroom);
    const double rf_tx_cap = literal_tx_rf ? c.rf[0][m] : c.rf[1][m];
    out.rf_tx[m] = (1.0 - lam) * std::min(rf_tx_cap, content);
  }
  return out;
}

BaDecision select_delay_ba(const CapacityMatrix& c, const BaWeights& w,
                           const QueueState& q, bool literal_tx_rf) {
  return select_from_metrics(modified_metrics(c, w, q, literal_tx_rf));
}

namespace {

// Oldest bits leave first; their waiting time is charged by bit count.
// full_drain empties the run list outright: the scalar level and the piece
// sum round differently over time, and a complete drain is the natural
// resync point.
void drain_ledger(QueueState& q, int m, double out, long slot,
                  bool full_drain) {
  auto& runs = q.ledger[m];
  if (full_drain) {
    for (const auto& [bits, born] : runs)
      q.delayed_bit_slots += bits * static_cast<double>(slot - born);
    runs.clear();
    return;
  }
  double remaining = out;
  while (remaining > 0.0 && !runs.empty()) {
    auto& [bits, born] = runs.front();
    const double taken = std::min(bits, remaining);
    q.delayed_bit_slots += taken * static_cast<double>(slot - born);
    remaining -= taken;
    bits -= taken;
    if (bits <= 0.0) runs.pop_front();
  }
}

}  // namespace

SlotFlows step_queue(QueueState& q, const BaDecision& d,
                     const CapacityMatrix& c, long slot) {
  const int m_count = c.relay_count;
  SlotFlows flows;
  flows.r1.assign(m_count, 0.0);
  flows.r2.assign(m_count, 0.0);
  for (int m = 0; m < m_count; ++m) {
    double in_cap = 0.0, out_cap = 0.0;
    if (d.fso_rx == m) in_cap += c.fso[0][m];
    if (d.rf_dir == 0 && d.rf_relay == m) in_cap += c.rf[0][m];
    if (d.fso_tx == m) out_cap += c.fso[1][m];
    if (d.rf_dir == 1 && d.rf_relay == m) out_cap += c.rf[1][m];

    // Both clips read the pre-slot level.
    const bool full_drain = out_cap >= q.q[m];
    const double out = full_drain ? q.q[m] : out_cap;
    const double in = std::min(in_cap, q.q_max[m] - q.q[m]);
    q.q[m] = std::min(q.q[m] - out + in, q.q_max[m]);
    if (q.q[m] < 0.0) q.q[m] = 0.0;

    if (q.track_age) {
      drain_ledger(q, m, out, slot, full_drain);
      if (in > 0.0) q.ledger[m].push_back({in, slot});
      q.departed_bits += out;
    }
    flows.r1[m] = in;
    flows.r2[m] = out;
  }
  return flows;
}

DelayRunResult run_delay_ba_on_stream(const std::vector<CapacityMatrix>& stream,
                                      const BaWeights& w,
                                      const std::vector<double>& q_max,
                                      const DelayOptions& opts) {
  const int m_count = static_cast<int>(q_max.size());
  QueueState q = QueueState::make(q_max, opts.track_age);
  if (!opts.initial_q.empty()) q.fill(opts.initial_q);

  DelayRunResult res;
  res.mean_q.assign(m_count, 0.0);
  res.mean_r1.assign(m_count, 0.0);
  res.mean_r2.assign(m_count, 0.0);

  long slot = 0;
  for (const CapacityMatrix& c : stream) {
    ++slot;
    const BaDecision d = select_delay_ba(c, w, q, opts.literal_tx_rf);
    const SlotFlows f = step_queue(q, d, c, slot);
    for (int m = 0; m < m_count; ++m) {
      res.mean_q[m] += q.q[m];
      res.mean_r1[m] += f.r1[m];
      res.mean_r2[m] += f.r2[m];
    }
  }

  const double slots = static_cast<double>(stream.size());
  double total_q = 0.0, total_r1 = 0.0, total_r2 = 0.0;
  if (slot > 0) {
    for (int m = 0; m < m_count; ++m) {
      res.mean_q[m] /= slots;
      res.mean_r1[m] /= slots;
      res.mean_r2[m] /= slots;
      total_q += res.mean_q[m];
      total_r1 += res.mean_r1[m];
      total_r2 += res.mean_r2[m];
    }
  }
  res.throughput = total_r2;
  res.delay_defined = total_r1 > 0.0;
  res.little_delay = res.delay_defined ? total_q / total_r1 : 0.0;
  res.fifo_delay = q.mean_bit_delay();
  res.final_state = std::move(q);
  return res;
}

DelayRunResult run_delay_ba(const NetworkConfig& cfg, const BaWeights& w,
                            const std::vector<double>& q_max, long slots,
                            const DelayOptions& opts, std::uint64_t seed_salt) {
  Rng rng(derive_seed(cfg.seed, {kEvalStreamSalt, seed_salt}));
  return run_delay_ba_on_stream(capacity_stream(cfg, slots, rng), w, q_max,
                                opts);
}

}  // namespace hyfso
