#include "hyfso/distributed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hyfso {

namespace {

constexpr const char* kNonBaNames[5] = {"hyb", "fso", "rf", "mix1", "mix2"};
constexpr const char* kBaNames[3] = {"fso1", "fso2", "rf"};

double expiry_of(double metric, double eta) {
  return metric > 0.0 ? eta / metric
                      : std::numeric_limits<double>::infinity();
}

void sort_events(std::vector<TimerFiring>& events) {
  std::sort(events.begin(), events.end(),
            [](const TimerFiring& a, const TimerFiring& b) {
              if (a.expiry != b.expiry) return a.expiry < b.expiry;
              if (a.relay != b.relay) return a.relay < b.relay;
              return a.timer_class < b.timer_class;
            });
}

// Winner of one class: largest metric, lowest relay on ties. A class whose
// metrics are all zero stays silent; the winner is pinned to relay 0 with
// metric 0 so reconstruction arithmetic stays total.
std::pair<int, double> class_winner(const std::vector<double>& metric) {
  int relay = 0;
  double best = metric[0];
  for (int m = 1; m < static_cast<int>(metric.size()); ++m)
    if (metric[m] > best) {
      best = metric[m];
      relay = m;
    }
  if (best <= 0.0) return {0, 0.0};
  return {relay, best};
}

}  // namespace

std::string event_log(const std::vector<TimerFiring>& events) {
  std::ostringstream out;
  out.precision(12);
  for (const TimerFiring& e : events) {
    // Bufferless-protocol beacons carry rf_dir -1; buffer-aided ones 0/1.
    const bool bufferless = e.rf_dir < 0;
    const char* name =
        bufferless ? kNonBaNames[e.timer_class] : kBaNames[e.timer_class];
    out << "t=" << e.expiry << " relay " << (e.relay + 1) << " class " << name;
    if (!bufferless && e.timer_class == 2)
      out << " dir " << (e.rf_dir == 0 ? "rx" : "tx");
    out << "\n";
  }
  return out.str();
}

DistributedNonBaResult run_distributed_nonba(const CapacityMatrix& c,
                                             double eta) {
  const int m_count = c.relay_count;
  std::array<std::vector<double>, 5> metric;
  for (auto& v : metric) v.resize(m_count);
  for (int m = 0; m < m_count; ++m) {
    metric[0][m] = hybrid_rate(c, m).tau;
    metric[1][m] = std::min(c.fso[0][m], c.fso[1][m]);
    const double c1r = c.rf[0][m], c2r = c.rf[1][m];
    metric[2][m] = c1r + c2r > 0.0 ? c1r * c2r / (c1r + c2r) : 0.0;
    metric[3][m] = std::min(c.fso[0][m], c.rf[1][m]);
    metric[4][m] = std::min(c.rf[0][m], c.fso[1][m]);
  }

  DistributedNonBaResult res;
  for (int z = 0; z < 5; ++z) {
    const auto [relay, tau] = class_winner(metric[z]);
    res.class_relay[z] = relay;
    res.class_tau[z] = tau;
    if (tau > 0.0) {
      // rf_dir -1 marks bufferless-protocol beacons for the log.
      res.events.push_back({expiry_of(tau, eta), relay, z, -1});
    }
  }
  sort_events(res.events);

  const double hyb_star = res.class_tau[0];
  const double ind_star = res.class_tau[1] + res.class_tau[2];
  const double mix_est = res.class_tau[3] + res.class_tau[4];
  const int hyb_m = res.class_relay[0];
  const int ind_m = res.class_relay[1], ind_n = res.class_relay[2];
  const int mix_m = res.class_relay[3], mix_n = res.class_relay[4];

  SelectionDecision& d = res.decision;
  if (ind_star > hyb_star && ind_star >= mix_est) {
    d.mode = SlotMode::kIndependent;
    d.alpha[0] = d.alpha[1] = ind_m;
    d.beta[0] = d.beta[1] = ind_n;
    d.rho1 = independent_rate(c, ind_m, ind_n).rho1;
  } else if (mix_est > hyb_star && mix_est > ind_star) {
    d.mode = SlotMode::kMixed;
    d.alpha[0] = mix_m;
    d.alpha[1] = mix_n;
    d.beta[0] = mix_n;
    d.beta[1] = mix_m;
    const double c2f = c.fso[1][mix_n], c1r = c.rf[0][mix_n];
    if (c2f == 0.0)
      d.rho1 = 0.0;
    else if (c1r == 0.0)
      d.rho1 = 1.0;
    else
      d.rho1 = std::min(1.0, c2f / c1r);
    res.mixed_divergence =
        mix_m == mix_n || mixed_rate(c, mix_m, mix_n).tau == 0.0;
  } else {
    d.mode = SlotMode::kHybrid;
    d.alpha[0] = d.alpha[1] = hyb_m;
    d.beta[0] = d.beta[1] = hyb_m;
    d.rho1 = hybrid_rate(c, hyb_m).rho1;
  }
  fill_relay_rates(c, d);
  return res;
}

DistributedBaResult run_distributed_ba(const CapacityMatrix& c,
                                       const BaWeights& w, double eta) {
  const BaMetrics m = selection_metrics(c, w);
  const int m_count = c.relay_count;

  // Per-relay local RF direction: better metric, receive on ties.
  std::vector<double> rf_local(m_count);
  std::vector<int> rf_dir(m_count);
  for (int i = 0; i < m_count; ++i) {
    rf_dir[i] = m.rf_tx[i] > m.rf_rx[i] ? 1 : 0;
    rf_local[i] = std::max(m.rf_rx[i], m.rf_tx[i]);
  }

  DistributedBaResult res;
  const auto [rx_relay, rx_tau] = class_winner(m.fso_rx);
  const auto [tx_relay, tx_tau] = class_winner(m.fso_tx);
  const auto [rf_relay, rf_tau] = class_winner(rf_local);
  res.decision.fso_rx = rx_relay;
  res.decision.fso_tx = tx_relay;
  res.decision.rf_relay = rf_relay;
  res.decision.rf_dir = rf_tau > 0.0 ? rf_dir[rf_relay] : 0;

  if (rx_tau > 0.0)
    res.events.push_back({expiry_of(rx_tau, eta), rx_relay, 0, 0});
  if (tx_tau > 0.0)
    res.events.push_back({expiry_of(tx_tau, eta), tx_relay, 1, 0});
  if (rf_tau > 0.0)
    res.events.push_back(
        {expiry_of(rf_tau, eta), rf_relay, 2, res.decision.rf_dir});
  sort_events(res.events);
  return res;
}

}  // namespace hyfso
