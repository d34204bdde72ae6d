#pragma once

#include <limits>
#include <vector>

#include "hyfso/channels.hpp"

namespace hyfso {

// Comparison schemes. The bufferless ones are closed-form per slot; the
// buffer-aided ones are greedy single-link selectors with their own relay
// buffers (unbounded by default, matching delay-unconstrained comparisons).

// Best single-relay FSO bottleneck: max over relays of min(hop 1, hop 2).
double nonba_maxmin_fso(const CapacityMatrix& c);

// FSO bottleneck relay plus an independently chosen RF relay whose half-slot
// rates are max-min combined: max_n min(C1rf/2, C2rf/2).
double nonba_independent(const CapacityMatrix& c);

struct GreedyState {
  std::vector<double> q;  // buffered bits per relay
  double q_max = std::numeric_limits<double>::infinity();

  explicit GreedyState(int relay_count = 0,
                       double q_max_in =
                           std::numeric_limits<double>::infinity())
      : q(relay_count, 0.0), q_max(q_max_in) {}
};

struct GreedyStep {
  bool tx = false;  // false: source-to-relay link, true: relay-to-destination
  int relay = 0;
  double moved = 0.0;      // bits moved over the chosen link
  double delivered = 0.0;  // bits that reached the destination (tx only)
};

// Activates the one link with the largest deliverable amount this slot:
// rx links can move min(capacity, buffer headroom), tx links min(capacity,
// buffer content). Ties go to rx before tx, then the lowest relay. Updates
// the chosen relay's buffer.
GreedyStep greedy_step(GreedyState& s, const std::vector<double>& rx_cap,
                       const std::vector<double>& tx_cap);

// Mean bits delivered per slot by the greedy selector run over the FSO links
// only, and over FSO and RF link sets independently (one link from each set
// per slot, RF at full-slot capacity, separate buffers per set).
double ba_best_fso_rate(const std::vector<CapacityMatrix>& stream,
                        double q_max = std::numeric_limits<double>::infinity());
double ba_independent_rate(
    const std::vector<CapacityMatrix>& stream,
    double q_max = std::numeric_limits<double>::infinity());

}  // namespace hyfso
