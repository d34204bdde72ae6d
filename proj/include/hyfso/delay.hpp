#pragma once

#include <deque>
#include <utility>
#include <vector>

#include "hyfso/buffered.hpp"
#include "hyfso/channels.hpp"

namespace hyfso {

// Slot duration is normalized to 1 s throughout, so a capacity in bit/s is
// also the bits movable in one slot and buffer levels are plain bits.

// Finite relay buffers, optionally with a FIFO age ledger per relay that
// tracks when each buffered bit arrived (the measured-delay oracle).
struct QueueState {
  std::vector<double> q;      // bits currently buffered, per relay
  std::vector<double> q_max;  // buffer capacity, per relay

  bool track_age = false;
  // Oldest-first (bits, enqueue slot) runs; the bit sum tracks q[m] up to
  // floating-point drift and resyncs exactly whenever a drain empties the
  // buffer.
  std::vector<std::deque<std::pair<double, long>>> ledger;
  double delayed_bit_slots = 0.0;  // sum over departed bits of their age
  double departed_bits = 0.0;

  static QueueState make(std::vector<double> q_max, bool track_age = false);
  // Prefills every queue and, when tracking, stamps the content as having
  // arrived in slot 0.
  void fill(const std::vector<double>& q0);
  double mean_bit_delay() const;  // slots; 0 while nothing has departed
};

// Queue-aware selection metrics: each link's capacity is first clipped by
// what the relay's buffer can actually absorb (rx) or supply (tx), then
// weighted as usual. A full buffer zeroes both rx metrics, an empty one both
// tx metrics; with unbounded buffers this reduces to selection_metrics.
// The printed form of the RF tx metric clips by the *rx*-side RF capacity;
// literal_tx_rf reproduces that reading instead of the symmetric one.
BaMetrics modified_metrics(const CapacityMatrix& c, const BaWeights& w,
                           const QueueState& q, bool literal_tx_rf = false);

BaDecision select_delay_ba(const CapacityMatrix& c, const BaWeights& w,
                           const QueueState& q, bool literal_tx_rf = false);

struct SlotFlows {
  std::vector<double> r1;  // bits accepted into each buffer this slot
  std::vector<double> r2;  // bits delivered onward from each buffer
};

// One slot of queue evolution. Both the departure clip min{cap, Q} and the
// arrival clip min{cap, Q_max - Q} read the same pre-slot Q, then
// Q' = Q - out + in. `slot` stamps the age ledger.
SlotFlows step_queue(QueueState& q, const BaDecision& d,
                     const CapacityMatrix& c, long slot);

struct DelayOptions {
  bool track_age = true;
  bool literal_tx_rf = false;
  std::vector<double> initial_q;  // empty = start with empty buffers
};

struct DelayRunResult {
  double throughput = 0.0;  // mean bits delivered per slot, all relays
  // Mean buffered bits over mean arrival rate, in slots. Undefined (and
  // delay_defined false) when nothing ever arrives.
  double little_delay = 0.0;
  bool delay_defined = false;
  double fifo_delay = 0.0;  // age-ledger mean bit delay, slots

  std::vector<double> mean_q, mean_r1, mean_r2;
  QueueState final_state;
};

DelayRunResult run_delay_ba_on_stream(const std::vector<CapacityMatrix>& stream,
                                      const BaWeights& w,
                                      const std::vector<double>& q_max,
                                      const DelayOptions& opts = {});

// Convenience wrapper drawing `slots` fresh fading realizations. The stream
// seed derivation matches ba_throughput's, so the two entry points compare
// the same channels for a given (cfg.seed, seed_salt).
DelayRunResult run_delay_ba(const NetworkConfig& cfg, const BaWeights& w,
                            const std::vector<double>& q_max, long slots,
                            const DelayOptions& opts = {},
                            std::uint64_t seed_salt = 0);

}  // namespace hyfso
