#pragma once

#include <array>
#include <string>
#include <vector>

#include "hyfso/buffered.hpp"
#include "hyfso/bufferless.hpp"
#include "hyfso/channels.hpp"

namespace hyfso {

// Timer-and-beacon selection: every relay arms one countdown per class from
// its own link knowledge, expiry = eta / metric, so the largest metric fires
// first and silences the class. The beacon medium is ideal (no collisions,
// zero propagation delay). A zero metric means the timer never fires.
//
// Winners are resolved on the metric values themselves rather than the
// rounded reciprocals: the reciprocal map is strictly monotone, so the two
// orders agree except when distinct metrics collapse to one expiry double.
// Metric ties fall to the lowest relay index, matching the event order
// (expiry, relay, class).

// Bufferless protocol classes: single-relay hybrid, the two halves of the
// independent mode, and the two halves of the mixed mode.
enum class NonBaTimer { kHyb = 0, kFso = 1, kRf = 2, kMix1 = 3, kMix2 = 4 };
// Buffer-aided classes: FSO receive, FSO transmit, RF either direction.
enum class BaTimer { kFso1 = 0, kFso2 = 1, kRf = 2 };

struct TimerFiring {
  double expiry = 0.0;  // eta / metric, seconds
  int relay = 0;
  int timer_class = 0;
  // RF beacon payload in the buffer-aided protocol (0 rx, 1 tx);
  // -1 marks bufferless-protocol beacons, which carry no direction.
  int rf_dir = 0;
};

// Beacons actually emitted, in firing order.
std::string event_log(const std::vector<TimerFiring>& events);

struct DistributedNonBaResult {
  SelectionDecision decision;

  // Winning metric and relay per timer class (metric 0 = class silent,
  // relay pinned to 0).
  std::array<double, 5> class_tau{};
  std::array<int, 5> class_relay{};

  // The mixed-mode reconstruction sums two independently maximized halves,
  // which can overstate what the winning pair can jointly carry. Set when
  // the mixed mode wins with a pair that is not jointly loadable as
  // reconstructed: both halves on one relay, or a split budget over 1.
  bool mixed_divergence = false;

  std::vector<TimerFiring> events;
};

DistributedNonBaResult run_distributed_nonba(const CapacityMatrix& c,
                                             double eta = 1.0);

struct DistributedBaResult {
  BaDecision decision;
  std::vector<TimerFiring> events;
};

DistributedBaResult run_distributed_ba(const CapacityMatrix& c,
                                       const BaWeights& w, double eta = 1.0);

}  // namespace hyfso
