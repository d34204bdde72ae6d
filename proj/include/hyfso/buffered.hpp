#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hyfso/channels.hpp"
#include "hyfso/rng.hpp"

namespace hyfso {

// Per-relay routing weights for the buffer-aided selector, plus the trace of
// the training run that produced them.
struct BaWeights {
  std::vector<double> lambda;  // one entry per relay, each in [0, 1]

  // Training trace. Untrained weights leave these empty / zero.
  int iterations = 0;
  bool converged = false;
  double eps0 = 0.0;
  std::uint64_t train_seed = 0;
  std::vector<double> residual;  // |mean arrival - mean departure| per relay

  static BaWeights uniform(int relay_count, double value = 0.5);
};

// Weighted link metrics scored by the buffer-aided selector. Index [m] is the
// relay; rx metrics weight arrivals by lambda, tx metrics weight departures by
// (1 - lambda).
struct BaMetrics {
  std::vector<double> fso_rx;  // lambda_m * C^fso_1m
  std::vector<double> fso_tx;  // (1 - lambda_m) * C^fso_2m
  std::vector<double> rf_rx;   // lambda_m * C^rf_1m
  std::vector<double> rf_tx;   // (1 - lambda_m) * C^rf_2m
};

BaMetrics selection_metrics(const CapacityMatrix& c, const BaWeights& w);

// One slot's link activation: one FSO receiver, one FSO transmitter, and the
// RF chain assigned whole to one direction on one relay. rf_dir 0 means the
// RF slot is spent receiving (rho1 = 1), 1 means transmitting (rho1 = 0).
struct BaDecision {
  int fso_rx = 0;
  int fso_tx = 0;
  int rf_relay = 0;
  int rf_dir = 0;

  double rho1() const { return rf_dir == 0 ? 1.0 : 0.0; }
  // Role assignment for the idle RF direction is immaterial to every rate; it
  // is pinned to relay 0 so decisions compare bytewise.
  int beta(int hop) const { return (hop == 0) == (rf_dir == 0) ? rf_relay : 0; }
};

// Argmax of each FSO metric column plus a single RF winner across all 2M RF
// metrics. Ties resolve to the receive direction first, then the lowest relay
// index.
BaDecision select_ba(const CapacityMatrix& c, const BaWeights& w);

// The same argmax structure over caller-supplied metric arrays (the
// queue-aware policy feeds clipped metrics through here).
BaDecision select_from_metrics(const BaMetrics& m);

// Accumulates selected per-relay arrival and departure rates across slots.
// throughput() is the sum over relays of min(mean arrival, mean departure),
// i.e. the stable long-run rate each buffer can sustain.
struct FlowAccumulator {
  std::vector<double> arrival;    // summed selected arrival rate per relay
  std::vector<double> departure;  // summed selected departure rate per relay
  long slots = 0;

  explicit FlowAccumulator(int relay_count = 0)
      : arrival(relay_count, 0.0), departure(relay_count, 0.0) {}

  void add(const CapacityMatrix& c, const BaDecision& d);
  std::vector<double> mean_arrival() const;
  std::vector<double> mean_departure() const;
  double throughput() const;
};

// Stream salts for the cfg-level entry points. Evaluation-style runs share
// kEvalStreamSalt so different policies given the same (cfg.seed, seed_salt)
// see identical channels; training uses its own stream.
inline constexpr std::uint64_t kEvalStreamSalt = 0x6576616cull;
inline constexpr std::uint64_t kTrainStreamSalt = 0x7472616e69ull;

// Mean stable throughput of the buffer-aided selector over `slots` fresh
// fading draws. Streams are derived from (cfg.seed, seed_salt) so callers can
// decorrelate evaluation from training.
double ba_throughput(const NetworkConfig& cfg, const BaWeights& w, long slots,
                     std::uint64_t seed_salt = 0);

// Same evaluation on a pre-sampled capacity stream, for common-random-number
// comparisons against other policies or other weights.
double ba_throughput_on_stream(const std::vector<CapacityMatrix>& stream,
                               const BaWeights& w);

struct TrainConfig {
  int max_iterations = 200;
  int trials_per_iteration = 2000;
  // Step scale. 0 auto-scales so the first update moves no weight by more
  // than 0.1; the schedule is eps0 / sqrt(k).
  double eps0 = 0.0;
  double tolerance = 1e-4;   // convergence threshold on max |delta lambda|
  int quiet_window = 10;     // consecutive iterations under tolerance required
  std::uint64_t seed = 0;    // 0 derives the training stream from cfg.seed
};

struct TrainResult {
  BaWeights weights;              // best iterate by estimated throughput
  std::vector<double> final_lambda;

  // Tail-half trajectory averages. With deterministic channels the selector
  // time-shares through the weight dithering itself, so these carry the
  // realized operating point (e.g. the rho1 share) that no fixed-weight
  // replay reproduces.
  std::vector<double> tail_arrival;
  std::vector<double> tail_departure;
  double tail_rho1 = 0.0;
  double tail_throughput = 0.0;

  double best_estimate = 0.0;     // per-iteration throughput of the kept iterate
  int best_iteration = 0;
  std::vector<std::vector<double>> lambda_history;  // iterate after each update
};

// Stochastic subgradient training of the routing weights: per iteration,
// average the selected arrival and departure rates over fresh draws under the
// current weights, step each lambda against (arrival - departure), clip to
// [0, 1]. Stops early once max |delta lambda| stays under tolerance for
// quiet_window consecutive iterations; otherwise runs max_iterations and
// reports converged = false. Because the iteration sequence is not monotone
// in throughput, the returned weights are the iterate whose own Monte-Carlo
// draws estimated the highest throughput (final_lambda keeps the last one).
TrainResult train_lambda(const NetworkConfig& cfg, const TrainConfig& tc = {});

// Same trainer over an arbitrary per-slot capacity source, e.g. constant
// matrices, which no fading draw can produce. tc.seed is used as given here
// (0 falls back to 1).
using CapacitySampler = std::function<CapacityMatrix(Rng&)>;
TrainResult train_lambda(const CapacitySampler& sampler, int relay_count,
                         const TrainConfig& tc = {});

// Plain-text key-value serialization of trained weights.
void save_weights(const std::string& path, const BaWeights& w);
BaWeights load_weights(const std::string& path);

}  // namespace hyfso
