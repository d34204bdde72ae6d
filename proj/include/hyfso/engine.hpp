#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "hyfso/buffered.hpp"
#include "hyfso/bufferless.hpp"
#include "hyfso/channels.hpp"

namespace hyfso {

enum class SweepAxis { kNone, kAttenuation, kRfPower, kRelayCount, kQmax };
enum class PolicyKind {
  kNonBa,
  kBa,
  kDelayBa,
  kNonBaMaxMinFso,
  kNonBaIndependent,
  kBaBestFso,
  kBaIndependent,
};

const char* axis_name(SweepAxis axis);
const char* policy_name(PolicyKind policy);
// Throws with the unknown name on failure.
PolicyKind policy_from_name(const std::string& name);

struct LinkRef {
  int hop = 0;    // 0 source-to-relay, 1 relay-to-destination
  int relay = 0;  // 0-based
};

struct Scenario {
  NetworkConfig base;
  SweepAxis axis = SweepAxis::kNone;
  std::vector<double> axis_values;  // ignored for kNone (one implicit point)
  // Attenuation sweeps touch exactly these FSO links; other axes ignore it.
  std::vector<LinkRef> axis_links;
  std::vector<PolicyKind> policies;
  long slots = 100000;
  std::vector<std::uint64_t> seeds{1};
  // Buffer cap per relay for the delay-constrained policy; a kQmax sweep
  // overrides it per axis point. Benchmarks always run unbounded.
  double q_max = std::numeric_limits<double>::infinity();
  TrainConfig train;
  std::string weights_file;  // nonempty: load weights instead of training
};

// Throws std::invalid_argument naming the offending field.
void validate(const Scenario& s);

struct ModeHistogram {
  std::array<double, 3> frac{};  // Hybrid, Independent, Mixed
  bool defined = false;          // false for an empty trace
};
ModeHistogram mode_histogram(const std::vector<SlotMode>& modes);

struct PolicyAxisStats {
  std::string policy;
  double axis_value = 0.0;
  double tau_mean = 0.0;    // bit/s, mean over seeds
  double tau_stderr = 0.0;  // sample stddev over seeds / sqrt(seeds)
  double delay_mean = 0.0;  // slots; meaningful only when delay_defined
  bool delay_defined = false;
  std::vector<double> arrival_mean;    // per relay, mean over seeds
  std::vector<double> departure_mean;  // per relay, mean over seeds
  ModeHistogram modes;                 // defined for the one-slot policy only
  std::vector<double> seed_tau;        // per seed, same order as seeds
  std::vector<double> seed_delay;      // NaN where undefined
};

struct RunMetrics {
  SweepAxis axis = SweepAxis::kNone;
  long slots = 0;
  std::vector<std::uint64_t> seeds;
  // Axis-major, then policy in scenario order.
  std::vector<PolicyAxisStats> rows;
  // Weights used per axis point (trained or loaded), for reuse and audit.
  std::vector<BaWeights> weights;
};

// Runs every requested policy over the identical capacity stream per
// (axis point, seed): streams derive from (base.seed, eval salt, seed) and
// deliberately exclude the axis index, so sweeps that leave the channels
// untouched (e.g. buffer caps) compare decisions on literally the same
// draws. Training, when needed, happens once per axis point; its stream
// includes the axis index for channel-changing axes. slots = 0 yields empty
// metrics. Deterministic given the scenario.
RunMetrics run_scenario(const Scenario& s);

// One CSV row per policy x axis point x seed:
// policy,axis,axis_value,seed,slots,tau_bps,delay_slots
void write_per_seed_csv(std::ostream& out, const RunMetrics& m);
// One CSV row per policy x axis point; per-relay vectors ';'-joined, empty
// fields written as nan:
// policy,axis,axis_value,seeds,slots,tau_mean_bps,tau_stderr_bps,
// delay_mean_slots,arrival_mean_bps,departure_mean_bps,
// mode_hybrid,mode_independent,mode_mixed
void write_aggregate_csv(std::ostream& out, const RunMetrics& m);

}  // namespace hyfso
