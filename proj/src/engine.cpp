#include "hyfso/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hyfso/benchmarks.hpp"
#include "hyfso/delay.hpp"

namespace hyfso {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool needs_weights(PolicyKind p) {
  return p == PolicyKind::kBa || p == PolicyKind::kDelayBa;
}

bool channel_changing(SweepAxis axis) {
  return axis == SweepAxis::kAttenuation || axis == SweepAxis::kRfPower ||
         axis == SweepAxis::kRelayCount;
}

// Network for one axis point. Relay-count sweeps clone relay 0's link
// parameters, so they require a relay-uniform base.
NetworkConfig axis_config(const Scenario& s, double value) {
  NetworkConfig cfg = s.base;
  switch (s.axis) {
    case SweepAxis::kNone:
    case SweepAxis::kQmax:
      break;
    case SweepAxis::kAttenuation:
      for (const LinkRef& ref : s.axis_links)
        cfg.fso[ref.hop][ref.relay].attenuation = value;
      break;
    case SweepAxis::kRfPower:
      for (auto& hop : cfg.rf)
        for (RfLinkParams& link : hop) link.tx_power = value;
      break;
    case SweepAxis::kRelayCount: {
      const int m = static_cast<int>(value);
      cfg.relay_count = m;
      for (int hop = 0; hop < 2; ++hop) {
        cfg.fso[hop].assign(m, s.base.fso[hop].at(0));
        cfg.rf[hop].assign(m, s.base.rf[hop].at(0));
      }
      break;
    }
  }
  cfg.slots = s.slots;
  return cfg;
}

struct SeedEval {
  double tau = 0.0;
  double delay = kNan;
  bool delay_defined = false;
  std::vector<double> arrival;
  std::vector<double> departure;
  std::vector<SlotMode> modes;
};

SeedEval eval_policy(PolicyKind p, const std::vector<CapacityMatrix>& stream,
                     const BaWeights& w, double q_max, int relay_count) {
  SeedEval ev;
  const long n = static_cast<long>(stream.size());
  switch (p) {
    case PolicyKind::kNonBa: {
      ev.arrival.assign(relay_count, 0.0);
      ev.modes.reserve(stream.size());
      double sum = 0.0;
      for (const CapacityMatrix& c : stream) {
        const SelectionDecision d = select_bufferless(c);
        sum += d.tau;
        for (int m = 0; m < relay_count; ++m) ev.arrival[m] += d.relay_rates[m];
        ev.modes.push_back(d.mode);
      }
      ev.tau = n > 0 ? sum / n : 0.0;
      for (double& a : ev.arrival) a = n > 0 ? a / n : 0.0;
      ev.departure = ev.arrival;  // nothing buffered, inflow equals outflow
      break;
    }
    case PolicyKind::kBa: {
      FlowAccumulator acc(relay_count);
      for (const CapacityMatrix& c : stream) acc.add(c, select_ba(c, w));
      ev.tau = acc.throughput();
      ev.arrival = acc.mean_arrival();
      ev.departure = acc.mean_departure();
      break;
    }
    case PolicyKind::kDelayBa: {
      DelayOptions opts;
      opts.track_age = false;
      const DelayRunResult r = run_delay_ba_on_stream(
          stream, w, std::vector<double>(relay_count, q_max), opts);
      ev.tau = r.throughput;
      ev.delay_defined = r.delay_defined;
      ev.delay = r.delay_defined ? r.little_delay : kNan;
      ev.arrival = r.mean_r1;
      ev.departure = r.mean_r2;
      break;
    }
    case PolicyKind::kNonBaMaxMinFso: {
      double sum = 0.0;
      for (const CapacityMatrix& c : stream) sum += nonba_maxmin_fso(c);
      ev.tau = n > 0 ? sum / n : 0.0;
      break;
    }
    case PolicyKind::kNonBaIndependent: {
      double sum = 0.0;
      for (const CapacityMatrix& c : stream) sum += nonba_independent(c);
      ev.tau = n > 0 ? sum / n : 0.0;
      break;
    }
    case PolicyKind::kBaBestFso:
      ev.tau = ba_best_fso_rate(stream);
      break;
    case PolicyKind::kBaIndependent:
      ev.tau = ba_independent_rate(stream);
      break;
  }
  return ev;
}

std::string join(const std::vector<double>& v) {
  if (v.empty()) return "nan";
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) out += ';';
    out += buf;
  }
  return out;
}

}  // namespace

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone: return "none";
    case SweepAxis::kAttenuation: return "attenuation";
    case SweepAxis::kRfPower: return "rf_power";
    case SweepAxis::kRelayCount: return "relay_count";
    case SweepAxis::kQmax: return "q_max";
  }
  return "none";
}

const char* policy_name(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::kNonBa: return "nonba";
    case PolicyKind::kBa: return "ba";
    case PolicyKind::kDelayBa: return "delay_ba";
    case PolicyKind::kNonBaMaxMinFso: return "nonba_maxmin_fso";
    case PolicyKind::kNonBaIndependent: return "nonba_independent";
    case PolicyKind::kBaBestFso: return "ba_best_fso";
    case PolicyKind::kBaIndependent: return "ba_independent";
  }
  return "";
}

PolicyKind policy_from_name(const std::string& name) {
  for (PolicyKind p :
       {PolicyKind::kNonBa, PolicyKind::kBa, PolicyKind::kDelayBa,
        PolicyKind::kNonBaMaxMinFso, PolicyKind::kNonBaIndependent,
        PolicyKind::kBaBestFso, PolicyKind::kBaIndependent}) {
    if (name == policy_name(p)) return p;
  }
  throw std::invalid_argument("unknown policy: " + name);
}

void validate(const Scenario& s) {
  s.base.validate();
  if (s.slots < 0) throw std::invalid_argument("slots: must be >= 0");
  if (s.seeds.empty())
    throw std::invalid_argument("seeds: at least one seed required");
  if (!(s.q_max >= 0.0))
    throw std::invalid_argument("q_max: must be >= 0");
  if (s.axis != SweepAxis::kNone && s.axis_values.empty())
    throw std::invalid_argument("sweep.values: at least one value required");
  for (std::size_t i = 0; i < s.axis_values.size(); ++i) {
    const std::string field = "sweep.values[" + std::to_string(i) + "]";
    const double v = s.axis_values[i];
    if (std::isnan(v)) throw std::invalid_argument(field + ": must be a number");
    switch (s.axis) {
      case SweepAxis::kNone:
        break;
      case SweepAxis::kAttenuation:
        if (!(v >= 0.0) || !std::isfinite(v))
          throw std::invalid_argument(field + ": attenuation must be >= 0");
        break;
      case SweepAxis::kRfPower:
        if (!(v >= 0.0) || !std::isfinite(v))
          throw std::invalid_argument(field + ": power must be >= 0");
        break;
      case SweepAxis::kRelayCount:
        if (!(v >= 1.0) || v != std::floor(v) || !std::isfinite(v))
          throw std::invalid_argument(field +
                                      ": relay count must be a positive integer");
        break;
      case SweepAxis::kQmax:
        if (!(v >= 0.0))
          throw std::invalid_argument(field + ": buffer cap must be >= 0");
        break;
    }
  }
  if (s.axis == SweepAxis::kAttenuation) {
    if (s.axis_links.empty())
      throw std::invalid_argument(
          "sweep.links: attenuation sweep needs at least one link");
    for (std::size_t i = 0; i < s.axis_links.size(); ++i) {
      const std::string field = "sweep.links[" + std::to_string(i) + "]";
      const LinkRef& ref = s.axis_links[i];
      if (ref.hop < 0 || ref.hop > 1)
        throw std::invalid_argument(field + ".hop: must be 0 or 1");
      if (ref.relay < 0 || ref.relay >= s.base.relay_count)
        throw std::invalid_argument(field + ".relay: out of range");
    }
  }
}

ModeHistogram mode_histogram(const std::vector<SlotMode>& modes) {
  ModeHistogram h;
  if (modes.empty()) return h;
  for (SlotMode m : modes) h.frac[static_cast<int>(m)] += 1.0;
  for (double& f : h.frac) f /= static_cast<double>(modes.size());
  h.defined = true;
  return h;
}

RunMetrics run_scenario(const Scenario& s) {
  validate(s);

  RunMetrics out;
  out.axis = s.axis;
  out.slots = s.slots;
  out.seeds = s.seeds;
  if (s.slots == 0) return out;

  const std::vector<double> axis_values =
      s.axis == SweepAxis::kNone ? std::vector<double>{0.0} : s.axis_values;
  const bool want_weights =
      std::any_of(s.policies.begin(), s.policies.end(), needs_weights);

  BaWeights loaded;
  if (want_weights && !s.weights_file.empty())
    loaded = load_weights(s.weights_file);

  // Channel-invariant axes train with a constant seed, so every axis point
  // would deterministically reproduce the same weights; train once.
  BaWeights invariant_cache;
  bool have_invariant_cache = false;

  for (std::size_t a = 0; a < axis_values.size(); ++a) {
    const double value = axis_values[a];
    const NetworkConfig cfg = axis_config(s, value);
    const int relay_count = cfg.relay_count;
    const double q_max = s.axis == SweepAxis::kQmax ? value : s.q_max;

    BaWeights w;
    if (want_weights) {
      if (!s.weights_file.empty()) {
        if (static_cast<int>(loaded.lambda.size()) != relay_count)
          throw std::invalid_argument(
              "weights_file: weights cover " +
              std::to_string(loaded.lambda.size()) + " relays, scenario needs " +
              std::to_string(relay_count));
        w = loaded;
      } else if (!channel_changing(s.axis) && have_invariant_cache) {
        w = invariant_cache;
      } else {
        TrainConfig tc = s.train;
        if (tc.seed == 0) {
          // Channel-invariant sweeps share one training run so only the
          // swept quantity differs between axis points.
          const std::uint64_t axis_salt =
              channel_changing(s.axis) ? static_cast<std::uint64_t>(a + 1) : 0;
          tc.seed = derive_seed(cfg.seed, {kTrainStreamSalt, axis_salt});
        }
        w = train_lambda(cfg, tc).weights;
        if (!channel_changing(s.axis)) {
          invariant_cache = w;
          have_invariant_cache = true;
        }
      }
    }
    out.weights.push_back(w);

    std::vector<std::vector<SeedEval>> evals(s.policies.size());
    for (std::uint64_t seed : s.seeds) {
      Rng rng(derive_seed(cfg.seed, {kEvalStreamSalt, seed}));
      const std::vector<CapacityMatrix> stream =
          capacity_stream(cfg, s.slots, rng);
      for (std::size_t p = 0; p < s.policies.size(); ++p)
        evals[p].push_back(
            eval_policy(s.policies[p], stream, w, q_max, relay_count));
    }

    for (std::size_t p = 0; p < s.policies.size(); ++p) {
      const std::vector<SeedEval>& per_seed = evals[p];
      PolicyAxisStats row;
      row.policy = policy_name(s.policies[p]);
      row.axis_value = value;

      const std::size_t n = per_seed.size();
      double delay_sum = 0.0;
      std::size_t delay_n = 0;
      std::vector<SlotMode> all_modes;
      for (const SeedEval& ev : per_seed) {
        row.seed_tau.push_back(ev.tau);
        row.seed_delay.push_back(ev.delay);
        row.tau_mean += ev.tau;
        if (ev.delay_defined) {
          delay_sum += ev.delay;
          ++delay_n;
        }
        if (!ev.arrival.empty()) {
          row.arrival_mean.resize(relay_count, 0.0);
          row.departure_mean.resize(relay_count, 0.0);
          for (int m = 0; m < relay_count; ++m) {
            row.arrival_mean[m] += ev.arrival[m] / n;
            row.departure_mean[m] += ev.departure[m] / n;
          }
        }
        all_modes.insert(all_modes.end(), ev.modes.begin(), ev.modes.end());
      }
      row.tau_mean /= static_cast<double>(n);
      if (n >= 2) {
        double ss = 0.0;
        for (const SeedEval& ev : per_seed) {
          const double d = ev.tau - row.tau_mean;
          ss += d * d;
        }
        row.tau_stderr =
            std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(double(n));
      }
      if (delay_n > 0) {
        row.delay_mean = delay_sum / static_cast<double>(delay_n);
        row.delay_defined = true;
      }
      row.modes = mode_histogram(all_modes);
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

void write_per_seed_csv(std::ostream& out, const RunMetrics& m) {
  out << "policy,axis,axis_value,seed,slots,tau_bps,delay_slots\n";
  char buf[64];
  for (const PolicyAxisStats& row : m.rows) {
    for (std::size_t i = 0; i < row.seed_tau.size(); ++i) {
      out << row.policy << ',' << axis_name(m.axis) << ',';
      std::snprintf(buf, sizeof buf, "%.17g", row.axis_value);
      out << buf << ',' << m.seeds[i] << ',' << m.slots << ',';
      std::snprintf(buf, sizeof buf, "%.17g", row.seed_tau[i]);
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", row.seed_delay[i]);
      out << buf << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& out, const RunMetrics& m) {
  out << "policy,axis,axis_value,seeds,slots,tau_mean_bps,tau_stderr_bps,"
         "delay_mean_slots,arrival_mean_bps,departure_mean_bps,"
         "mode_hybrid,mode_independent,mode_mixed\n";
  char buf[64];
  for (const PolicyAxisStats& row : m.rows) {
    out << row.policy << ',' << axis_name(m.axis) << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.axis_value);
    out << buf << ',' << m.seeds.size() << ',' << m.slots << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.tau_mean);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.tau_stderr);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g",
                  row.delay_defined ? row.delay_mean : kNan);
    out << buf << ',' << join(row.arrival_mean) << ','
        << join(row.departure_mean);
    for (int k = 0; k < 3; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g",
                    row.modes.defined ? row.modes.frac[k] : kNan);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace hyfso
