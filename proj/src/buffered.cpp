#include "hyfso/buffered.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hyfso/rng.hpp"

namespace hyfso {

namespace {

void check_weights(const CapacityMatrix& c, const BaWeights& w) {
  if (static_cast<int>(w.lambda.size()) != c.relay_count)
    throw std::invalid_argument("weights: lambda size != relay_count");
}

}  // namespace

BaWeights BaWeights::uniform(int relay_count, double value) {
  BaWeights w;
  w.lambda.assign(static_cast<std::size_t>(relay_count), value);
  return w;
}

BaMetrics selection_metrics(const CapacityMatrix& c, const BaWeights& w) {
  check_weights(c, w);
  const int m_count = c.relay_count;
  BaMetrics out;
  out.fso_rx.resize(m_count);
  out.fso_tx.resize(m_count);
  out.rf_rx.resize(m_count);
  out.rf_tx.resize(m_count);
  for (int m = 0; m < m_count; ++m) {
    const double lam = w.lambda[m];
    out.fso_rx[m] = lam * c.fso[0][m];
    out.fso_tx[m] = (1.0 - lam) * c.fso[1][m];
    out.rf_rx[m] = lam * c.rf[0][m];
    out.rf_tx[m] = (1.0 - lam) * c.rf[1][m];
  }
  return out;
}

BaDecision select_ba(const CapacityMatrix& c, const BaWeights& w) {
  return select_from_metrics(selection_metrics(c, w));
}

BaDecision select_from_metrics(const BaMetrics& metric) {
  const int m_count = static_cast<int>(metric.fso_rx.size());
  BaDecision d;
  for (int m = 1; m < m_count; ++m) {
    if (metric.fso_rx[m] > metric.fso_rx[d.fso_rx]) d.fso_rx = m;
    if (metric.fso_tx[m] > metric.fso_tx[d.fso_tx]) d.fso_tx = m;
  }
  // One RF winner across both directions; ties fall to rx, then lowest relay.
  double best = metric.rf_rx[0];
  d.rf_relay = 0;
  d.rf_dir = 0;
  for (int m = 1; m < m_count; ++m) {
    if (metric.rf_rx[m] > best) {
      best = metric.rf_rx[m];
      d.rf_relay = m;
    }
  }
  for (int m = 0; m < m_count; ++m) {
    if (metric.rf_tx[m] > best) {
      best = metric.rf_tx[m];
      d.rf_relay = m;
      d.rf_dir = 1;
    }
  }
  return d;
}

void FlowAccumulator::add(const CapacityMatrix& c, const BaDecision& d) {
  if (arrival.empty()) {
    arrival.assign(static_cast<std::size_t>(c.relay_count), 0.0);
    departure.assign(static_cast<std::size_t>(c.relay_count), 0.0);
  }
  arrival[d.fso_rx] += c.fso[0][d.fso_rx];
  departure[d.fso_tx] += c.fso[1][d.fso_tx];
  if (d.rf_dir == 0)
    arrival[d.rf_relay] += c.rf[0][d.rf_relay];
  else
    departure[d.rf_relay] += c.rf[1][d.rf_relay];
  ++slots;
}

std::vector<double> FlowAccumulator::mean_arrival() const {
  std::vector<double> out(arrival.size(), 0.0);
  if (slots > 0)
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = arrival[m] / slots;
  return out;
}

std::vector<double> FlowAccumulator::mean_departure() const {
  std::vector<double> out(departure.size(), 0.0);
  if (slots > 0)
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = departure[m] / slots;
  return out;
}

double FlowAccumulator::throughput() const {
  if (slots == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t m = 0; m < arrival.size(); ++m)
    sum += std::min(arrival[m], departure[m]);
  return sum / slots;
}

double ba_throughput(const NetworkConfig& cfg, const BaWeights& w, long slots,
                     std::uint64_t seed_salt) {
  Rng rng(derive_seed(cfg.seed, {kEvalStreamSalt, seed_salt}));
  FlowAccumulator acc(cfg.relay_count);
  for (long b = 0; b < slots; ++b) {
    const CapacityMatrix c = capacities(cfg, sample_fading(cfg, rng));
    acc.add(c, select_ba(c, w));
  }
  return acc.throughput();
}

double ba_throughput_on_stream(const std::vector<CapacityMatrix>& stream,
                               const BaWeights& w) {
  FlowAccumulator acc;
  for (const CapacityMatrix& c : stream) acc.add(c, select_ba(c, w));
  return acc.throughput();
}

TrainResult train_lambda(const NetworkConfig& cfg, const TrainConfig& tc) {
  TrainConfig local = tc;
  if (local.seed == 0) local.seed = derive_seed(cfg.seed, {kTrainStreamSalt});
  return train_lambda(
      [&cfg](Rng& r) { return capacities(cfg, sample_fading(cfg, r)); },
      cfg.relay_count, local);
}

TrainResult train_lambda(const CapacitySampler& sampler, int relay_count,
                         const TrainConfig& tc) {
  const int m_count = relay_count;
  const std::uint64_t seed = tc.seed != 0 ? tc.seed : 1;
  Rng rng(seed);

  TrainResult res;
  BaWeights w = BaWeights::uniform(m_count);
  w.train_seed = seed;

  std::vector<std::vector<double>> arr_hist, dep_hist;
  std::vector<double> rho_hist;
  double eps0 = tc.eps0;
  int quiet = 0;
  int performed = 0;
  res.best_estimate = -1.0;

  for (int k = 1; k <= tc.max_iterations; ++k) {
    FlowAccumulator acc(m_count);
    long rx_slots = 0;
    for (int t = 0; t < tc.trials_per_iteration; ++t) {
      const CapacityMatrix c = sampler(rng);
      const BaDecision d = select_ba(c, w);
      acc.add(c, d);
      if (d.rf_dir == 0) ++rx_slots;
    }
    const std::vector<double> arr = acc.mean_arrival();
    const std::vector<double> dep = acc.mean_departure();
    arr_hist.push_back(arr);
    dep_hist.push_back(dep);
    rho_hist.push_back(static_cast<double>(rx_slots) /
                       tc.trials_per_iteration);

    // The estimate belongs to the iterate the draws were made under.
    const double estimate = acc.throughput();
    if (estimate >= res.best_estimate) {
      res.best_estimate = estimate;
      res.best_iteration = k;
      res.weights.lambda = w.lambda;
    }

    std::vector<double> grad(m_count);
    double grad_max = 0.0;
    for (int m = 0; m < m_count; ++m) {
      grad[m] = arr[m] - dep[m];
      grad_max = std::max(grad_max, std::abs(grad[m]));
    }
    if (eps0 == 0.0 && grad_max > 0.0) eps0 = 0.1 / grad_max;

    const double eps = eps0 / std::sqrt(static_cast<double>(k));
    double step_max = 0.0;
    for (int m = 0; m < m_count; ++m) {
      const double next = std::clamp(w.lambda[m] - eps * grad[m], 0.0, 1.0);
      step_max = std::max(step_max, std::abs(next - w.lambda[m]));
      w.lambda[m] = next;
    }
    res.lambda_history.push_back(w.lambda);
    performed = k;

    quiet = step_max < tc.tolerance ? quiet + 1 : 0;
    if (quiet >= tc.quiet_window) {
      w.converged = true;
      break;
    }
  }

  // Tail-half trajectory averages carry the realized operating point.
  const int tail_begin = performed / 2;
  const int tail_len = performed - tail_begin;
  res.tail_arrival.assign(m_count, 0.0);
  res.tail_departure.assign(m_count, 0.0);
  for (int k = tail_begin; k < performed; ++k) {
    for (int m = 0; m < m_count; ++m) {
      res.tail_arrival[m] += arr_hist[k][m];
      res.tail_departure[m] += dep_hist[k][m];
    }
    res.tail_rho1 += rho_hist[k];
  }
  for (int m = 0; m < m_count; ++m) {
    res.tail_arrival[m] /= tail_len;
    res.tail_departure[m] /= tail_len;
    res.tail_throughput += std::min(res.tail_arrival[m], res.tail_departure[m]);
  }
  res.tail_rho1 /= tail_len;

  w.iterations = performed;
  w.eps0 = eps0;
  w.residual.resize(m_count);
  for (int m = 0; m < m_count; ++m)
    w.residual[m] = std::abs(res.tail_arrival[m] - res.tail_departure[m]);

  res.final_lambda = w.lambda;
  // Keep the trace on the returned weights but swap in the best iterate.
  const std::vector<double> best = res.weights.lambda;
  res.weights = w;
  res.weights.lambda = best;
  return res;
}

void save_weights(const std::string& path, const BaWeights& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out.precision(17);
  out << "hyfso-weights 1\n";
  out << "relay_count " << w.lambda.size() << "\n";
  out << "seed " << w.train_seed << "\n";
  out << "iterations " << w.iterations << "\n";
  out << "converged " << (w.converged ? 1 : 0) << "\n";
  out << "eps0 " << w.eps0 << "\n";
  out << "lambda";
  for (double v : w.lambda) out << " " << v;
  out << "\nresidual";
  std::vector<double> res = w.residual;
  res.resize(w.lambda.size(), 0.0);
  for (double v : res) out << " " << v;
  out << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

BaWeights load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file: " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "hyfso-weights" || version != 1)
    throw std::runtime_error("not a weights file: " + path);
  BaWeights w;
  std::size_t relay_count = 0;
  std::string key;
  while (in >> key) {
    if (key == "relay_count") {
      in >> relay_count;
    } else if (key == "seed") {
      in >> w.train_seed;
    } else if (key == "iterations") {
      in >> w.iterations;
    } else if (key == "converged") {
      int flag = 0;
      in >> flag;
      w.converged = flag != 0;
    } else if (key == "eps0") {
      in >> w.eps0;
    } else if (key == "lambda" || key == "residual") {
      std::vector<double>& dst = key == "lambda" ? w.lambda : w.residual;
      dst.resize(relay_count);
      for (std::size_t m = 0; m < relay_count; ++m) in >> dst[m];
    } else {
      throw std::runtime_error("unknown key in weights file: " + key);
    }
  }
  if (w.lambda.size() != relay_count)
    throw std::runtime_error("weights file missing lambda: " + path);
  for (double v : w.lambda)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::runtime_error("lambda out of [0,1] in " + path);
  return w;
}

}  // namespace hyfso
