#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hyfso/buffered.hpp"
#include "hyfso/delay.hpp"
#include "hyfso/rng.hpp"

using namespace hyfso;

namespace {

CapacityMatrix make_matrix(std::vector<double> c1f, std::vector<double> c1r,
                           std::vector<double> c2f, std::vector<double> c2r) {
  CapacityMatrix c;
  c.relay_count = static_cast<int>(c1f.size());
  c.fso[0] = std::move(c1f);
  c.fso[1] = std::move(c2f);
  c.rf[0] = std::move(c1r);
  c.rf[1] = std::move(c2r);
  return c;
}

}  // namespace

TEST_CASE("buffer levels clip the selection metrics") {
  BaWeights w;
  w.lambda = {0.5, 0.5};
  const CapacityMatrix c =
      make_matrix({10.0, 10.0}, {6.0, 6.0}, {8.0, 8.0}, {4.0, 4.0});

  QueueState q = QueueState::make({20.0, 20.0});
  q.fill({20.0, 0.0});  // relay 0 full, relay 1 empty
  const BaMetrics m = modified_metrics(c, w, q);
  CHECK(m.fso_rx[0] == 0.0);
  CHECK(m.rf_rx[0] == 0.0);
  CHECK(m.fso_tx[1] == 0.0);
  CHECK(m.rf_tx[1] == 0.0);
  CHECK(m.fso_tx[0] == doctest::Approx(0.5 * 8.0));
  CHECK(m.rf_tx[0] == doctest::Approx(0.5 * 4.0));
  CHECK(m.fso_rx[1] == doctest::Approx(0.5 * 10.0));

  // Partial levels clip by what the buffer can absorb or supply.
  q.fill({17.0, 3.0});
  const BaMetrics p = modified_metrics(c, w, q);
  CHECK(p.fso_rx[0] == doctest::Approx(0.5 * 3.0));
  CHECK(p.fso_tx[1] == doctest::Approx(0.5 * 3.0));

  // Unbounded buffers reduce to the plain metrics exactly.
  QueueState wide = QueueState::make({1e18, 1e18});
  wide.fill({1e9, 1e9});
  const BaMetrics a = modified_metrics(c, w, wide);
  const BaMetrics b = selection_metrics(c, w);
  CHECK(a.fso_rx == b.fso_rx);
  CHECK(a.fso_tx == b.fso_tx);
  CHECK(a.rf_rx == b.rf_rx);
  CHECK(a.rf_tx == b.rf_tx);
}

TEST_CASE("literal RF tx metric clips by the rx-side capacity") {
  BaWeights w;
  w.lambda = {0.5};
  // rx-side RF capacity 2, tx-side 10, plenty buffered.
  const CapacityMatrix c = make_matrix({0.0}, {2.0}, {0.0}, {10.0});
  QueueState q = QueueState::make({100.0});
  q.fill({50.0});
  CHECK(modified_metrics(c, w, q).rf_tx[0] == doctest::Approx(5.0));
  CHECK(modified_metrics(c, w, q, true).rf_tx[0] == doctest::Approx(1.0));
}

TEST_CASE("queue step moves out and in from the same pre-slot level") {
  // Level 5 of 7, arrival capacity 3, departure capacity 4.
  const CapacityMatrix c = make_matrix({3.0}, {0.0}, {4.0}, {0.0});
  QueueState q = QueueState::make({7.0});
  q.fill({5.0});
  BaDecision d;  // relay 0 receives FSO and transmits FSO
  const SlotFlows f = step_queue(q, d, c, 1);
  CHECK(f.r2[0] == doctest::Approx(4.0));  // min(4, 5)
  CHECK(f.r1[0] == doctest::Approx(2.0));  // min(3, 7 - 5)
  CHECK(q.q[0] == doctest::Approx(3.0));
}

TEST_CASE("unselected relays and boundary levels") {
  const CapacityMatrix c =
      make_matrix({3.0, 5.0}, {1.0, 1.0}, {4.0, 6.0}, {1.0, 1.0});
  QueueState q = QueueState::make({10.0, 10.0});
  q.fill({2.0, 8.0});
  BaDecision d;  // everything on relay 0
  const SlotFlows f = step_queue(q, d, c, 1);
  CHECK(f.r1[1] == 0.0);
  CHECK(f.r2[1] == 0.0);
  CHECK(q.q[1] == doctest::Approx(8.0));

  // Empty buffer transmits nothing; full buffer receives nothing.
  QueueState e = QueueState::make({10.0});
  const SlotFlows fe =
      step_queue(e, BaDecision{}, make_matrix({0.0}, {0.0}, {10.0}, {0.0}), 1);
  CHECK(fe.r2[0] == 0.0);
  QueueState full = QueueState::make({10.0});
  full.fill({10.0});
  const SlotFlows ff =
      step_queue(full, BaDecision{}, make_matrix({9.0}, {0.0}, {0.0}, {0.0}), 1);
  CHECK(ff.r1[0] == 0.0);
}

TEST_CASE("bits are conserved and levels stay within bounds") {
  Rng rng(404);
  NetworkConfig cfg = make_network(3, 900.0, 750.0, 1, 404);
  const std::vector<CapacityMatrix> stream = capacity_stream(cfg, 400, rng);
  double cap_scale = 0.0;
  for (const auto& c : stream)
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 3; ++m)
        cap_scale = std::max({cap_scale, c.fso[l][m], c.rf[l][m]});

  for (double factor : {0.1, 1.0, 10.0}) {
    const std::vector<double> q_max(3, factor * cap_scale);
    QueueState q = QueueState::make(q_max, true);
    const BaWeights w = BaWeights::uniform(3, 0.6);
    double total_in = 0.0, total_out = 0.0;
    long slot = 0;
    for (const auto& c : stream) {
      ++slot;
      const SlotFlows f = step_queue(q, select_delay_ba(c, w, q), c, slot);
      for (int m = 0; m < 3; ++m) {
        total_in += f.r1[m];
        total_out += f.r2[m];
        CHECK(q.q[m] >= 0.0);
        CHECK(q.q[m] <= q_max[m]);
      }
    }
    double buffered = 0.0;
    for (int m = 0; m < 3; ++m) buffered += q.q[m];
    CHECK(total_out <= total_in);
    CHECK(total_in - total_out == doctest::Approx(buffered).epsilon(1e-9));
    // Ledger bit sums track the scalar levels up to rounding drift.
    for (int m = 0; m < 3; ++m) {
      double ledger_bits = 0.0;
      for (const auto& [bits, born] : q.ledger[m]) ledger_bits += bits;
      CHECK(std::abs(ledger_bits - q.q[m]) <= 1e-6 * (1.0 + q_max[m]));
    }
  }
}

TEST_CASE("constant balanced flow reproduces the textbook waiting time") {
  // Steady level 6, rate 2 per slot: every bit waits 3 slots.
  const CapacityMatrix c = make_matrix({2.0}, {0.0}, {2.0}, {0.0});
  const std::vector<CapacityMatrix> stream(600, c);
  DelayOptions opts;
  opts.initial_q = {6.0};
  const DelayRunResult res = run_delay_ba_on_stream(
      stream, BaWeights::uniform(1), {10.0}, opts);
  CHECK(res.delay_defined);
  CHECK(res.little_delay == doctest::Approx(3.0));
  CHECK(res.fifo_delay == doctest::Approx(3.0).epsilon(0.01));
  CHECK(res.throughput == doctest::Approx(2.0));
  CHECK(res.mean_q[0] == doctest::Approx(6.0));
}

TEST_CASE("zero-capacity buffers move nothing") {
  NetworkConfig cfg = make_network(2, 800.0, 800.0, 1, 9);
  const DelayRunResult res =
      run_delay_ba(cfg, BaWeights::uniform(2), {0.0, 0.0}, 200);
  CHECK(res.throughput == 0.0);
  CHECK_FALSE(res.delay_defined);
  CHECK(res.fifo_delay == 0.0);
}

TEST_CASE("with deep, half-full buffers decisions match the plain selector") {
  NetworkConfig cfg = make_network(2, 850.0, 700.0, 1, 21);
  Rng rng(derive_seed(cfg.seed, {55}));
  const std::vector<CapacityMatrix> stream = capacity_stream(cfg, 300, rng);
  const BaWeights w = BaWeights::uniform(2, 0.6);
  const double deep = 1e15;
  QueueState q = QueueState::make({deep, deep});
  q.fill({deep / 2, deep / 2});
  long slot = 0;
  for (const auto& c : stream) {
    ++slot;
    double cap_max = 0.0;
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 2; ++m)
        cap_max = std::max({cap_max, c.fso[l][m], c.rf[l][m]});
    bool unconstrained = true;
    for (int m = 0; m < 2; ++m)
      if (q.q[m] < cap_max || q.q_max[m] - q.q[m] < cap_max)
        unconstrained = false;
    REQUIRE(unconstrained);
    const BaDecision a = select_delay_ba(c, w, q);
    const BaDecision b = select_ba(c, w);
    CHECK(a.fso_rx == b.fso_rx);
    CHECK(a.fso_tx == b.fso_tx);
    CHECK(a.rf_relay == b.rf_relay);
    CHECK(a.rf_dir == b.rf_dir);
    step_queue(q, a, c, slot);
  }
}

TEST_CASE("deep buffers recover the unconstrained throughput") {
  NetworkConfig cfg = make_network(2, 800.0, 800.0, 1, 33);
  Rng rng(derive_seed(cfg.seed, {77}));
  const std::vector<CapacityMatrix> stream = capacity_stream(cfg, 4000, rng);
  const BaWeights w = BaWeights::uniform(2, 0.55);
  double cap_scale = 0.0;
  for (const auto& c : stream)
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 2; ++m)
        cap_scale = std::max({cap_scale, c.fso[l][m], c.rf[l][m]});
  const double unconstrained = ba_throughput_on_stream(stream, w);
  const DelayRunResult res = run_delay_ba_on_stream(
      stream, w, {1e6 * cap_scale, 1e6 * cap_scale}, {});
  CHECK(res.throughput >= 0.95 * unconstrained);
  CHECK(res.throughput <= 1.0001 * unconstrained);
}

TEST_CASE("mean level over arrival rate agrees with the measured bit age") {
  NetworkConfig cfg = make_network(2, 800.0, 800.0, 1, 61);
  Rng rng(derive_seed(cfg.seed, {88}));
  const std::vector<CapacityMatrix> stream = capacity_stream(cfg, 20000, rng);
  double mean_cap = 0.0;
  for (const auto& c : stream) mean_cap += c.fso[0][0];
  mean_cap /= static_cast<double>(stream.size());

  const DelayRunResult res = run_delay_ba_on_stream(
      stream, BaWeights::uniform(2, 0.5), {2.0 * mean_cap, 2.0 * mean_cap},
      {});
  REQUIRE(res.delay_defined);
  CHECK(res.fifo_delay ==
        doctest::Approx(res.little_delay).epsilon(0.05));
}

TEST_CASE("throughput medians rise with buffer depth") {
  NetworkConfig cfg = make_network(2, 800.0, 800.0, 1, 71);
  const BaWeights w = BaWeights::uniform(2, 0.55);
  Rng probe(derive_seed(cfg.seed, {kEvalStreamSalt, 0}));
  const std::vector<CapacityMatrix> sample = capacity_stream(cfg, 200, probe);
  double mean_cap = 0.0;
  for (const auto& c : sample) mean_cap += c.fso[0][0];
  mean_cap /= static_cast<double>(sample.size());

  std::vector<double> medians;
  for (double factor : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    std::vector<double> taus;
    for (std::uint64_t seed_salt = 0; seed_salt < 5; ++seed_salt) {
      const double qm = factor * mean_cap;
      taus.push_back(
          run_delay_ba(cfg, w, {qm, qm}, 2000, {}, seed_salt).throughput);
    }
    std::sort(taus.begin(), taus.end());
    medians.push_back(taus[2]);
  }
  int inversions = 0;
  for (std::size_t i = 1; i < medians.size(); ++i)
    if (medians[i] < medians[i - 1]) ++inversions;
  CHECK(inversions <= 1);
}
