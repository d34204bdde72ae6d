#pragma once

#include <vector>

#include "hyfso/channels.hpp"

namespace hyfso {

// Per-slot relay selection without buffering. Each slot picks at most one
// relay per role (FSO rx/tx, RF rx/tx) and an RF time split rho1 + rho2 = 1;
// a relay's deliverable rate is min(inflow, outflow) since nothing carries
// over to the next slot.

enum class SlotMode { kHybrid, kIndependent, kMixed };

struct RatePoint {
  double tau = 0.0;
  double rho1 = 0.0;
};

struct SelectionDecision {
  SlotMode mode = SlotMode::kHybrid;
  // Selected relay index per role; alpha = FSO, beta = RF, [0] rx, [1] tx.
  int alpha[2] = {0, 0};
  int beta[2] = {0, 0};
  double rho1 = 0.0;
  double tau = 0.0;                 // total rate, equals sum of relay_rates
  std::vector<double> relay_rates;  // min(inflow, outflow) per relay
};

// Single relay carries everything; FSO runs both hops in parallel, RF
// time-shares. rho1 = clip((C2f + C2r - C1f)/(C1r + C2r)); both-RF-zero
// degenerates to min(C1f, C2f) with rho1 = 0.
RatePoint hybrid_rate(const CapacityMatrix& c, int m);

// FSO bottleneck on relay m plus RF time-shared relaying on relay n.
// RF part is the harmonic term C1r*C2r/(C1r + C2r), 0 on zero denominator
// (rho1 = 0 by convention in that case).
RatePoint independent_rate(const CapacityMatrix& c, int m, int n);

// Relay m: FSO in, RF out; relay n: RF in, FSO out (m != n). Feasible iff
// C2f_n/C1r_n + C1f_m/C2r_m <= 1 (0-numerator terms count 0, positive
// numerator over 0 counts +inf); then tau = C1f_m + C2f_n, rho1 = C2f_n/C1r_n.
// Scores only the fully-loaded configuration where both FSO links saturate.
RatePoint mixed_rate(const CapacityMatrix& c, int m, int n);

// Exact optimum of the same two-path split without the full-load restriction:
// max over rho1 of min(C1f_m, rho2*C2r_m) + min(rho1*C1r_n, C2f_n). The
// objective is piecewise-linear concave in rho1, so the maximum sits on a
// breakpoint. Coincides with mixed_rate whenever that form is feasible, and
// can strictly exceed it otherwise (one path saturated, the other RF-bound).
RatePoint mixed_rate_best(const CapacityMatrix& c, int m, int n);

// Recomputes relay_rates and tau from the decision's role assignment and
// split: rate_m = min(inflow_m, outflow_m). Shared by every code path that
// assembles a SelectionDecision so taus compare bit-for-bit.
void fill_relay_rates(const CapacityMatrix& c, SelectionDecision& d);

// Best of the three modes over all relay assignments. Ties break Hybrid >
// Independent > Mixed, then lowest relay index, so results are reproducible
// on degenerate inputs.
SelectionDecision select_bufferless(const CapacityMatrix& c);

}  // namespace hyfso
