#pragma once

#include "hyfso/channels.hpp"

namespace hyfso {

// Independent reference implementations used to cross-check the production
// code paths. Deliberately written with different methods than the code they
// check; favor transparency over speed.

// Mutual information of equiprobable binary {0, ratio} input over unit-noise
// AWGN, computed as h(Y) - h(N) with h(Y) integrated by composite Simpson on
// a fine grid (no Gauss-Hermite involved). Accurate to ~1e-12 bit/symbol.
double ook_mi_oracle(double ratio, int intervals = 400000);

// Best bufferless one-slot rate by brute force: every (fso rx, fso tx,
// rf rx, rf tx) relay assignment times a uniform rho1 grid of the given
// step. Returns the maximum total rate. The result underestimates the true
// optimum by at most (max C1rf + max C2rf) * step.
double exhaustive_selection_tau(const CapacityMatrix& c, double rho_step = 1e-4);

// Best uniform routing weight for the buffer-aided selector by grid search
// over lambda in {0, step, ..., 1}, each value scored on the same capacity
// stream (common random numbers). Exact per-relay search would be
// exponential; with one relay this IS the exact weight space.
struct LambdaGridPoint {
  double lambda = 0.0;
  double tau = 0.0;
};
LambdaGridPoint lambda_grid_search(const std::vector<CapacityMatrix>& stream,
                                   double step = 0.01);

}  // namespace hyfso
