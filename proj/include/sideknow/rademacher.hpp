#pragma once

#include "sideknow/consensus.hpp"
#include "sideknow/rng.hpp"
#include "sideknow/types.hpp"

namespace sideknow {

struct SupResult {
  double value = 0.0;
  LinearModel argmax;
  SolverReport report;
};

/// sup over the set of g^T beta. The ball-only case is closed form; otherwise
/// the consensus solver runs on the unit-normalized direction and the value is
/// taken at a feasibility-projected point.
SupResult sup_linear(const Vector& g, const ConsensusSolver& solver);
SupResult sup_linear(const Vector& g, const ConstraintSet& set, const SolverOptions& options = {});

/// Per-draw values (1/n) max(sup(X sigma), sup(-X sigma)). Draw i uses
/// rng.substream(i), so results do not depend on the thread count. When
/// 2^n <= mc every sign vector is enumerated once instead (exact average).
std::vector<double> rademacher_draws(const LabeledDataset& data, const ConstraintSet& set,
                                     std::size_t mc, const Rng& rng,
                                     const SolverOptions& options = {});

/// Mean of `rademacher_draws` with stderr = sample sd / sqrt(draws).
BoundReport estimate_empirical_rademacher(const LabeledDataset& data, const ConstraintSet& set,
                                          std::size_t mc, const Rng& rng,
                                          const SolverOptions& options = {});

/// True when the draws above enumerate all sign vectors.
bool rademacher_is_exhaustive(Index n, std::size_t mc);

}  // namespace sideknow
