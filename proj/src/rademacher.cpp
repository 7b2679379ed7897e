#include "sideknow/rademacher.hpp"

#include "sideknow/parallel.hpp"

#include <cmath>

namespace sideknow {

SupResult sup_linear(const Vector& g, const ConsensusSolver& solver) {
  const ConstraintSet& set = solver.set();
  const Index p = solver.dim();
  if (g.size() != p) throw Error("sup_linear: direction has wrong dimension");
  const double gn = g.norm();

  SupResult out;
  if (set.only_ball()) {
    out.argmax.beta = gn > 0.0 ? Vector(set.ball_radius / gn * g) : Vector::Zero(p);
    out.value = set.ball_radius * gn;
    out.report.converged = true;
    return out;
  }
  if (gn == 0.0) {
    out.argmax.beta = solver.make_feasible(Vector::Zero(p));
    out.value = 0.0;
    out.report.converged = true;
    return out;
  }
  const QpSolution sol = solver.solve(Matrix::Zero(p, p), -g / gn);
  out.argmax.beta = sol.beta;
  out.value = g.dot(sol.beta);
  out.report = sol.report;
  return out;
}

SupResult sup_linear(const Vector& g, const ConstraintSet& set, const SolverOptions& options) {
  const ConsensusSolver solver(set, g.size(), options);
  return sup_linear(g, solver);
}

bool rademacher_is_exhaustive(Index n, std::size_t mc) {
  return n < 63 && (std::uint64_t{1} << n) <= mc;
}

std::vector<double> rademacher_draws(const LabeledDataset& data, const ConstraintSet& set,
                                     std::size_t mc, const Rng& rng, const SolverOptions& options) {
  if (mc < 2) throw Error("estimate_empirical_rademacher: needs mc >= 2");
  const Index n = data.size();
  const bool exhaustive = rademacher_is_exhaustive(n, mc);
  const std::size_t draws = exhaustive ? static_cast<std::size_t>(std::uint64_t{1} << n) : mc;
  const ConsensusSolver solver(set, data.dim(), options);
  const double inv_n = 1.0 / static_cast<double>(n);

  std::vector<double> values(draws);
  parallel_for(draws, [&](std::size_t i) {
    Vector sigma(n);
    if (exhaustive) {
      for (Index k = 0; k < n; ++k) sigma(k) = (i >> k) & 1U ? -1.0 : 1.0;
    } else {
      Rng stream = rng.substream(i);
      sigma = stream.rademacher_vector(n);
    }
    const Vector g = data.features * sigma;
    try {
      const double up = sup_linear(g, solver).value;
      const double down = sup_linear(-g, solver).value;
      values[i] = inv_n * std::max(up, down);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("draw " + std::to_string(i) + ": " + e.what(), e.block(), e.violation());
    } catch (const Error& e) {
      throw Error("draw " + std::to_string(i) + ": " + e.what());
    }
  });
  return values;
}

BoundReport estimate_empirical_rademacher(const LabeledDataset& data, const ConstraintSet& set,
                                          std::size_t mc, const Rng& rng,
                                          const SolverOptions& options) {
  const std::vector<double> values = rademacher_draws(data, set, mc, rng, options);
  const double count = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= count;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (count - 1.0));

  BoundReport rep;
  rep.kind = BoundKind::Rademacher;
  rep.theorem_tag = "monte_carlo";
  rep.value = mean;
  rep.parameters["draws"] = count;
  rep.parameters["sample_sd"] = sd;
  if (rademacher_is_exhaustive(data.size(), mc)) {
    rep.mc_stderr = 0.0;
    rep.flags.push_back("exhaustive: all 2^n sign vectors enumerated");
  } else {
    rep.mc_stderr = sd / std::sqrt(count);
  }
  return rep;
}

}  // namespace sideknow
