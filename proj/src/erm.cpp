#include "sideknow/erm.hpp"

#include "sideknow/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace sideknow {

double ridge_objective(const LabeledDataset& data, const Vector& beta, double lambda) {
  const Vector resid = data.labels - data.features.transpose() * beta;
  return resid.squaredNorm() / static_cast<double>(data.size()) + lambda * beta.squaredNorm();
}

namespace {

FitResult fit_unconstrained(const LabeledDataset& data, double lambda) {
  const Index p = data.dim();
  const double nd = static_cast<double>(data.size());
  FitResult out;
  out.report.converged = true;
  if (lambda > 0.0) {
    Matrix gram = data.features * data.features.transpose() / nd;
    gram.diagonal().array() += lambda;
    out.model.beta = gram.llt().solve(data.features * data.labels / nd);
  } else {
    // Least squares on X^T beta = y; the orthogonal decomposition yields the
    // minimum-norm solution when the design is rank deficient.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(data.features.transpose());
    out.model.beta = cod.solve(data.labels);
    if (cod.rank() < p) {
      out.flags.push_back("rank-deficient design with lambda = 0: minimum-norm solution returned");
    }
  }
  out.objective = ridge_objective(data, out.model.beta, lambda);
  return out;
}

}  // namespace

FitResult fit_constrained_ridge(const LabeledDataset& data, double lambda,
                                const std::optional<ConstraintSet>& set,
                                const SolverOptions& options) {
  if (!(lambda >= 0.0)) throw Error("lambda must be nonnegative");
  if (!set) return fit_unconstrained(data, lambda);

  const Index p = data.dim();
  const double nd = static_cast<double>(data.size());
  Matrix P = (2.0 / nd) * data.features * data.features.transpose();
  P.diagonal().array() += 2.0 * lambda;
  const Vector q = -(2.0 / nd) * data.features * data.labels;

  const ConsensusSolver solver(*set, p, options);
  const QpSolution sol = solver.solve(P, q);
  FitResult out;
  out.model.beta = sol.beta;
  out.report = sol.report;
  out.objective = ridge_objective(data, sol.beta, lambda);
  if (!sol.report.converged) {
    out.flags.push_back("iteration limit reached before the residual tolerance");
  }
  return out;
}

double predict_rmse(const LinearModel& model, const LabeledDataset& test) {
  if (test.size() == 0) throw Error("predict_rmse: empty test set");
  if (model.beta.size() != test.dim()) throw Error("predict_rmse: model dimension mismatch");
  const Vector resid = test.labels - test.features.transpose() * model.beta;
  return std::sqrt(resid.squaredNorm() / static_cast<double>(test.size()));
}

CvResult cross_validate_lambda(const LabeledDataset& data, const std::optional<ConstraintSet>& set,
                               const std::vector<double>& grid, int folds, const Rng& rng,
                               const SolverOptions& options) {
  if (grid.empty()) throw Error("cross_validate_lambda: empty lambda grid");
  if (folds < 2) throw Error("cross_validate_lambda: need at least 2 folds");
  const Index n = data.size();
  if (n < folds) throw Error("cross_validate_lambda: fewer examples than folds");

  CvResult out;
  out.lambdas = grid;
  std::sort(out.lambdas.begin(), out.lambdas.end());
  out.lambdas.erase(std::unique(out.lambdas.begin(), out.lambdas.end()), out.lambdas.end());
  for (double l : out.lambdas)
    if (!(l >= 0.0)) throw Error("cross_validate_lambda: lambda values must be nonnegative");

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng fold_rng = rng.substream("folds");
  shuffle(order, fold_rng);
  std::vector<std::vector<Index>> train(static_cast<std::size_t>(folds));
  std::vector<std::vector<Index>> valid(static_cast<std::size_t>(folds));
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto f = pos % static_cast<std::size_t>(folds);
    for (std::size_t g = 0; g < static_cast<std::size_t>(folds); ++g) {
      (g == f ? valid[g] : train[g]).push_back(order[pos]);
    }
  }

  const std::size_t cells = out.lambdas.size() * static_cast<std::size_t>(folds);
  out.table.resize(cells);
  parallel_for(cells, [&](std::size_t c) {
    const std::size_t li = c / static_cast<std::size_t>(folds);
    const std::size_t f = c % static_cast<std::size_t>(folds);
    const FitResult fit = fit_constrained_ridge(data.subset(train[f]), out.lambdas[li], set, options);
    out.table[c] = CvRow{out.lambdas[li], static_cast<int>(f), predict_rmse(fit.model, data.subset(valid[f]))};
  });

  out.mean_rmse.assign(out.lambdas.size(), 0.0);
  for (const auto& row : out.table) {
    const auto li = static_cast<std::size_t>(
        std::lower_bound(out.lambdas.begin(), out.lambdas.end(), row.lambda) - out.lambdas.begin());
    out.mean_rmse[li] += row.rmse / static_cast<double>(folds);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t li = 0; li < out.lambdas.size(); ++li) {
    if (out.mean_rmse[li] <= best) {
      best = out.mean_rmse[li];
      out.best_lambda = out.lambdas[li];
    }
  }
  return out;
}

}  // namespace sideknow
