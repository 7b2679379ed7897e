#pragma once

#include "sideknow/consensus.hpp"
#include "sideknow/rng.hpp"
#include "sideknow/types.hpp"

namespace sideknow {

struct FitResult {
  LinearModel model;
  double objective = 0.0;  // (1/n)||y - X^T beta||^2 + lambda ||beta||^2
  SolverReport report;
  std::vector<std::string> flags;
};

/// (1/n)||y - X^T beta||^2 + lambda ||beta||^2.
double ridge_objective(const LabeledDataset& data, const Vector& beta, double lambda);

/// Minimizes the ridge objective over `set`; without a set the normal
/// equations are solved directly. lambda = 0 with a rank-deficient design and
/// no set returns the minimum-norm least-squares solution, flagged.
FitResult fit_constrained_ridge(const LabeledDataset& data, double lambda,
                                const std::optional<ConstraintSet>& set,
                                const SolverOptions& options = {});

struct CvRow {
  double lambda = 0.0;
  int fold = 0;
  double rmse = 0.0;
};

struct CvResult {
  double best_lambda = 0.0;
  std::vector<double> lambdas;    // deduplicated, ascending
  std::vector<double> mean_rmse;  // aligned with lambdas
  std::vector<CvRow> table;
};

/// k-fold cross validation over a lambda grid. Folds come from a seeded
/// shuffle; ties in mean validation RMSE go to the larger lambda.
CvResult cross_validate_lambda(const LabeledDataset& data, const std::optional<ConstraintSet>& set,
                               const std::vector<double>& grid, int folds, const Rng& rng,
                               const SolverOptions& options = {});

double predict_rmse(const LinearModel& model, const LabeledDataset& test);

}  // namespace sideknow
