#pragma once

#include "sideknow/serialize.hpp"
#include "sideknow/types.hpp"

#include <cstdint>
#include <string>

namespace sideknow {

enum class ScalePreset { Paper, Desk };

ScalePreset scale_preset_from_string(const std::string& name);
std::string to_string(ScalePreset preset);

/// Synthetic semi-supervised regression study. Generator details that the
/// original study leaves open are fixed here: equicorrelated Gaussian
/// features, a coefficient vector of fixed norm, Gaussian label noise.
struct ExperimentConfig {
  ScalePreset preset = ScalePreset::Desk;
  Index p = 20;
  std::vector<Index> train_sizes{60, 100, 150};
  Index n_test = 200;
  Index n_knowledge = 40;
  int n_replicates = 10;
  Index poset_pair_count = 200;
  double noise_sd = 1.0;
  double knowledge_noise_sd = 0.0;  // knowledge labels are noiseless by default
  double r_cone = 0.5;
  double correlation = 0.3;
  double beta_norm = 3.0;
  double ball_radius = 10.0;
  std::vector<double> lambda_grid{1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  int folds = 5;
  std::uint64_t seed = 7;

  static ExperimentConfig for_preset(ScalePreset preset);
  /// Throws sideknow::Error on inconsistent settings.
  void check() const;
};

Json to_json(const ExperimentConfig& cfg);
/// Starts from the preset named in "preset" (desk when absent) and applies
/// every other key present as an override.
ExperimentConfig experiment_config_from_json(const Json& j);

struct SyntheticData {
  std::vector<LabeledDataset> train;  // one per replicate, largest train size
  UnlabeledSet knowledge;             // with labels
  LabeledDataset test;
  Vector beta_true;
  Matrix covariance;
};

/// Deterministic in (cfg, seed). Smaller training sets are prefixes of the
/// per-replicate samples.
SyntheticData generate_synthetic(const ExperimentConfig& cfg, std::uint64_t seed);

struct KnowledgeSets {
  ConstraintSet polygonal;  // poset pairs beta^T(x_i - x_j) <= y_i - y_j
  ConstraintSet quadratic;  // ||Gamma X_U^T beta||^2 <= sum of squared label steps
  ConstraintSet conic;      // beta^T x_i + r ||beta|| <= y_i + r ||beta_true||
};

KnowledgeSets build_knowledge_constraints(const UnlabeledSet& knowledge, const Vector& beta_true,
                                          const ExperimentConfig& cfg);

inline constexpr const char* kSetupNames[] = {"mlr", "ridge", "ridge+polygonal", "ridge+quadratic",
                                              "ridge+conic"};
inline constexpr int kSetupCount = 5;

struct ExperimentRecord {
  std::string setup;
  Index train_size = 0;
  int replicate = 0;
  double rmse = 0.0;     // NaN when the cell failed
  double lambda = 0.0;   // selected by cross validation (0 for mlr)
  std::string error;     // empty on success
};

struct SummaryRow {
  std::string setup;
  Index train_size = 0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRecord> records;
  std::vector<SummaryRow> summary;

  const SummaryRow& row(const std::string& setup, Index train_size) const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Linear-interpolation quantile (R type 7) of unsorted values.
double quantile(std::vector<double> values, double q);

/// "setup,train_size,replicate,rmse" with one line per record.
std::string results_csv(const ExperimentResult& result);
/// "setup,train_size,q25,q50,q75".
std::string summary_csv(const ExperimentResult& result);

}  // namespace sideknow
