#include "doctest.h"

#include "sideknow/erm.hpp"
#include "sideknow/experiment.hpp"

#include <cmath>
#include <set>

using namespace sideknow;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.p = 4;
  cfg.train_sizes = {10, 20};
  cfg.n_test = 30;
  cfg.n_knowledge = 8;
  cfg.n_replicates = 2;
  cfg.poset_pair_count = 10;
  cfg.folds = 3;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("noiseless data is fit exactly by the true coefficients") {
  ExperimentConfig cfg = small_config();
  cfg.noise_sd = 0.0;
  const SyntheticData d = generate_synthetic(cfg, 3);
  CHECK(predict_rmse({d.beta_true}, d.test) <= 1e-12);
  for (const LabeledDataset& train : d.train) CHECK(predict_rmse({d.beta_true}, train) <= 1e-12);
  CHECK(d.beta_true.norm() == doctest::Approx(cfg.beta_norm).epsilon(1e-12));
}

TEST_CASE("same seed gives identical data, different seeds differ") {
  const ExperimentConfig cfg = small_config();
  const SyntheticData a = generate_synthetic(cfg, 5);
  const SyntheticData b = generate_synthetic(cfg, 5);
  const SyntheticData c = generate_synthetic(cfg, 6);
  CHECK(a.test.features == b.test.features);
  CHECK(a.train[1].labels == b.train[1].labels);
  CHECK(a.knowledge.features == b.knowledge.features);
  CHECK(a.test.features != c.test.features);
  REQUIRE(a.train.size() == 2);
  CHECK(a.train[0].size() == 20);
}

TEST_CASE("feature covariance matches the equicorrelated target") {
  ExperimentConfig cfg = small_config();
  cfg.n_test = 100'000;
  const SyntheticData d = generate_synthetic(cfg, 8);
  const Matrix& x = d.test.features;
  const Vector mean = x.rowwise().mean();
  const Matrix centered = x.colwise() - mean;
  const Matrix sample = centered * centered.transpose() / static_cast<double>(x.cols() - 1);
  for (Index i = 0; i < cfg.p; ++i)
    for (Index j = 0; j < cfg.p; ++j) {
      const double target = i == j ? 1.0 : cfg.correlation;
      CHECK(std::abs(sample(i, j) - target) <= 0.02);
      CHECK(d.covariance(i, j) == doctest::Approx(target).epsilon(1e-15));
    }
}

TEST_CASE("noiseless knowledge keeps the true coefficients feasible") {
  ExperimentConfig cfg = small_config();
  for (double noise : {0.0, 0.5}) {
    cfg.knowledge_noise_sd = noise;
    const SyntheticData d = generate_synthetic(cfg, 9);
    const KnowledgeSets sets = build_knowledge_constraints(d.knowledge, d.beta_true, cfg);
    CHECK(sets.polygonal.halfspaces.size() == static_cast<std::size_t>(cfg.poset_pair_count));
    CHECK(sets.conic.cones.size() == static_cast<std::size_t>(cfg.n_knowledge));
    if (noise == 0.0) {
      CHECK(sets.polygonal.max_violation(d.beta_true) <= 1e-9);
      CHECK(sets.quadratic.max_violation(d.beta_true) <= 1e-9);
      CHECK(sets.conic.max_violation(d.beta_true) <= 1e-9);
    }
  }
}

TEST_CASE("preset sizes") {
  const ExperimentConfig paper = ExperimentConfig::for_preset(ScalePreset::Paper);
  const ExperimentConfig desk = ExperimentConfig::for_preset(ScalePreset::Desk);
  CHECK(paper.poset_pair_count == 1200);
  CHECK(kSetupCount * paper.train_sizes.size() * paper.n_replicates == 600);
  CHECK(kSetupCount * desk.train_sizes.size() * desk.n_replicates == 150);
  CHECK_NOTHROW(paper.check());
  CHECK_NOTHROW(desk.check());

  ExperimentConfig bad = desk;
  bad.poset_pair_count = desk.n_knowledge * desk.n_knowledge;
  CHECK_THROWS_AS(bad.check(), Error);
}

TEST_CASE("config JSON round trip and overrides") {
  ExperimentConfig cfg = small_config();
  const ExperimentConfig back = experiment_config_from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
  const ExperimentConfig over = experiment_config_from_json(Json::parse(R"({"preset": "paper", "p": 7})"));
  CHECK(over.p == 7);
  CHECK(over.n_replicates == 30);
  CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"no_such_key": 1})")), Error);
}

TEST_CASE("quantile uses linear interpolation") {
  CHECK(quantile({3, 1, 2, 4}, 0.5) == 2.5);
  CHECK(quantile({3, 1, 2, 4}, 0.25) == 1.75);
  CHECK(quantile({5}, 0.75) == 5);
  CHECK(quantile({1, 2}, 0.0) == 1);
  CHECK(quantile({1, 2}, 1.0) == 2);
}

TEST_CASE("small experiment produces every record and is reproducible") {
  const ExperimentConfig cfg = small_config();
  const ExperimentResult a = run_experiment(cfg);
  const ExperimentResult b = run_experiment(cfg);
  CHECK(a.records.size() == kSetupCount * 2 * 2);
  CHECK(a.summary.size() == kSetupCount * 2);
  CHECK(results_csv(a) == results_csv(b));
  CHECK(summary_csv(a) == summary_csv(b));
  std::set<std::string> setups;
  for (const ExperimentRecord& r : a.records) {
    setups.insert(r.setup);
    CHECK(r.error.empty());
    CHECK(std::isfinite(r.rmse));
  }
  CHECK(setups.size() == kSetupCount);
  const SummaryRow& row = a.row("ridge+conic", 20);
  CHECK(row.q25 <= row.q50);
  CHECK(row.q50 <= row.q75);
}
