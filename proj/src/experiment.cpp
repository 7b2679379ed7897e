#include "sideknow/experiment.hpp"

#include "sideknow/constraints.hpp"
#include "sideknow/dataset_io.hpp"
#include "sideknow/erm.hpp"
#include "sideknow/parallel.hpp"
#include "sideknow/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sideknow {

ScalePreset scale_preset_from_string(const std::string& name) {
  if (name == "paper") return ScalePreset::Paper;
  if (name == "desk") return ScalePreset::Desk;
  throw Error("unknown preset '" + name + "' (expected paper or desk)");
}

std::string to_string(ScalePreset preset) { return preset == ScalePreset::Paper ? "paper" : "desk"; }

ExperimentConfig ExperimentConfig::for_preset(ScalePreset preset) {
  ExperimentConfig cfg;
  cfg.preset = preset;
  if (preset == ScalePreset::Paper) {
    cfg.p = 60;
    cfg.train_sizes = {300, 450, 600, 750};
    cfg.n_test = 750;
    cfg.n_knowledge = 120;
    cfg.n_replicates = 30;
    cfg.poset_pair_count = 1200;
  }
  return cfg;
}

void ExperimentConfig::check() const {
  if (p < 1) throw Error("experiment: p must be >= 1");
  if (train_sizes.empty()) throw Error("experiment: train_sizes must not be empty");
  for (Index n : train_sizes)
    if (n < folds) throw Error("experiment: every train size must be >= folds");
  if (n_test < 1 || n_knowledge < 2 || n_replicates < 1) {
    throw Error("experiment: n_test >= 1, n_knowledge >= 2 and n_replicates >= 1 required");
  }
  const Index max_pairs = n_knowledge * (n_knowledge - 1) / 2;
  if (poset_pair_count < 0 || poset_pair_count > max_pairs) {
    throw Error("experiment: poset_pair_count must lie in [0, " + std::to_string(max_pairs) + "]");
  }
  if (!(noise_sd >= 0.0) || !(knowledge_noise_sd >= 0.0)) throw Error("experiment: noise must be >= 0");
  if (!(r_cone > 0.0)) throw Error("experiment: r_cone must be positive");
  if (!(correlation > -1.0 / static_cast<double>(std::max<Index>(p - 1, 1)) && correlation < 1.0)) {
    throw Error("experiment: correlation must keep the covariance positive definite");
  }
  if (!(beta_norm > 0.0) || !(ball_radius >= beta_norm)) {
    throw Error("experiment: need 0 < beta_norm <= ball_radius");
  }
  if (lambda_grid.empty()) throw Error("experiment: lambda_grid must not be empty");
  if (folds < 2) throw Error("experiment: folds must be >= 2");
}

Json to_json(const ExperimentConfig& cfg) {
  return Json{{"preset", to_string(cfg.preset)},
              {"p", cfg.p},
              {"train_sizes", cfg.train_sizes},
              {"n_test", cfg.n_test},
              {"n_knowledge", cfg.n_knowledge},
              {"n_replicates", cfg.n_replicates},
              {"poset_pair_count", cfg.poset_pair_count},
              {"noise_sd", cfg.noise_sd},
              {"knowledge_noise_sd", cfg.knowledge_noise_sd},
              {"r_cone", cfg.r_cone},
              {"correlation", cfg.correlation},
              {"beta_norm", cfg.beta_norm},
              {"ball_radius", cfg.ball_radius},
              {"lambda_grid", cfg.lambda_grid},
              {"folds", cfg.folds},
              {"seed", cfg.seed}};
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error("experiment config must be a JSON object");
  ExperimentConfig cfg = ExperimentConfig::for_preset(
      scale_preset_from_string(j.value("preset", std::string("desk"))));
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "preset") continue;
      if (key == "p") cfg.p = value.get<Index>();
      else if (key == "train_sizes") cfg.train_sizes = value.get<std::vector<Index>>();
      else if (key == "n_test") cfg.n_test = value.get<Index>();
      else if (key == "n_knowledge") cfg.n_knowledge = value.get<Index>();
      else if (key == "n_replicates") cfg.n_replicates = value.get<int>();
      else if (key == "poset_pair_count") cfg.poset_pair_count = value.get<Index>();
      else if (key == "noise_sd") cfg.noise_sd = value.get<double>();
      else if (key == "knowledge_noise_sd") cfg.knowledge_noise_sd = value.get<double>();
      else if (key == "r_cone") cfg.r_cone = value.get<double>();
      else if (key == "correlation") cfg.correlation = value.get<double>();
      else if (key == "beta_norm") cfg.beta_norm = value.get<double>();
      else if (key == "ball_radius") cfg.ball_radius = value.get<double>();
      else if (key == "lambda_grid") cfg.lambda_grid = value.get<std::vector<double>>();
      else if (key == "folds") cfg.folds = value.get<int>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else throw Error("unknown experiment config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed experiment config: ") + e.what());
  }
  cfg.check();
  return cfg;
}

namespace {

// Draws `count` feature columns N(0, covariance) through the Cholesky factor.
Matrix draw_features(const Matrix& chol_lower, Index count, Rng& rng) {
  Matrix z(chol_lower.rows(), count);
  for (Index j = 0; j < count; ++j) z.col(j) = rng.normal_vector(chol_lower.rows());
  return chol_lower * z;
}

Vector draw_labels(const Matrix& x, const Vector& beta, double noise_sd, Rng& rng) {
  Vector y = x.transpose() * beta;
  if (noise_sd > 0.0) y += noise_sd * rng.normal_vector(y.size());
  return y;
}

}  // namespace

SyntheticData generate_synthetic(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.check();
  const Index p = cfg.p;
  SyntheticData out;
  out.covariance = Matrix::Constant(p, p, cfg.correlation);
  out.covariance.diagonal().setOnes();
  const Matrix chol = out.covariance.llt().matrixL();

  const Rng root(seed, "synthetic");
  Rng beta_rng = root.substream("beta");
  out.beta_true = cfg.beta_norm * beta_rng.unit_vector(p);

  Rng test_rng = root.substream("test");
  const Matrix xt = draw_features(chol, cfg.n_test, test_rng);
  out.test = LabeledDataset::make(xt, draw_labels(xt, out.beta_true, cfg.noise_sd, test_rng));

  Rng know_rng = root.substream("knowledge");
  const Matrix xk = draw_features(chol, cfg.n_knowledge, know_rng);
  out.knowledge = UnlabeledSet::make(xk, draw_labels(xk, out.beta_true, cfg.knowledge_noise_sd, know_rng));

  const Index n_max = *std::max_element(cfg.train_sizes.begin(), cfg.train_sizes.end());
  for (int r = 0; r < cfg.n_replicates; ++r) {
    Rng train_rng = root.substream("train").substream(static_cast<std::uint64_t>(r));
    const Matrix x = draw_features(chol, n_max, train_rng);
    out.train.push_back(LabeledDataset::make(x, draw_labels(x, out.beta_true, cfg.noise_sd, train_rng)));
  }
  return out;
}

KnowledgeSets build_knowledge_constraints(const UnlabeledSet& knowledge, const Vector& beta_true,
                                          const ExperimentConfig& cfg) {
  if (!knowledge.labels) throw Error("knowledge sample has no labels");
  const Vector& y = *knowledge.labels;
  const Index m = knowledge.size();
  KnowledgeSets sets;
  sets.polygonal = sets.quadratic = sets.conic = ConstraintSet::ball(cfg.ball_radius);

  std::vector<PairSpec> pairs;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) pairs.push_back(PairSpec{i, j, y(i) - y(j)});
  Rng pair_rng(cfg.seed, "poset_pairs");
  shuffle(pairs, pair_rng);
  pairs.resize(static_cast<std::size_t>(cfg.poset_pair_count));
  sets.polygonal.halfspaces = compile_poset(knowledge, pairs);

  // Smoothness over label-sorted knowledge points.
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y(a) < y(b); });
  Matrix sorted(knowledge.dim(), m);
  double level = 0.0;
  for (Index k = 0; k < m; ++k) {
    sorted.col(k) = knowledge.features.col(order[static_cast<std::size_t>(k)]);
    if (k + 1 < m) {
      const double step = y(order[static_cast<std::size_t>(k)]) - y(order[static_cast<std::size_t>(k + 1)]);
      level += step * step;
    }
  }
  sets.quadratic.ellipsoids.push_back(
      compile_quadratic_form(UnlabeledSet::make(sorted), GammaOperator::first_difference(), level));

  const double r = cfg.r_cone;
  const double true_norm = beta_true.norm();
  for (Index i = 0; i < m; ++i) {
    sets.conic.cones.push_back(SOConstraint{r * Matrix::Identity(knowledge.dim(), knowledge.dim()),
                                            -knowledge.features.col(i), y(i) + r * true_norm});
  }
  return sets;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

const SummaryRow& ExperimentResult::row(const std::string& setup, Index train_size) const {
  for (const auto& r : summary)
    if (r.setup == setup && r.train_size == train_size) return r;
  throw Error("no summary row for " + setup + " at train size " + std::to_string(train_size));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.check();
  const SyntheticData data = generate_synthetic(cfg, cfg.seed);
  const KnowledgeSets sets = build_knowledge_constraints(data.knowledge, data.beta_true, cfg);
  const std::optional<ConstraintSet> by_setup[kSetupCount] = {std::nullopt, std::nullopt, sets.polygonal,
                                                              sets.quadratic, sets.conic};

  const auto sizes = cfg.train_sizes.size();
  const std::size_t cells = static_cast<std::size_t>(cfg.n_replicates) * sizes * kSetupCount;
  ExperimentResult result;
  result.records.resize(cells);
  const Rng cv_root(cfg.seed, "cross_validation");

  parallel_for(cells, [&](std::size_t c) {
    const auto setup = static_cast<int>(c % kSetupCount);
    const std::size_t si = (c / kSetupCount) % sizes;
    const auto rep = static_cast<int>(c / (kSetupCount * sizes));
    const Index n = cfg.train_sizes[si];
    ExperimentRecord& rec = result.records[c];
    rec.setup = kSetupNames[setup];
    rec.train_size = n;
    rec.replicate = rep;

    std::vector<Index> prefix(static_cast<std::size_t>(n));
    std::iota(prefix.begin(), prefix.end(), Index{0});
    const LabeledDataset train = data.train[static_cast<std::size_t>(rep)].subset(prefix);
    try {
      double lambda = 0.0;
      if (setup != 0) {
        // The same folds for every setup of a (replicate, size) cell.
        const Rng fold_rng = cv_root.substream(static_cast<std::uint64_t>(rep) * 1000 + si);
        lambda = cross_validate_lambda(train, by_setup[setup], cfg.lambda_grid, cfg.folds, fold_rng).best_lambda;
      }
      const FitResult fit = fit_constrained_ridge(train, lambda, by_setup[setup]);
      rec.lambda = lambda;
      rec.rmse = predict_rmse(fit.model, data.test);
    } catch (const std::exception& e) {
      rec.rmse = std::numeric_limits<double>::quiet_NaN();
      rec.error = e.what();
    }
  });

  for (int setup = 0; setup < kSetupCount; ++setup) {
    for (Index n : cfg.train_sizes) {
      std::vector<double> values;
      for (const auto& rec : result.records)
        if (rec.setup == kSetupNames[setup] && rec.train_size == n && std::isfinite(rec.rmse))
          values.push_back(rec.rmse);
      result.summary.push_back(SummaryRow{kSetupNames[setup], n, quantile(values, 0.25),
                                          quantile(values, 0.5), quantile(values, 0.75)});
    }
  }
  return result;
}

std::string results_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "setup,train_size,replicate,rmse\n";
  for (const auto& r : result.records) {
    out << r.setup << ',' << r.train_size << ',' << r.replicate << ',' << format_double(r.rmse) << '\n';
  }
  return out.str();
}

std::string summary_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "setup,train_size,q25,q50,q75\n";
  for (const auto& r : result.summary) {
    out << r.setup << ',' << r.train_size << ',' << format_double(r.q25) << ',' << format_double(r.q50)
        << ',' << format_double(r.q75) << '\n';
  }
  return out.str();
}

}  // namespace sideknow
