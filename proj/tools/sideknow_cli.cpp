// sideknow: compile side knowledge into constraint sets, fit constrained
// ridge models, evaluate complexity bounds and run the synthetic study.
//
// stdout carries data (JSON or CSV); stderr carries diagnostics. Exit codes:
// 0 success, 1 computational failure (JSON on stderr), 2 usage error.

#include "sideknow/bounds.hpp"
#include "sideknow/constraints.hpp"
#include "sideknow/dataset_io.hpp"
#include "sideknow/erm.hpp"
#include "sideknow/experiment.hpp"
#include "sideknow/geometry.hpp"
#include "sideknow/parallel.hpp"
#include "sideknow/rademacher.hpp"
#include "sideknow/serialize.hpp"
#include "verify/acceptance.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace sideknow;

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::size_t mc = 2000;
  std::optional<double> eps;
  std::optional<double> tol;
  std::optional<std::size_t> threads;
  std::string preset;
  std::string out;
  std::string config;
};

SolverOptions solver_options(const GlobalOptions& g) {
  SolverOptions o;
  if (g.tol) o.tol = *g.tol;
  return o;
}

void emit(const Json& j, const GlobalOptions& g) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(g.out, j);
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number in list: '" + item + "'");
    }
  }
  if (values.empty()) throw UsageError("empty list");
  return values;
}

// ---- compile ----------------------------------------------------------------

Index as_index(const Json& j) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw ParseError("expected a nonnegative index", 0);
  return j.get<Index>();
}

std::vector<PairSpec> pairs_from_json(const Json& j) {
  std::vector<PairSpec> pairs;
  for (const auto& e : j) {
    if (e.is_array() && e.size() == 3) {
      pairs.push_back(PairSpec{as_index(e[0]), as_index(e[1]), e[2].get<double>()});
    } else if (e.is_object()) {
      pairs.push_back(PairSpec{as_index(e.at("i")), as_index(e.at("j")), e.at("c").get<double>()});
    } else {
      throw Error("pair must be [i, j, c] or {\"i\", \"j\", \"c\"}");
    }
  }
  return pairs;
}

std::vector<Index> indices_from_json(const Json& j) {
  std::vector<Index> out;
  for (const auto& e : j) out.push_back(as_index(e));
  return out;
}

UnlabeledSet knowledge_sample(const Json& spec, const fs::path& base) {
  const Json& u = spec.at("unlabeled");
  if (u.is_string()) {
    fs::path path = u.get<std::string>();
    if (path.is_relative()) path = base / path;
    return load_unlabeled(path.string(), csv_layout_from_string(spec.value("layout", "rows")));
  }
  // Inline rows, one example per row.
  const Matrix rows = matrix_from_json(u);
  return UnlabeledSet::make(rows.transpose());
}

ConstraintSet compile_knowledge(const Json& spec, const fs::path& base) {
  static const std::vector<std::string> known = {
      "unlabeled", "layout", "ball_radius", "poset", "must_link", "sparsity_l1", "linf_box",
      "quadratic_pairwise", "quadratic_form", "graph_laplacian", "robust_soc", "chance_soc"};
  for (const auto& [key, value] : spec.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw Error("unknown knowledge key '" + key + "'");
  }
  ConstraintSet set = ConstraintSet::ball(spec.value("ball_radius", 1.0));
  const bool needs_sample = spec.contains("poset") || spec.contains("must_link") || spec.contains("sparsity_l1") ||
                            spec.contains("linf_box") || spec.contains("quadratic_pairwise") ||
                            spec.contains("quadratic_form") || spec.contains("graph_laplacian");
  UnlabeledSet u;
  if (needs_sample) u = knowledge_sample(spec, base);
  auto append = [&](std::vector<HalfSpace> hs) {
    set.halfspaces.insert(set.halfspaces.end(), hs.begin(), hs.end());
  };

  if (spec.contains("poset")) append(compile_poset(u, pairs_from_json(spec["poset"])));
  if (spec.contains("must_link")) append(compile_must_link(u, pairs_from_json(spec["must_link"])));
  for (const auto& b : spec.value("sparsity_l1", Json::array())) {
    SparsityConstraint c =
        compile_sparsity_l1(u, indices_from_json(b.at("indices")), b.at("level").get<double>(), b.value("expand", false));
    if (auto* block = std::get_if<L1PredictionBlock>(&c)) {
      set.l1_blocks.push_back(*block);
    } else {
      append(std::get<std::vector<HalfSpace>>(c));
    }
  }
  for (const auto& b : spec.value("linf_box", Json::array()))
    append(compile_linf_box(u, indices_from_json(b.at("indices")), b.at("level").get<double>()));
  for (const auto& q : spec.value("quadratic_pairwise", Json::array())) {
    const std::string mode = q.value("mode", "must_link");
    if (mode != "must_link" && mode != "product") throw Error("quadratic_pairwise mode must be must_link or product");
    auto es = compile_quadratic_pairwise(u, pairs_from_json(q.at("pairs")),
                                         mode == "product" ? PairwiseMode::Product : PairwiseMode::MustLink);
    set.ellipsoids.insert(set.ellipsoids.end(), es.begin(), es.end());
  }
  for (const auto& q : spec.value("quadratic_form", Json::array())) {
    GammaOperator gamma;
    const Json g = q.value("gamma", Json("identity"));
    if (g.is_string()) {
      const std::string name = g.get<std::string>();
      if (name == "identity") gamma = GammaOperator::identity();
      else if (name == "first_difference") gamma = GammaOperator::first_difference();
      else throw Error("gamma must be identity, first_difference or a matrix");
    } else {
      gamma = GammaOperator::from_matrix(matrix_from_json(g));
    }
    set.ellipsoids.push_back(compile_quadratic_form(u, gamma, q.at("level").get<double>()));
  }
  for (const auto& q : spec.value("graph_laplacian", Json::array())) {
    GraphSpec graph;
    if (q.contains("gaussian")) {
      const Json& w = q["gaussian"];
      graph = gaussian_edge_weights(u, w.value("scale", 1.0), w.value("q", 2.0));
    } else {
      graph.node_count = u.size();
      for (const auto& e : q.at("edges")) {
        graph.edges.push_back(GraphEdge{as_index(e.at(0)), as_index(e.at(1)), e.size() > 2 ? e[2].get<double>() : 1.0});
      }
    }
    set.ellipsoids.push_back(compile_graph_laplacian(u, graph, q.at("level").get<double>()));
  }
  for (const auto& c : spec.value("robust_soc", Json::array()))
    set.cones.push_back(compile_robust_soc(vector_from_json(c.at("mean")), matrix_from_json(c.at("spread"))));
  for (const auto& c : spec.value("chance_soc", Json::array())) {
    set.cones.push_back(compile_chance_soc(vector_from_json(c.at("mean")), matrix_from_json(c.at("covariance")),
                                           c.at("eta").get<double>()));
  }
  return set;
}

Index set_dimension(const ConstraintSet& set) {
  for (const auto& h : set.halfspaces) return h.normal.size();
  for (const auto& e : set.ellipsoids) return e.matrix.rows();
  for (const auto& c : set.cones) return c.map.cols();
  for (const auto& b : set.l1_blocks) return b.columns.rows();
  return 0;
}

void report_diagnostics(const ConstraintSet& set, Index p) {
  const Diagnostics d = validate(set, p);
  if (!d.warnings.empty() || !d.errors.empty()) std::cerr << to_json(d).dump() << '\n';
  if (!d.ok()) throw Error("invalid constraint set: " + d.errors.front());
}

// ---- bound helpers ----------------------------------------------------------

// Ball plus every ellipsoid, combined by the trace criterion.
EllipsoidConstraint intersection_ellipsoid(const LabeledDataset& data, const ConstraintSet& set, std::uint64_t seed,
                                           std::vector<std::string>& flags) {
  const Index p = data.dim();
  const EllipsoidConstraint ball{Matrix::Identity(p, p), set.ball_radius * set.ball_radius};
  if (set.ellipsoids.empty()) return ball.normalized();
  if (set.ellipsoids.size() == 1) {
    const GammaChoice g = trace_min_gamma(ball, set.ellipsoids.front(), data.features);
    return kahan_combine(ball, set.ellipsoids.front(), g.gamma);
  }
  std::vector<EllipsoidConstraint> all{ball};
  all.insert(all.end(), set.ellipsoids.begin(), set.ellipsoids.end());
  const SimplexChoice s = simplex_trace_min(all, data.features, seed);
  Matrix a = Matrix::Zero(p, p);
  for (std::size_t k = 0; k < all.size(); ++k) a += s.gamma(static_cast<Index>(k)) * all[k].normalized().matrix;
  flags.push_back("simplex_trace_min is best-effort for more than two ellipsoids");
  return EllipsoidConstraint{0.5 * (a + a.transpose()), 1.0};
}

const HalfSpace& pick_halfspace(const ConstraintSet& set, std::size_t index) {
  if (index >= set.halfspaces.size())
    throw Error("theorem needs half-space #" + std::to_string(index) + " but the set has " +
                std::to_string(set.halfspaces.size()));
  return set.halfspaces[index];
}

double require_eps(const GlobalOptions& g) {
  if (!g.eps) throw UsageError("--eps is required for covering bounds");
  if (!(*g.eps > 0.0)) throw UsageError("--eps must be positive");
  return *g.eps;
}

Json report_json(const BoundReport& rep) {
  Json j = to_json(rep);
  if (rep.kind == BoundKind::CoveringLog) j["value_log10"] = rep.value / std::log(10.0);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Side-knowledge constraints, constrained ridge regression and complexity bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every stochastic step");
  app.add_option("--mc", g.mc, "Monte Carlo draws")->check(CLI::PositiveNumber);
  app.add_option("--eps", g.eps, "Covering radius epsilon");
  app.add_option("--tol", g.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads (also SIDEKNOW_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--preset", g.preset, "Experiment preset: desk or paper");
  app.add_option("--out", g.out, "Output file (directory for experiment)");
  app.add_option("--config", g.config, "JSON file overriding the experiment preset");

  // compile
  auto* compile = app.add_subcommand("compile", "Knowledge JSON -> constraint set JSON");
  std::string knowledge_path;
  compile->add_option("knowledge", knowledge_path, "Knowledge description (JSON)")->required();

  // shared data/set inputs
  std::string data_path, set_path, layout = "rows";
  auto add_inputs = [&](CLI::App* sub, bool need_set) {
    sub->add_option("--data", data_path, "Labeled CSV (y column required)")->required();
    sub->add_option("--layout", layout, "CSV layout: rows or columns");
    auto* s = sub->add_option("--set", set_path, "Constraint set JSON");
    if (need_set) s->required();
  };

  // fit
  auto* fit = app.add_subcommand("fit", "Constrained ridge regression");
  add_inputs(fit, false);
  std::optional<double> lambda;
  std::string grid_text, cv_table;
  int folds = 5;
  auto* lambda_opt = fit->add_option("--lambda", lambda, "Ridge penalty");
  fit->add_option("--grid", grid_text, "Comma-separated penalty grid for cross validation")->excludes(lambda_opt);
  fit->add_option("--folds", folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
  fit->add_option("--cv-table", cv_table, "Write per-fold CV results as CSV");

  // bound
  auto* bound = app.add_subcommand("bound", "Evaluate one complexity bound");
  add_inputs(bound, true);
  std::string theorem;
  std::size_t hs_index = 0;
  std::optional<double> gamma;
  double norm_r = 2.0, lower_c = 1.0, delta = 0.05, lipschitz = 1.0, c_chain = 1.0;
  std::optional<double> emp_risk, eps_max, margin;
  std::string variant = "sound", cover = "polygonal";
  bound->add_option("--theorem", theorem, "Bound selector")
      ->required()
      ->check(CLI::IsMember({"single_halfspace", "halfspace_dual", "polygonal", "linear_quadratic",
                             "ellipsoid_upper", "ellipsoid_lower", "ellipsoid_product", "quadratic_dual", "conic",
                             "dudley", "generalization"}));
  bound->add_option("--halfspace", hs_index, "Half-space index for single-constraint bounds");
  bound->add_option("--gamma", gamma, "Combination weight for linear_quadratic")->check(CLI::Range(0.0, 1.0));
  bound->add_option("--margin", margin, "Margin delta for half-spaces that carry none")->check(CLI::PositiveNumber);
  bound->add_option("--r", norm_r, "Feature norm exponent r (polygonal)");
  bound->add_option("--C", lower_c, "Constant of the ellipsoid lower bound")->check(CLI::PositiveNumber);
  bound->add_option("--variant", variant, "halfspace_dual variant")->check(CLI::IsMember({"sound", "paper_literal"}));
  bound->add_option("--cover", cover, "Covering bound fed to dudley")
      ->check(CLI::IsMember({"polygonal", "single_halfspace", "ellipsoid_product"}));
  bound->add_option("--eps-max", eps_max, "Upper limit of the entropy integral");
  bound->add_option("--c-chain", c_chain, "Chaining constant")->check(CLI::PositiveNumber);
  bound->add_option("--emp-risk", emp_risk, "Empirical risk (generalization)");
  bound->add_option("--lipschitz", lipschitz, "Loss Lipschitz constant (generalization)");
  bound->add_option("--delta", delta, "Confidence level (generalization)");

  // estimate-rademacher
  auto* estimate = app.add_subcommand("estimate-rademacher", "Monte Carlo empirical Rademacher complexity");
  add_inputs(estimate, true);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Synthetic semi-supervised study");

  // verify
  auto* verify = app.add_subcommand("verify", "Bounds against Monte Carlo estimates and oracles");
  std::string suite = "sandwich";
  Index vp = 5, vn = 30;
  int instances = 3;
  verify->add_option("--suite", suite, "sandwich, all, or comma-separated criterion ids");
  verify->add_option("--p", vp, "Dimension (sandwich)")->check(CLI::PositiveNumber);
  verify->add_option("--n", vn, "Sample size (sandwich)")->check(CLI::PositiveNumber);
  verify->add_option("--instances", instances, "Random instances (sandwich)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (g.threads) set_thread_count(*g.threads);
    const SolverOptions sopts = solver_options(g);

    auto load_data = [&] { return load_dataset(data_path, csv_layout_from_string(layout)); };
    auto load_set = [&](Index p) {
      ConstraintSet set = constraint_set_from_json(read_json_file(set_path));
      report_diagnostics(set, p);
      return set;
    };

    if (*compile) {
      const Json spec = read_json_file(knowledge_path);
      const ConstraintSet set = compile_knowledge(spec, fs::path(knowledge_path).parent_path());
      const Index p = set_dimension(set);
      if (p > 0) report_diagnostics(set, p);
      emit(to_json(set), g);
    } else if (*fit) {
      const LabeledDataset data = load_data();
      std::optional<ConstraintSet> set;
      if (!set_path.empty()) set = load_set(data.dim());
      Json out;
      double chosen = lambda.value_or(0.0);
      if (!grid_text.empty()) {
        const CvResult cv = cross_validate_lambda(data, set, parse_list(grid_text), folds, Rng(g.seed, "cv"), sopts);
        chosen = cv.best_lambda;
        out["cv"] = {{"lambdas", cv.lambdas}, {"mean_rmse", cv.mean_rmse}, {"folds", folds}};
        if (!cv_table.empty()) {
          std::ofstream table(cv_table);
          if (!table) throw Error("cannot write " + cv_table);
          table << "lambda,fold,rmse\n";
          for (const auto& row : cv.table)
            table << format_double(row.lambda) << ',' << row.fold << ',' << format_double(row.rmse) << '\n';
        }
      } else if (!lambda) {
        throw UsageError("fit needs --lambda or --grid");
      }
      const FitResult result = fit_constrained_ridge(data, chosen, set, sopts);
      out["model"] = to_json(result.model);
      out["lambda"] = chosen;
      out["objective"] = result.objective;
      out["train_rmse"] = predict_rmse(result.model, data);
      out["solver"] = {{"iterations", result.report.iterations},
                       {"converged", result.report.converged},
                       {"max_violation", result.report.max_violation}};
      out["flags"] = result.flags;
      emit(out, g);
    } else if (*bound) {
      const LabeledDataset data = load_data();
      ConstraintSet set = load_set(data.dim());
      if (margin)
        for (auto& h : set.halfspaces)
          if (!h.margin) h.margin = *margin;
      const double bb = set.ball_radius;
      const Index n = data.size();
      std::vector<std::string> extra_flags;
      BoundReport rep;
      auto cover_at = [&](double eps) -> BoundReport {
        if (cover == "single_halfspace") return covering_single_halfspace(data, pick_halfspace(set, hs_index), eps, bb);
        if (cover == "ellipsoid_product") {
          const EllipsoidConstraint a = intersection_ellipsoid(data, set, g.seed, extra_flags);
          const Eigen::SelfAdjointEigenSolver<Matrix> eig(a.matrix, Eigen::EigenvaluesOnly);
          return covering_ellipsoid_product(eig.eigenvalues(), data.feature_bound, eps);
        }
        return covering_polygonal(data, set.halfspaces, bb, eps, NormPair::from_r(norm_r));
      };

      if (theorem == "single_halfspace") {
        rep = covering_single_halfspace(data, pick_halfspace(set, hs_index), require_eps(g), bb);
      } else if (theorem == "halfspace_dual") {
        rep = rademacher_dual_halfspace(data, pick_halfspace(set, hs_index), bb, g.mc, Rng(g.seed, "halfspace_dual"),
                                        variant == "sound" ? DualVariant::Sound : DualVariant::PaperLiteral);
      } else if (theorem == "polygonal") {
        rep = covering_polygonal(data, set.halfspaces, bb, require_eps(g), NormPair::from_r(norm_r));
      } else if (theorem == "linear_quadratic") {
        const Index p = data.dim();
        const EllipsoidConstraint ball{Matrix::Identity(p, p), bb * bb};
        if (set.ellipsoids.empty()) throw Error("linear_quadratic needs at least one ellipsoid in the set");
        const EllipsoidConstraint e1 = set.ellipsoids.size() >= 2 ? set.ellipsoids[0] : ball;
        const EllipsoidConstraint e2 = set.ellipsoids.size() >= 2 ? set.ellipsoids[1] : set.ellipsoids[0];
        const double gm = gamma ? *gamma : trace_min_gamma(e1, e2, data.features).gamma;
        rep = covering_linear_quadratic(data, set.halfspaces, e1, e2, require_eps(g), gm);
      } else if (theorem == "ellipsoid_upper") {
        rep = rademacher_ellipsoid_upper(data, intersection_ellipsoid(data, set, g.seed, extra_flags));
      } else if (theorem == "ellipsoid_lower") {
        rep = rademacher_ellipsoid_lower(data, intersection_ellipsoid(data, set, g.seed, extra_flags),
                                         data.feature_bound, LowerBoundConstants{lower_c});
      } else if (theorem == "ellipsoid_product") {
        const EllipsoidConstraint a = intersection_ellipsoid(data, set, g.seed, extra_flags);
        const Eigen::SelfAdjointEigenSolver<Matrix> eig(a.matrix, Eigen::EigenvaluesOnly);
        rep = covering_ellipsoid_product(eig.eigenvalues(), data.feature_bound, require_eps(g));
      } else if (theorem == "quadratic_dual") {
        if (set.ellipsoids.empty()) throw Error("quadratic_dual needs an ellipsoid in the set");
        rep = rademacher_quadratic_dual(data, set.ellipsoids.front(), bb);
      } else if (theorem == "conic") {
        rep = rademacher_conic(n, data.feature_bound, bb, set.cones);
      } else if (theorem == "dudley") {
        const double top = eps_max.value_or(data.feature_bound * bb);
        rep = dudley_rademacher_from_covering([&](double eps) { return cover_at(eps).value; }, n, top, c_chain);
        rep.parameters["cover_" + cover] = 1.0;
      } else if (theorem == "generalization") {
        if (!emp_risk) throw UsageError("generalization needs --emp-risk");
        const BoundReport rad = estimate_empirical_rademacher(data, set, g.mc, Rng(g.seed, "rademacher"), sopts);
        rep = generalization_bound(*emp_risk, rad, lipschitz, n, delta);
      }
      rep.flags.insert(rep.flags.end(), extra_flags.begin(), extra_flags.end());
      emit(report_json(rep), g);
    } else if (*estimate) {
      const LabeledDataset data = load_data();
      const ConstraintSet set = load_set(data.dim());
      emit(report_json(estimate_empirical_rademacher(data, set, g.mc, Rng(g.seed, "rademacher"), sopts)), g);
    } else if (*experiment) {
      ExperimentConfig cfg;
      if (!g.config.empty()) {
        Json j = read_json_file(g.config);
        if (!g.preset.empty()) j["preset"] = g.preset;
        cfg = experiment_config_from_json(j);
      } else {
        cfg = ExperimentConfig::for_preset(scale_preset_from_string(g.preset.empty() ? "desk" : g.preset));
      }
      if (app.count("--seed") > 0) cfg.seed = g.seed;
      cfg.check();
      std::cerr << "experiment: " << to_json(cfg).dump() << '\n';
      const ExperimentResult result = run_experiment(cfg);
      for (const auto& r : result.records)
        if (!r.error.empty())
          std::cerr << Json{{"setup", r.setup}, {"train_size", r.train_size}, {"replicate", r.replicate},
                            {"error", r.error}}.dump() << '\n';
      if (g.out.empty()) {
        std::cout << results_csv(result);
      } else {
        fs::create_directories(g.out);
        std::ofstream((fs::path(g.out) / "results.csv").string()) << results_csv(result);
        std::ofstream((fs::path(g.out) / "summary.csv").string()) << summary_csv(result);
        std::cout << summary_csv(result);
      }
    } else if (*verify) {
      verify::AcceptanceOptions opts;
      opts.seed = g.seed;
      opts.mc = g.mc;
      std::vector<verify::CriterionResult> rows;
      if (suite == "sandwich") {
        rows = verify::sandwich_suite(vp, vn, g.mc, g.seed, instances);
      } else {
        std::vector<int> ids;
        if (suite == "all") {
          for (int id = 1; id <= verify::kCriterionCount; ++id) ids.push_back(id);
        } else {
          for (double v : parse_list(suite)) {
            if (v != std::floor(v) || v < 1 || v > verify::kCriterionCount) throw UsageError("bad criterion id in --suite");
            ids.push_back(static_cast<int>(v));
          }
        }
        for (int id : ids) rows.push_back(verify::run_criterion(id, opts));
      }
      bool all = true;
      for (const auto& r : rows) {
        std::cout << verify::format_result(r) << '\n';
        all = all && r.passed;
      }
      return all ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << Json{{"error", e.what()}, {"kind", "usage"}}.dump() << '\n';
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << Json{{"error", e.what()}, {"kind", "infeasible"}, {"block", e.block()}, {"violation", e.violation()}}
                     .dump()
              << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << Json{{"error", e.what()}, {"kind", "parse"}, {"line", e.line()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", e.what()}, {"kind", "computation"}}.dump() << '\n';
    return 1;
  }
  return 0;
}
