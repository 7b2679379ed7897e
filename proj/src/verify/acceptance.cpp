#include "verify/acceptance.hpp"

#include "sideknow/bounds.hpp"
#include "sideknow/dataset_io.hpp"
#include "sideknow/erm.hpp"
#include "sideknow/experiment.hpp"
#include "sideknow/geometry.hpp"
#include "sideknow/parallel.hpp"
#include "sideknow/rademacher.hpp"
#include "sideknow/serialize.hpp"
#include "verify/oracles.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace sideknow::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream out;
  out << std::setprecision(precision) << v;
  return out.str();
}

struct EllipsoidInstance {
  LabeledDataset data;
  ConstraintSet set;  // unit ball + one ellipsoid
};

EllipsoidInstance ellipsoid_instance(Index p, Index n, Rng& rng) {
  EllipsoidInstance inst{LabeledDataset::make(random_features(p, n, rng), Vector::Zero(n)),
                         ConstraintSet::ball(1.0)};
  inst.set.ellipsoids.push_back(EllipsoidConstraint{random_spd(p, 0.5, 20.0, rng), 1.0});
  return inst;
}

EllipsoidConstraint ball_as_ellipsoid(Index p, double radius) {
  return EllipsoidConstraint{Matrix::Identity(p, p), radius * radius};
}

// Circumscribing ellipsoid of ball and ellipsoid chosen by the trace criterion.
EllipsoidConstraint circumscribing(const EllipsoidInstance& inst) {
  const Index p = inst.data.dim();
  const EllipsoidConstraint ball = ball_as_ellipsoid(p, inst.set.ball_radius);
  const GammaChoice g = trace_min_gamma(ball, inst.set.ellipsoids.front(), inst.data.features);
  return kahan_combine(ball, inst.set.ellipsoids.front(), g.gamma);
}

std::vector<SOConstraint> random_pd_cones(Index p, int count, Rng& rng) {
  std::vector<SOConstraint> cones;
  for (int k = 0; k < count; ++k) {
    cones.push_back(SOConstraint{random_spd(p, 2.0, 8.0, rng), 0.3 * rng.normal_vector(p),
                                 rng.uniform(0.2, 1.0)});
  }
  return cones;
}

HalfSpace random_halfspace(Index p, Rng& rng) {
  return HalfSpace{rng.normal_vector(p), rng.uniform(0.2, 1.0), std::nullopt};
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail;
  return out.str();
}

CriterionResult check_ellipsoid_sandwich(const AcceptanceOptions& opts) {
  CriterionResult res{1, "ellipsoid trace sandwich", true, ""};
  const auto start = Clock::now();
  const Rng root(opts.seed, "ellipsoid_sandwich");
  double worst_z = std::numeric_limits<double>::infinity();
  double worst_order = 0.0;
  int failures = 0;
  for (int i = 0; i < 20; ++i) {
    const Index p = std::array<Index, 3>{2, 5, 10}[static_cast<std::size_t>(i % 3)];
    Rng rng = root.substream(static_cast<std::uint64_t>(i));
    const EllipsoidInstance inst = ellipsoid_instance(p, 30, rng);
    const EllipsoidConstraint a_int = circumscribing(inst);
    const double upper = rademacher_ellipsoid_upper(inst.data, a_int).value;
    const double lower = rademacher_ellipsoid_lower(inst.data, a_int, inst.data.feature_bound).value;
    const BoundReport est = estimate_empirical_rademacher(inst.data, inst.set, opts.mc, rng.substream("sigma"));
    const double se = *est.mc_stderr;
    const double z = (upper - est.value) / std::max(se, 1e-300);
    worst_z = std::min(worst_z, z);
    worst_order = std::max(worst_order, lower / upper);
    if (!(est.value <= upper + 3.0 * se) || !(lower <= upper)) ++failures;
  }
  const double elapsed = seconds_since(start);
  res.passed = failures == 0 && elapsed < 120.0;
  res.detail = "20 instances, failures=" + std::to_string(failures) + ", min (upper-est)/se=" +
               fmt(worst_z) + ", max lower/upper=" + fmt(worst_order) + ", time=" + fmt(elapsed, 3) + "s";
  return res;
}

CriterionResult check_quadratic_dual(const AcceptanceOptions& opts) {
  CriterionResult res{2, "quadratic dual bound", true, ""};
  const Rng root(opts.seed, "ellipsoid_sandwich");
  int failures = 0;
  double worst_z = std::numeric_limits<double>::infinity();
  double eta_lo = 1.0;
  double eta_hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Index p = std::array<Index, 3>{2, 5, 10}[static_cast<std::size_t>(i % 3)];
    Rng rng = root.substream(static_cast<std::uint64_t>(i));
    const EllipsoidInstance inst = ellipsoid_instance(p, 30, rng);
    const BoundReport bound = rademacher_quadratic_dual(inst.data, inst.set.ellipsoids.front(), 1.0);
    const BoundReport est = estimate_empirical_rademacher(inst.data, inst.set, opts.mc, rng.substream("sigma"));
    const double se = *est.mc_stderr;
    const double eta = bound.parameters.at("eta");
    eta_lo = std::min(eta_lo, eta);
    eta_hi = std::max(eta_hi, eta);
    worst_z = std::min(worst_z, (bound.value - est.value) / std::max(se, 1e-300));
    if (!(bound.value >= est.value - 3.0 * se) || !(eta >= 0.0 && eta <= 1.0)) ++failures;
  }
  res.passed = failures == 0;
  res.detail = "20 instances, failures=" + std::to_string(failures) + ", min (bound-est)/se=" + fmt(worst_z) +
               ", eta* range=[" + fmt(eta_lo) + ", " + fmt(eta_hi) + "]";
  return res;
}

CriterionResult check_conic(const AcceptanceOptions& opts) {
  CriterionResult res{3, "conic bound", true, ""};
  const Rng root(opts.seed, "conic");
  int failures = 0;
  int conic_branch = 0;
  double worst_z = std::numeric_limits<double>::infinity();
  const Index p = 5;
  const Index n = 30;
  for (int k : {1, 3}) {
    for (int i = 0; i < 5; ++i) {
      Rng rng = root.substream(static_cast<std::uint64_t>(k * 100 + i));
      const LabeledDataset data = LabeledDataset::make(random_features(p, n, rng), Vector::Zero(n));
      ConstraintSet set = ConstraintSet::ball(1.0);
      set.cones = random_pd_cones(p, k, rng);
      const BoundReport bound = rademacher_conic(n, data.feature_bound, 1.0, set.cones);
      const BoundReport est = estimate_empirical_rademacher(data, set, opts.mc, rng.substream("sigma"));
      const double se = *est.mc_stderr;
      worst_z = std::min(worst_z, (bound.value - est.value) / std::max(se, 1e-300));
      if (bound.parameters.at("branch_ball") == 0.0) ++conic_branch;
      if (!(bound.value >= est.value - 3.0 * se)) ++failures;
    }
  }
  Rng rng = root.substream("cone_free");
  double free_err = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto nn = static_cast<Index>(1 + rng.below(500));
    const double xb = rng.uniform(0.1, 5.0);
    const double bb = rng.uniform(0.1, 5.0);
    const double expect = xb * bb / std::sqrt(static_cast<double>(nn));
    free_err = std::max(free_err, std::abs(rademacher_conic(nn, xb, bb, {}).value - expect));
  }
  res.passed = failures == 0 && free_err <= 1e-12;
  res.detail = "10 instances (K=1,3), failures=" + std::to_string(failures) + ", conic branch active in " +
               std::to_string(conic_branch) + ", min (bound-est)/se=" + fmt(worst_z) +
               ", cone-free max error=" + fmt(free_err, 3);
  return res;
}

CriterionResult check_halfspace_dual(const AcceptanceOptions& opts) {
  CriterionResult res{4, "half-space dual bound", true, ""};
  const Rng root(opts.seed, "halfspace_dual");
  int failures = 0;
  double worst_z = std::numeric_limits<double>::infinity();
  for (Index p : {2, 5}) {
    for (int i = 0; i < 4; ++i) {
      Rng rng = root.substream(static_cast<std::uint64_t>(p * 100 + i));
      const Index n = 30;
      const LabeledDataset data = LabeledDataset::make(random_features(p, n, rng), Vector::Zero(n));
      ConstraintSet set = ConstraintSet::ball(1.0);
      set.halfspaces.push_back(random_halfspace(p, rng));
      const Rng sigma = rng.substream("sigma");
      const BoundReport bound = rademacher_dual_halfspace(data, set.halfspaces.front(), 1.0, opts.mc, sigma);
      const BoundReport est = estimate_empirical_rademacher(data, set, opts.mc, sigma);
      const double se = *est.mc_stderr;
      worst_z = std::min(worst_z, (bound.value - est.value) / std::max(se, 1e-300));
      if (!(bound.value >= est.value - 3.0 * se)) ++failures;
    }
  }

  // One example x = (1, 0), unit ball, half-space 4 beta_1 <= 1.
  Matrix x(2, 1);
  x << 1.0, 0.0;
  const LabeledDataset witness = LabeledDataset::make(x, Vector::Zero(1));
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.halfspaces.push_back(HalfSpace{Vector::Unit(2, 0) * 4.0, 1.0, std::nullopt});
  const Rng rng(opts.seed, "witness");
  const double sound =
      rademacher_dual_halfspace(witness, set.halfspaces.front(), 1.0, opts.mc, rng, DualVariant::Sound).value;
  const double literal =
      rademacher_dual_halfspace(witness, set.halfspaces.front(), 1.0, opts.mc, rng, DualVariant::PaperLiteral)
          .value;
  double exact = 0.0;
  for (double s : {1.0, -1.0}) {
    const Vector g = x.col(0) * s;
    exact += 0.5 * std::max(grid_sup_linear_2d(g, set).value, grid_sup_linear_2d(-g, set).value);
  }
  const bool witness_ok = std::abs(sound - 1.0) <= 1e-9 && std::abs(literal - 0.625) <= 1e-9 &&
                          std::abs(exact - 1.0) <= 1e-9 && literal < exact;
  res.passed = failures == 0 && witness_ok;
  res.detail = "8 instances, failures=" + std::to_string(failures) + ", min (bound-est)/se=" + fmt(worst_z) +
               "; witness sound=" + fmt(sound, 12) + " paper_literal=" + fmt(literal, 12) +
               " exact=" + fmt(exact, 12);
  return res;
}

CriterionResult check_single_halfspace_cover(const AcceptanceOptions& opts) {
  CriterionResult res{5, "single half-space covering", true, ""};
  std::ostringstream detail;

  // alpha over a sweep of ||a||.
  bool sweep_ok = true;
  for (Index p : {2, 5, 20}) {
    double prev = 1.0;
    for (int k = 0; k < 10; ++k) {
      const double norm = 0.5 + 0.5 * k;
      const double alpha = cap_fraction(p, Vector::Unit(p, 0) * norm, 0.2, 1.0, 1.0);
      if (!(alpha > 0.0 && alpha <= 1.0) || alpha > prev) sweep_ok = false;
      prev = alpha;
    }
  }
  detail << "sweep " << (sweep_ok ? "monotone" : "NOT monotone");

  // Cap area against sampling.
  Rng rng(opts.seed, "cap_area");
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  Vector a(2);
  a << 2.0 * std::cos(angle), 2.0 * std::sin(angle);
  const double alpha = cap_fraction(2, a, 0.2, 1.0, 1.0);
  const double mc = mc_cap_alpha_2d(a, 0.2, 1.0, 1.0, 1'000'000, rng);
  const bool mc_ok = std::abs(alpha - mc) <= 1e-3;
  detail << "; alpha=" << fmt(alpha) << " mc=" << fmt(mc) << " |diff|=" << fmt(std::abs(alpha - mc), 3);

  // Packing lower bounds on sampled restrictions.
  bool pack_ok = true;
  Rng prng(opts.seed, "packing");
  for (int inst = 0; inst < 3; ++inst) {
    const Index n = 10;
    const LabeledDataset data = LabeledDataset::make(random_features(2, n, prng), Vector::Zero(n));
    const Vector dir = prng.unit_vector(2);
    const HalfSpace h{dir * prng.uniform(1.5, 4.0), 1.0, std::nullopt};
    ConstraintSet set = ConstraintSet::ball(1.0);
    set.halfspaces.push_back(h);
    std::vector<Vector> restricted;
    while (restricted.size() < 3000) {
      Vector beta(2);
      beta << prng.uniform(-1.0, 1.0), prng.uniform(-1.0, 1.0);
      if (oracle_feasible(set, beta)) restricted.push_back(data.features.transpose() * beta);
    }
    for (double eps : {0.1, 0.3, 0.5}) {
      const double log_bound = covering_single_halfspace(data, h, eps, 1.0).value;
      const std::size_t packed = greedy_packing(restricted, 2.0 * std::sqrt(static_cast<double>(n)) * eps);
      if (!(std::exp(log_bound) >= static_cast<double>(packed))) pack_ok = false;
      if (inst == 0) detail << "; eps=" << eps << " N<=" << fmt(std::exp(log_bound), 4) << " packing=" << packed;
    }
  }
  res.passed = sweep_ok && mc_ok && pack_ok;
  res.detail = detail.str() + (pack_ok ? "" : " (packing violated)");
  return res;
}

CriterionResult check_polygonal_cover(const AcceptanceOptions& opts) {
  CriterionResult res{6, "polygonal covering", true, ""};
  std::ostringstream detail;

  bool closed_ok = true;
  for (int p = 1; p <= 4; ++p) {
    for (int k = 0; k <= 6; ++k) {
      const LatticeCount c = lattice_count_cross_polytope(p, k);
      if (!c.exact || *c.exact != box_lattice_count(p, k)) closed_ok = false;
    }
  }
  detail << "closed form " << (closed_ok ? "matches" : "DIFFERS FROM") << " enumeration for p<=4, K<=6";

  bool constrained_ok = true;
  int enumerated = 0;
  Rng rng(opts.seed, "polygonal");
  for (int inst = 0; inst < 5; ++inst) {
    const Index p = 3;
    const Index n = 10;
    const LabeledDataset data = LabeledDataset::make(random_features(p, n, rng), Vector::Zero(n));
    std::vector<HalfSpace> hs;
    for (int v = 0; v < 1 + inst % 2; ++v) {
      HalfSpace h = random_halfspace(p, rng);
      h.normal *= 0.4;
      h.margin = rng.uniform(0.3, 0.8);
      hs.push_back(h);
    }
    const double eps = 0.3;
    const BoundReport rep = covering_polygonal(data, hs, 1.0, eps);
    if (!rep.parameters.count("P_c_K")) continue;
    ++enumerated;
    // Independent recount of the constrained lattice.
    Matrix coeffs(static_cast<Index>(hs.size()), p);
    for (Index j = 0; j < p; ++j) {
      const double scale = std::sqrt(static_cast<double>(n)) * data.feature_bound / data.features.row(j).norm();
      for (std::size_t v = 0; v < hs.size(); ++v)
        coeffs(static_cast<Index>(v), j) = hs[v].normal(j) / hs[v].offset * scale;
    }
    const int k = static_cast<int>(rep.parameters.at("K"));
    const std::uint64_t recount = box_constrained_lattice_count(coeffs, k);
    const double pck = rep.parameters.at("P_c_K");
    const double pk = std::exp(rep.parameters.at("log_P_K"));
    if (static_cast<double>(recount) != pck || pck > pk * (1.0 + 1e-12)) constrained_ok = false;
  }
  constrained_ok = constrained_ok && enumerated > 0;
  detail << "; |P_c^K| recount " << (constrained_ok ? "ok" : "FAILED") << " on " << enumerated << " instances";

  Rng drng(opts.seed, "polygonal_trivial");
  const LabeledDataset data = LabeledDataset::make(random_features(3, 10, drng), Vector::Zero(10));
  std::vector<HalfSpace> hs{HalfSpace{Vector::Constant(3, 0.2), 1.0, 0.5}};
  const bool trivial_ok = covering_polygonal(data, hs, 1.0, data.feature_bound * 1.0).value == 0.0 &&
                          covering_polygonal(data, hs, 2.0, data.feature_bound * 3.0).value == 0.0;
  detail << "; eps>=X_bB_b " << (trivial_ok ? "gives 0" : "NONZERO");

  double max_gap = 0.0;
  for (double radius : {0.5, 1.0, 2.0}) {
    const EllipsoidConstraint ball{Matrix::Identity(3, 3), radius * radius};
    for (double eps : {0.05, 0.2, 0.7}) {
      for (const auto& set : {std::vector<HalfSpace>{}, hs}) {
        const double a = covering_linear_quadratic(data, set, ball, ball, eps, 0.5).value;
        const double b = covering_polygonal(data, set, radius, eps).value;
        max_gap = std::max(max_gap, std::abs(a - b));
      }
    }
  }
  const bool corollary_ok = max_gap <= 1e-12;
  detail << "; ball-ball reduction max gap=" << fmt(max_gap, 3);
  res.passed = closed_ok && constrained_ok && trivial_ok && corollary_ok;
  res.detail = detail.str();
  return res;
}

CriterionResult check_geometry(const AcceptanceOptions& opts) {
  CriterionResult res{7, "circumscribing ellipsoids", true, ""};
  Rng rng(opts.seed, "geometry");
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_trace = 0.0;
  double worst_volume = 0.0;
  double worst_offdiag = 0.0;
  for (int pair = 0; pair < 10; ++pair) {
    const Index p = 3;
    const EllipsoidConstraint e1{random_spd(p, 0.3, 5.0, rng), 1.0};
    const EllipsoidConstraint e2{random_spd(p, 0.3, 5.0, rng), 1.0};
    Rng srng = rng.substream(static_cast<std::uint64_t>(pair));
    const IntersectionSample sample = sample_intersection(e1, e2, 10'000, srng);
    for (int g = 0; g <= 10; ++g) {
      const Matrix a = kahan_combine(e1, e2, g / 10.0).matrix;
      for (const Vector& beta : sample.points) worst_excess = std::max(worst_excess, beta.dot(a * beta) - 1.0);
    }

    const Matrix x = random_features(p, 20, rng);
    const GammaChoice tg = trace_min_gamma(e1, e2, x);
    const double t_oracle = dense_grid_argmin(
        [&](double g) { return explicit_trace(g * e1.matrix + (1.0 - g) * e2.matrix, x); }, 100'001);
    worst_trace = std::max(worst_trace, std::abs(tg.gamma - t_oracle));

    const VolumeChoice vg = volume_min_gamma(e1, e2);
    const double v_oracle =
        dense_grid_argmin([&](double g) { return -log_det_eig(g * e1.matrix + (1.0 - g) * e2.matrix); }, 100'001);
    worst_volume = std::max(worst_volume, std::abs(vg.gamma - v_oracle));

    for (const Matrix* a : {&e1.matrix, &e2.matrix}) {
      Matrix d = vg.congruence.transpose() * *a * vg.congruence;
      d.diagonal().setZero();
      worst_offdiag = std::max(worst_offdiag, d.cwiseAbs().maxCoeff() / std::max(1.0, a->cwiseAbs().maxCoeff()));
    }
  }
  res.passed = worst_excess <= 1e-9 && worst_trace <= 1e-4 && worst_volume <= 1e-4 && worst_offdiag < 1e-8;
  res.detail = "10 pairs x 1e4 samples x 11 gammas: max excess=" + fmt(worst_excess, 3) +
               "; trace gamma* gap=" + fmt(worst_trace, 3) + "; volume gamma* gap=" + fmt(worst_volume, 3) +
               "; congruence off-diagonal=" + fmt(worst_offdiag, 3);
  return res;
}

CriterionResult check_solvers(const AcceptanceOptions& opts) {
  CriterionResult res{8, "solvers against grid oracles", true, ""};
  Rng rng(opts.seed, "solvers");
  // Bit 0 half-space, bit 1 ellipsoid, bit 2 cone, bit 3 l1 block.
  const int masks[10] = {1, 2, 4, 8, 3, 5, 10, 12, 15, 6};
  double worst_sup = 0.0;
  double worst_obj = 0.0;
  double worst_violation = -std::numeric_limits<double>::infinity();
  for (int mask : masks) {
    ConstraintSet set = ConstraintSet::ball(rng.uniform(1.0, 2.0));
    if (mask & 1) set.halfspaces.push_back(HalfSpace{rng.unit_vector(2), rng.uniform(0.1, 0.8), std::nullopt});
    if (mask & 2) set.ellipsoids.push_back(EllipsoidConstraint{random_spd(2, 0.3, 4.0, rng), 1.0});
    if (mask & 4) {
      Matrix a(2, 2);
      a << rng.normal(), rng.normal(), rng.normal(), rng.normal();
      set.cones.push_back(SOConstraint{0.7 * a, 0.5 * rng.normal_vector(2), rng.uniform(0.3, 1.0)});
    }
    if (mask & 8) {
      Matrix cols(2, 3);
      for (Index j = 0; j < 3; ++j) cols.col(j) = rng.normal_vector(2);
      set.l1_blocks.push_back(L1PredictionBlock{{0, 1, 2}, cols, rng.uniform(0.5, 1.5)});
    }

    for (int d = 0; d < 3; ++d) {
      const Vector g = rng.normal_vector(2);
      const SupResult ours = sup_linear(g, set);
      const GridOptimum oracle = grid_sup_linear_2d(g, set);
      worst_sup = std::max(worst_sup, std::abs(ours.value - oracle.value));
      worst_violation = std::max(worst_violation, set.max_violation(ours.argmax.beta));
    }

    const Index n = 20;
    const Matrix x = random_features(2, n, rng);
    const Vector beta0 = 2.0 * rng.normal_vector(2);
    const Vector y = x.transpose() * beta0 + 0.3 * rng.normal_vector(n);
    const LabeledDataset data = LabeledDataset::make(x, y);
    for (double lambda : {0.0, 0.05}) {
      const FitResult fit = fit_constrained_ridge(data, lambda, set);
      const GridOptimum oracle =
          grid_minimize_2d([&](const Vector& b) { return ridge_objective(data, b, lambda); }, set);
      worst_obj = std::max(worst_obj, std::abs(fit.objective - oracle.value) / std::max(std::abs(oracle.value), 1e-12));
      worst_violation = std::max(worst_violation, set.max_violation(fit.model.beta));
    }
  }
  res.passed = worst_sup <= 1e-3 && worst_obj <= 1e-4 && worst_violation <= 1e-6;
  res.detail = "10 sets: max |sup - oracle|=" + fmt(worst_sup, 3) + ", max rel objective gap=" + fmt(worst_obj, 3) +
               ", max violation=" + fmt(worst_violation, 3);
  return res;
}

CriterionResult check_desk_experiment(const AcceptanceOptions&) {
  CriterionResult res{9, "desk experiment ordering", true, ""};
  const auto start = Clock::now();
  const ExperimentConfig cfg = ExperimentConfig::for_preset(ScalePreset::Desk);
  const ExperimentResult result = run_experiment(cfg);
  const double elapsed = seconds_since(start);

  int failed_cells = 0;
  for (const auto& r : result.records)
    if (!r.error.empty()) ++failed_cells;
  const Index smallest = *std::min_element(cfg.train_sizes.begin(), cfg.train_sizes.end());
  std::ostringstream detail;
  bool ordered = true;
  bool shrinking = true;
  for (const char* setup : {"ridge+polygonal", "ridge+quadratic", "ridge+conic"}) {
    if (result.row(setup, smallest).q50 > result.row("ridge", smallest).q50) ordered = false;
    detail << setup << " gaps";
    double prev = std::numeric_limits<double>::infinity();
    for (Index n : cfg.train_sizes) {
      const double gap = result.row("ridge", n).q50 - result.row(setup, n).q50;
      detail << ' ' << fmt(gap, 4);
      if (gap > prev) shrinking = false;
      prev = gap;
    }
    detail << "; ";
  }
  res.passed = ordered && shrinking && failed_cells == 0 && elapsed < 300.0 &&
               result.records.size() == static_cast<std::size_t>(kSetupCount) * cfg.train_sizes.size() *
                                            static_cast<std::size_t>(cfg.n_replicates);
  detail << "records=" << result.records.size() << ", failed cells=" << failed_cells << ", time=" << fmt(elapsed, 3)
         << "s";
  res.detail = detail.str();
  return res;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs a command twice, capturing stdout to two files; true when both runs
// succeed and the outputs are byte-identical.
bool cli_repeatable(const std::string& cli, const std::string& args, const std::string& dir, const std::string& tag,
                    std::string& why) {
  std::string outputs[2];
  for (int run = 0; run < 2; ++run) {
    const std::string out = dir + "/" + tag + "_" + std::to_string(run) + ".out";
    const std::string cmd = "\"" + cli + "\" " + args + " > \"" + out + "\" 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) {
      why = tag + " exited with an error";
      return false;
    }
    outputs[run] = read_file(out);
  }
  if (outputs[0] != outputs[1] || outputs[0].empty()) {
    why = tag + " output differs between runs";
    return false;
  }
  return true;
}

}  // namespace

CriterionResult check_determinism(const AcceptanceOptions& opts) {
  CriterionResult res{10, "determinism", true, ""};
  std::vector<std::string> problems;
  const std::size_t saved_threads = thread_count();

  Rng rng(opts.seed, "determinism_data");
  const LabeledDataset data = LabeledDataset::make(random_features(3, 25, rng), rng.normal_vector(25));
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.halfspaces.push_back(random_halfspace(3, rng));
  set.ellipsoids.push_back(EllipsoidConstraint{random_spd(3, 0.5, 5.0, rng), 1.0});
  set.cones = random_pd_cones(3, 1, rng);

  auto twice = [&](const std::string& name, const std::function<std::string()>& run) {
    set_thread_count(1);
    const std::string a = run();
    set_thread_count(4);
    const std::string b = run();
    const std::string c = run();
    if (a != b || b != c) problems.push_back(name);
  };
  const Rng sigma(opts.seed, "determinism_sigma");
  twice("estimate", [&] { return to_json(estimate_empirical_rademacher(data, set, 300, sigma)).dump(); });
  twice("halfspace_dual",
        [&] { return to_json(rademacher_dual_halfspace(data, set.halfspaces.front(), 1.0, 300, sigma)).dump(); });
  twice("cross_validation", [&] {
    const CvResult cv = cross_validate_lambda(data, set, {1e-3, 1e-1, 1.0}, 5, sigma);
    std::ostringstream s;
    for (const auto& row : cv.table) s << row.lambda << ',' << row.fold << ',' << format_double(row.rmse) << '\n';
    return s.str();
  });
  const EllipsoidConstraint third{random_spd(3, 0.5, 5.0, rng), 1.0};
  twice("simplex_trace_min", [&] {
    const SimplexChoice s = simplex_trace_min(
        {set.ellipsoids.front(), EllipsoidConstraint{Matrix::Identity(3, 3), 1.0}, third}, data.features, opts.seed);
    return to_json(s.gamma).dump() + format_double(s.value);
  });
  twice("sample_intersection", [&] {
    Rng local(opts.seed, "intersection");
    const IntersectionSample s = sample_intersection(set.ellipsoids.front(),
                                                     EllipsoidConstraint{Matrix::Identity(3, 3), 1.0}, 200, local);
    std::ostringstream out;
    for (const auto& v : s.points) out << to_json(v).dump();
    return out.str();
  });
  ExperimentConfig small = ExperimentConfig::for_preset(ScalePreset::Desk);
  small.p = 5;
  small.n_knowledge = 12;
  small.n_test = 40;
  small.train_sizes = {15, 25};
  small.n_replicates = 2;
  small.poset_pair_count = 20;
  small.seed = opts.seed;
  twice("experiment", [&] {
    const ExperimentResult r = run_experiment(small);
    return results_csv(r) + summary_csv(r);
  });
  set_thread_count(saved_threads);

  int cli_checks = 0;
  if (opts.cli_path) {
    namespace fs = std::filesystem;
    const std::string dir = (fs::path(opts.work_dir) / ("sideknow_determinism_" + std::to_string(opts.seed))).string();
    fs::create_directories(dir);
    write_dataset(dir + "/data.csv", data);
    write_json_file(dir + "/set.json", to_json(set));
    write_json_file(dir + "/experiment.json", to_json(small));
    const std::string common = " --data \"" + dir + "/data.csv\" --set \"" + dir + "/set.json\"";
    const std::pair<std::string, std::string> commands[] = {
        {"estimate", "estimate-rademacher" + common + " --mc 200 --seed 11"},
        {"bound_dual", "bound --theorem halfspace_dual" + common + " --mc 200 --seed 11"},
        {"fit_cv", "fit" + common + " --grid 0.001,0.1,1 --seed 11"},
        {"experiment", "experiment --config \"" + dir + "/experiment.json\" --seed 11"},
        {"experiment_threads", "experiment --config \"" + dir + "/experiment.json\" --seed 11 --threads 3"},
    };
    for (const auto& [tag, args] : commands) {
      std::string why;
      if (!cli_repeatable(*opts.cli_path, args, dir, tag, why)) problems.push_back("cli " + why);
      ++cli_checks;
    }
    if (read_file(dir + "/experiment_0.out") != read_file(dir + "/experiment_threads_0.out")) {
      problems.push_back("cli experiment output depends on --threads");
    }
  }

  res.passed = problems.empty();
  std::ostringstream detail;
  detail << "6 library operations x (1 thread, 4 threads, repeat)";
  if (opts.cli_path) detail << " + " << cli_checks << " CLI commands run twice";
  if (!problems.empty()) {
    detail << "; mismatches:";
    for (const auto& p : problems) detail << ' ' << p;
  }
  res.detail = detail.str();
  return res;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  try {
    switch (id) {
      case 1: return check_ellipsoid_sandwich(opts);
      case 2: return check_quadratic_dual(opts);
      case 3: return check_conic(opts);
      case 4: return check_halfspace_dual(opts);
      case 5: return check_single_halfspace_cover(opts);
      case 6: return check_polygonal_cover(opts);
      case 7: return check_geometry(opts);
      case 8: return check_solvers(opts);
      case 9: return check_desk_experiment(opts);
      case 10: return check_determinism(opts);
      default: break;
    }
  } catch (const std::exception& e) {
    return CriterionResult{id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
  }
  throw Error("unknown acceptance criterion " + std::to_string(id));
}

std::vector<CriterionResult> sandwich_suite(Index p, Index n, std::size_t mc, std::uint64_t seed, int instances) {
  std::vector<CriterionResult> rows;
  const Rng root(seed, "sandwich_suite");
  for (int i = 0; i < instances; ++i) {
    Rng rng = root.substream(static_cast<std::uint64_t>(i));
    const std::string suffix = " #" + std::to_string(i);
    auto row = [&](const std::string& name, double bound, const BoundReport& est) {
      const double se = *est.mc_stderr;
      CriterionResult r{static_cast<int>(rows.size()) + 1, name + suffix, bound >= est.value - 3.0 * se, ""};
      r.detail = "bound=" + fmt(bound) + " estimate=" + fmt(est.value) + " stderr=" + fmt(se, 3);
      rows.push_back(r);
    };

    const EllipsoidInstance inst = ellipsoid_instance(p, n, rng);
    const BoundReport est = estimate_empirical_rademacher(inst.data, inst.set, mc, rng.substream("sigma"));
    const EllipsoidConstraint a_int = circumscribing(inst);
    const double upper = rademacher_ellipsoid_upper(inst.data, a_int).value;
    row("ellipsoid_trace_upper", upper, est);
    if (n >= 3) {
      const double lower = rademacher_ellipsoid_lower(inst.data, a_int, inst.data.feature_bound).value;
      rows.push_back(CriterionResult{static_cast<int>(rows.size()) + 1, "lower<=upper" + suffix, lower <= upper,
                                     "lower=" + fmt(lower) + " upper=" + fmt(upper)});
    }
    row("quadratic_dual", rademacher_quadratic_dual(inst.data, inst.set.ellipsoids.front(), 1.0).value, est);

    ConstraintSet cones = ConstraintSet::ball(1.0);
    cones.cones = random_pd_cones(p, 2, rng);
    const BoundReport cone_est = estimate_empirical_rademacher(inst.data, cones, mc, rng.substream("sigma_cone"));
    row("conic_dual", rademacher_conic(n, inst.data.feature_bound, 1.0, cones.cones).value, cone_est);

    ConstraintSet half = ConstraintSet::ball(1.0);
    half.halfspaces.push_back(random_halfspace(p, rng));
    const Rng hs_sigma = rng.substream("sigma_half");
    const BoundReport half_est = estimate_empirical_rademacher(inst.data, half, mc, hs_sigma);
    row("halfspace_dual", rademacher_dual_halfspace(inst.data, half.halfspaces.front(), 1.0, mc, hs_sigma).value,
        half_est);
  }
  return rows;
}

}  // namespace sideknow::verify
