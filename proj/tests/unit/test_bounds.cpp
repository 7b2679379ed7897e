#include "doctest.h"

#include "sideknow/bounds.hpp"
#include "sideknow/geometry.hpp"
#include "sideknow/rademacher.hpp"
#include "verify/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace sideknow;
using namespace sideknow::verify;

namespace {

LabeledDataset unlabeled(const Matrix& x) { return LabeledDataset::make(x, Vector::Zero(x.cols())); }

HalfSpace halfspace(const Vector& w, double b, std::optional<double> margin = std::nullopt) {
  return HalfSpace{w, b, margin};
}

Matrix diag(std::initializer_list<double> values) {
  Vector d(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) d(i++) = v;
  return d.asDiagonal();
}

}  // namespace

// ---- single half-space -------------------------------------------------------

TEST_CASE("cap_fraction: vacuous constraint and empty cap") {
  CHECK(cap_fraction(3, Vector::Zero(3), 0.1, 1.0, 1.0) == 1.0);
  // 1/||a|| + eps/(2 X_b) = 0.5 + 0.6 >= r = 1 + 0.6.
  CHECK(cap_fraction(2, Vector::Unit(2, 0) * 0.5, 1.2, 1.0, 1.0) == 1.0);
  CHECK(cap_fraction(2, Vector::Unit(2, 0) * 2.0, 0.2, 1.0, 1.0) < 1.0);
}

TEST_CASE("cap_fraction matches a sampled disk area") {
  Rng rng(1, "cap");
  const Vector a = (Vector(2) << 2.0 / std::sqrt(2.0), 2.0 / std::sqrt(2.0)).finished();
  const double alpha = cap_fraction(2, a, 0.2, 1.0, 1.0);
  CHECK(std::abs(alpha - mc_cap_alpha_2d(a, 0.2, 1.0, 1.0, 1'000'000, rng)) <= 1e-3);
}

TEST_CASE("cap_fraction in three dimensions matches the spherical cap volume") {
  // Cap of height t = r - h has volume pi t^2 (3r - t) / 3.
  const double r = 1.1;
  const double h = 0.5 + 0.1;
  const double t = r - h;
  const double expect = 1.0 - (std::numbers::pi * t * t * (3 * r - t) / 3.0) / (4.0 / 3.0 * std::numbers::pi * r * r * r);
  CHECK(cap_fraction(3, Vector::Unit(3, 2) * 2.0, 0.2, 1.0, 1.0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("single half-space covering: unconstrained reduction and monotonicity") {
  Rng rng(2, "single");
  const LabeledDataset data = unlabeled(random_features(4, 12, rng));
  const double xb = data.feature_bound;
  const BoundReport loose = covering_single_halfspace(data, halfspace(Vector::Zero(4), 1.0), 0.3, 2.0);
  CHECK(loose.value == doctest::Approx(4.0 * std::log(2.0 * 2.0 * xb / 0.3 + 1.0)).epsilon(1e-14));
  CHECK(loose.parameters.at("alpha") == 1.0);

  const Vector dir = rng.unit_vector(4);
  double prev = loose.value;
  for (double norm : {1.0, 2.0, 4.0, 8.0}) {
    const double v = covering_single_halfspace(data, halfspace(dir * norm, 1.0), 0.3, 2.0).value;
    CHECK(v <= prev);
    prev = v;
  }
  const BoundReport flagged = covering_single_halfspace(data, halfspace(dir, -0.5), 0.3, 2.0);
  CHECK_FALSE(flagged.flags.empty());
  CHECK(flagged.value == doctest::Approx(loose.value));
}

TEST_CASE("single half-space covering dominates a packing of the restricted class") {
  Rng rng(3, "packing");
  const Index n = 8;
  const LabeledDataset data = unlabeled(random_features(2, n, rng));
  const HalfSpace h = halfspace(rng.unit_vector(2) * 2.5, 1.0);
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.halfspaces.push_back(h);
  std::vector<Vector> restricted;
  while (restricted.size() < 2000) {
    const Vector beta = (Vector(2) << rng.uniform(-1, 1), rng.uniform(-1, 1)).finished();
    if (oracle_feasible(set, beta)) restricted.push_back(data.features.transpose() * beta);
  }
  for (double eps : {0.05, 0.1, 0.2}) {
    const double bound = covering_single_halfspace(data, h, eps, 1.0).value;
    CHECK(std::exp(bound) >= static_cast<double>(greedy_packing(restricted, 2.0 * std::sqrt(double(n)) * eps)));
  }
}

// ---- half-space dual ----------------------------------------------------------

TEST_CASE("half-space dual: zero normal reduces to the ball term") {
  Rng rng(4, "dual_zero");
  const Index n = 6;
  const LabeledDataset data = unlabeled(random_features(3, n, rng));
  const HalfSpace h = halfspace(Vector::Zero(3), 1.0);
  const Rng sigma(4, "sigma");
  const BoundReport sound = rademacher_dual_halfspace(data, h, 1.5, 1000, sigma, DualVariant::Sound);
  const BoundReport literal = rademacher_dual_halfspace(data, h, 1.5, 1000, sigma, DualVariant::PaperLiteral);
  // Exhaustive: 2^6 = 64 <= 1000 sign vectors.
  double mean = 0.0;
  for (int mask = 0; mask < 64; ++mask) {
    Vector s(n);
    for (Index i = 0; i < n; ++i) s(i) = (mask >> i) & 1 ? 1.0 : -1.0;
    mean += (data.features * s).norm() / 64.0;
  }
  CHECK(sound.value == doctest::Approx(1.5 * mean / n).epsilon(1e-12));
  CHECK(literal.value == doctest::Approx(sound.value).epsilon(1e-12));
  CHECK(sound.value <= 1.5 * std::sqrt((data.features.transpose() * data.features).trace()) / n + 1e-12);
}

TEST_CASE("half-space dual: witness instance separates the variants") {
  Matrix x(2, 1);
  x << 1.0, 0.0;
  const LabeledDataset data = unlabeled(x);
  const HalfSpace h = halfspace(Vector::Unit(2, 0) * 4.0, 1.0);
  const Rng sigma(5, "witness");
  const double sound = rademacher_dual_halfspace(data, h, 1.0, 100, sigma, DualVariant::Sound).value;
  const double literal = rademacher_dual_halfspace(data, h, 1.0, 100, sigma, DualVariant::PaperLiteral).value;
  // Hand evaluation: v(sigma=+1, -a) = 1, v(sigma=-1, +a) = 1, the other two
  // terms are min_eta |1 - 4 eta| + eta = 1/4.
  CHECK(std::abs(sound - 1.0) <= 1e-9);
  CHECK(std::abs(literal - 0.625) <= 1e-9);
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.halfspaces.push_back(h);
  const double exact = 0.5 * (std::max(grid_sup_linear_2d(x.col(0), set).value, grid_sup_linear_2d(-x.col(0), set).value) * 2.0);
  CHECK(exact == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(literal < exact);
}

TEST_CASE("half-space dual bounds a Monte Carlo estimate") {
  Rng rng(6, "dual_mc");
  for (Index p : {2, 5}) {
    const LabeledDataset data = unlabeled(random_features(p, 20, rng));
    ConstraintSet set = ConstraintSet::ball(1.0);
    set.halfspaces.push_back(halfspace(rng.normal_vector(p), 0.4));
    const Rng sigma = rng.substream("sigma");
    const BoundReport bound = rademacher_dual_halfspace(data, set.halfspaces[0], 1.0, 500, sigma);
    const BoundReport est = estimate_empirical_rademacher(data, set, 500, sigma);
    CHECK(bound.value >= est.value - 3.0 * *est.mc_stderr);
  }
}

// ---- lattice counts ------------------------------------------------------------

TEST_CASE("cross-polytope lattice counts") {
  CHECK(*lattice_count_cross_polytope(1, 1).exact == 3);
  CHECK(*lattice_count_cross_polytope(2, 1).exact == 5);
  CHECK(*lattice_count_cross_polytope(3, 4).exact == box_lattice_count(3, 4));
  CHECK(*lattice_count_cross_polytope(5, 0).exact == 1);
  for (int p = 1; p <= 4; ++p)
    for (int k = 0; k <= 6; ++k) {
      const LatticeCount c = lattice_count_cross_polytope(p, k);
      CHECK(*c.exact == box_lattice_count(p, k));
      CHECK(c.log_count == doctest::Approx(std::log(static_cast<double>(*c.exact))).epsilon(1e-14));
    }
}

TEST_CASE("lattice counts beyond 64 bits stay finite and increase") {
  const LatticeCount a = lattice_count_cross_polytope(300, 1e6);
  const LatticeCount b = lattice_count_cross_polytope(300, 2e6);
  CHECK_FALSE(a.exact.has_value());
  CHECK(std::isfinite(a.log_count));
  CHECK(b.log_count > a.log_count);
  // Dominant term for K >> p: 2^p K^p / p!.
  CHECK(a.log_count == doctest::Approx(300 * std::log(2.0) + 300 * std::log(1e6) - std::lgamma(301.0)).epsilon(1e-2));
}

TEST_CASE("constrained lattice count matches box enumeration") {
  Rng rng(7, "lattice");
  for (int t = 0; t < 10; ++t) {
    Matrix c(2, 3);
    for (Index j = 0; j < 3; ++j) c.col(j) = 2.0 * rng.normal_vector(2);
    const int k = 1 + t % 5;
    CHECK(count_constrained_lattice(c, k) == box_constrained_lattice_count(c, k));
    CHECK(count_constrained_lattice(c, k) <= box_lattice_count(3, k));
  }
}

// ---- polygonal -------------------------------------------------------------------

TEST_CASE("polygonal: unconstrained value, trivial radius, recount") {
  Rng rng(8, "polygonal");
  const LabeledDataset data = unlabeled(random_features(3, 10, rng));
  const double xb = data.feature_bound;
  const BoundReport free = covering_polygonal(data, {}, 1.0, 0.4);
  const double k0 = std::ceil(xb * xb / 0.16);
  CHECK(free.value == doctest::Approx(std::log(static_cast<double>(box_lattice_count(3, static_cast<int>(k0))))));
  CHECK(covering_polygonal(data, {}, 1.0, xb).value == 0.0);
  CHECK(covering_polygonal(data, {}, 2.0, 5.0 * xb).value == 0.0);

  const std::vector<HalfSpace> hs{halfspace(0.4 * rng.normal_vector(3), 0.5, 0.6)};
  const BoundReport rep = covering_polygonal(data, hs, 1.0, 0.3);
  REQUIRE(rep.parameters.count("P_c_K") == 1);
  Matrix coeffs(1, 3);
  for (Index j = 0; j < 3; ++j)
    coeffs(0, j) = hs[0].normal(j) / hs[0].offset * std::sqrt(10.0) * xb / data.features.row(j).norm();
  const auto k = static_cast<int>(rep.parameters.at("K"));
  CHECK(static_cast<double>(box_constrained_lattice_count(coeffs, k)) == rep.parameters.at("P_c_K"));
  CHECK(rep.parameters.at("P_c_K") <= std::exp(rep.parameters.at("log_P_K")) * (1 + 1e-12));
  CHECK(rep.value <= rep.parameters.at("log_P_K0"));

  CHECK_THROWS_AS(covering_polygonal(data, {halfspace(Vector::Ones(3), 1.0)}, 1.0, 0.3), Error);
}

TEST_CASE("linear-quadratic: ball reduction, shrinking ellipsoid, trivial radius") {
  Rng rng(9, "lq");
  const LabeledDataset data = unlabeled(random_features(3, 10, rng));
  const EllipsoidConstraint ball{Matrix::Identity(3, 3), 4.0};  // radius 2
  const std::vector<HalfSpace> hs{halfspace(0.3 * rng.normal_vector(3), 0.5, 0.4)};
  for (double eps : {0.1, 0.5, 1.0}) {
    CHECK(covering_linear_quadratic(data, {}, ball, ball, eps, 0.3).value == covering_polygonal(data, {}, 2.0, eps).value);
    CHECK(covering_linear_quadratic(data, hs, ball, ball, eps, 0.7).value == covering_polygonal(data, hs, 2.0, eps).value);
  }
  const EllipsoidConstraint e1{random_spd(3, 0.5, 2.0, rng), 1.0};
  double prev = 1e300;
  for (double s : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    const EllipsoidConstraint e2{s * diag({1.0, 2.0, 0.5}), 1.0};
    const double v = covering_linear_quadratic(data, {}, e1, e2, 0.2, 0.5).value;
    CHECK(v <= prev);
    prev = v;
  }
  const EllipsoidConstraint e2{diag({1.0, 2.0, 0.5}), 1.0};
  const Matrix a = 0.5 * e1.matrix + 0.5 * e2.matrix;
  const double lam_max_inv = 1.0 / Eigen::SelfAdjointEigenSolver<Matrix>(a).eigenvalues()(0);
  CHECK(covering_linear_quadratic(data, {}, e1, e2, data.feature_bound * std::sqrt(lam_max_inv), 0.5).value == 0.0);
}

// ---- ellipsoid bounds -------------------------------------------------------------

TEST_CASE("ellipsoid upper: ball and diagonal cases") {
  Rng rng(10, "upper");
  Matrix x(3, 7);
  for (Index j = 0; j < 7; ++j) x.col(j) = rng.unit_vector(3);
  const LabeledDataset data = unlabeled(x);
  const double b = 1.7;
  const BoundReport ball = rademacher_ellipsoid_upper(data, {Matrix::Identity(3, 3) / (b * b), 1.0});
  CHECK(ball.value == doctest::Approx(b / std::sqrt(7.0)).epsilon(1e-14));

  const Vector lam = (Vector(3) << 0.5, 2.0, 9.0).finished();
  double sum = 0.0;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 7; ++j) sum += x(i, j) * x(i, j) / lam(i);
  CHECK(rademacher_ellipsoid_upper(data, {Matrix(lam.asDiagonal()), 1.0}).value ==
        doctest::Approx(std::sqrt(sum) / 7.0).epsilon(1e-14));
}

TEST_CASE("ellipsoid upper bounds a Monte Carlo estimate") {
  Rng rng(11, "upper_mc");
  const LabeledDataset data = unlabeled(random_features(5, 30, rng));
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.ellipsoids.push_back({random_spd(5, 0.5, 20.0, rng), 1.0});
  const GammaChoice g = trace_min_gamma({Matrix::Identity(5, 5), 1.0}, set.ellipsoids[0], data.features);
  const EllipsoidConstraint a_int = kahan_combine({Matrix::Identity(5, 5), 1.0}, set.ellipsoids[0], g.gamma);
  const BoundReport est = estimate_empirical_rademacher(data, set, 2000, rng.substream("sigma"));
  CHECK(rademacher_ellipsoid_upper(data, a_int).value >= est.value - 3.0 * *est.mc_stderr);
  const double lower = rademacher_ellipsoid_lower(data, a_int, data.feature_bound).value;
  CHECK(lower <= rademacher_ellipsoid_upper(data, a_int).value);
}

TEST_CASE("ellipsoid lower: zero row, ordering, constant scaling") {
  Matrix x = Matrix::Zero(2, 4);
  x.row(0) << 1, -1, 0.5, 0.2;
  const LabeledDataset flat = unlabeled(x);
  CHECK(rademacher_ellipsoid_lower(flat, {Matrix::Identity(2, 2), 1.0}, flat.feature_bound).value == 0.0);

  Rng rng(12, "lower");
  const LabeledDataset data = unlabeled(random_features(4, 20, rng));
  const EllipsoidConstraint a{random_spd(4, 0.3, 3.0, rng), 1.0};
  const double c1 = rademacher_ellipsoid_lower(data, a, data.feature_bound, {1.0}).value;
  const double c2 = rademacher_ellipsoid_lower(data, a, data.feature_bound, {2.0}).value;
  CHECK(c1 <= rademacher_ellipsoid_upper(data, a).value);
  CHECK(c2 == doctest::Approx(c1 / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(rademacher_ellipsoid_lower(unlabeled(random_features(4, 2, rng)), a, 1.0), Error);
}

TEST_CASE("ellipsoid product covering") {
  const double b = 2.0;
  const Vector ball = Vector::Constant(3, 1.0 / (b * b));
  CHECK(covering_ellipsoid_product(ball, 1.5, 0.2).value ==
        doctest::Approx(3.0 * std::log(2.0 * 1.5 * b / 0.2 + 1.0)).epsilon(1e-14));
  const Vector lam = (Vector(3) << 0.3, 1.0, 4.0).finished();
  CHECK(covering_ellipsoid_product(2.0 * lam, 1.0, 0.1).value < covering_ellipsoid_product(lam, 1.0, 0.1).value);

  // Packing oracle on a p = 2 class {beta : beta^T diag(lam) beta <= 1}.
  Rng rng(13, "product_packing");
  const Index n = 6;
  const LabeledDataset data = unlabeled(random_features(2, n, rng));
  const Vector l2 = (Vector(2) << 0.8, 3.0).finished();
  ConstraintSet set = ConstraintSet::ball(10.0);
  set.ellipsoids.push_back({Matrix(l2.asDiagonal()), 1.0});
  std::vector<Vector> pts;
  while (pts.size() < 2000) {
    const Vector beta = (Vector(2) << rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)).finished();
    if (oracle_feasible(set, beta)) pts.push_back(data.features.transpose() * beta);
  }
  for (double eps : {0.05, 0.1, 0.3})
    CHECK(std::exp(covering_ellipsoid_product(l2, data.feature_bound, eps).value) >=
          static_cast<double>(greedy_packing(pts, 2.0 * std::sqrt(double(n)) * eps)));
}

TEST_CASE("quadratic dual: identity constraint and endpoint dominance") {
  Rng rng(14, "qdual");
  const LabeledDataset data = unlabeled(random_features(3, 9, rng));
  const double b = 1.3;
  const BoundReport flat = rademacher_quadratic_dual(data, {Matrix::Identity(3, 3), 1.0}, b);
  const double tr = (data.features.transpose() * data.features).trace();
  // With A2 = I the eta-dependence is only through the linear term (1 - B^2) eta.
  const double at0 = tr / (4.0 * 9) + b * b / 9;
  const double at1 = tr / (4.0 * 9) + 1.0 / 9;
  CHECK(flat.value == doctest::Approx(std::min(at0, at1)).epsilon(1e-12));

  const BoundReport rep = rademacher_quadratic_dual(data, {random_spd(3, 0.3, 8.0, rng), 1.0}, 1.0);
  CHECK(rep.value <= rep.parameters.at("objective_eta0") + 1e-15);
  CHECK(rep.value <= rep.parameters.at("objective_eta1") + 1e-15);
  CHECK(rep.parameters.at("eta") >= 0.0);
  CHECK(rep.parameters.at("eta") <= 1.0);
}

TEST_CASE("quadratic dual with unit ball radius ties and returns eta = 0") {
  Rng rng(15, "qdual_tie");
  const LabeledDataset data = unlabeled(random_features(3, 9, rng));
  const BoundReport rep = rademacher_quadratic_dual(data, {Matrix::Identity(3, 3), 1.0}, 1.0);
  CHECK(rep.parameters.at("eta") == 0.0);
  const double tr = (data.features.transpose() * data.features).trace();
  CHECK(rep.value == doctest::Approx(tr / 36.0 + 1.0 / 9.0).epsilon(1e-14));
}

// ---- cones ------------------------------------------------------------------------

TEST_CASE("conic bound: cone-free, hand instance, monotone family") {
  CHECK(rademacher_conic(25, 2.0, 3.0, {}).value == doctest::Approx(2.0 * 3.0 / 5.0).epsilon(1e-15));
  const SOConstraint c{2.0 * Matrix::Identity(2, 2), (Vector(2) << 0.1, 0.0).finished(), 0.1};
  CHECK(rademacher_conic(100, 1.0, 1.0, {c}).value == doctest::Approx(0.01).epsilon(1e-14));

  auto term = [](double mu, double delta) {
    const SOConstraint k{diag({2.0 * std::sqrt(mu), std::sqrt(mu)}), delta * (Vector(2) << 2, 3).finished(), 4 * delta};
    const BoundReport r = rademacher_conic(10, 1.0, 3.0, {k});
    CHECK(r.parameters.at("inner_sum") ==
          doctest::Approx(delta * (3 * std::sqrt(13.0) + 4) / std::sqrt(mu)).epsilon(1e-13));
    return r.parameters.at("inner_sum");
  };
  CHECK(term(10, 1) < term(1, 1));
  CHECK(term(1, 1) < term(1, 10));

  const SOConstraint bad{Matrix::Zero(2, 2), Vector::Zero(2), 1.0};
  CHECK_THROWS_AS(rademacher_conic(10, 1.0, 1.0, {bad}), Error);
}

// ---- assembly ---------------------------------------------------------------------

TEST_CASE("Dudley integral") {
  CHECK(dudley_rademacher_from_covering([](double) { return 0.0; }, 10, 1.0).value == 0.0);
  const double l = 3.0;
  const BoundReport flat = dudley_rademacher_from_covering([&](double) { return l; }, 12, 0.8, 2.0);
  CHECK(std::abs(flat.value - 2.0 * 0.8 * std::sqrt(l / 12.0)) <= 1e-6);
  // A decreasing log-covering with a closed-form integral: L(e) = (1 - e)^2 on [0, 1].
  const BoundReport quad = dudley_rademacher_from_covering([](double e) { return (1 - e) * (1 - e); }, 4, 1.0);
  CHECK(std::abs(quad.value - 0.25) <= 1e-6);
  CHECK_THROWS_AS(dudley_rademacher_from_covering([](double e) { return e; }, 4, 1.0), Error);

  Rng rng(16, "dudley");
  const LabeledDataset data = unlabeled(random_features(2, 10, rng));
  const Vector dir = rng.unit_vector(2);
  double prev = 1e300;
  for (double norm : {0.5, 1.0, 2.0, 4.0}) {
    const HalfSpace h = halfspace(dir * norm, 1.0);
    const double v = dudley_rademacher_from_covering(
                         [&](double e) { return covering_single_halfspace(data, h, e, 1.0).value; }, 10,
                         data.feature_bound)
                         .value;
    CHECK(std::isfinite(v));
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("generalization bound") {
  BoundReport zero;
  zero.value = 0.0;
  CHECK(generalization_bound(0.42, zero, 1.0, 50, 0.05, 0.0).value == 0.42);
  BoundReport rad;
  rad.value = 0.1;
  const BoundReport edge = generalization_bound(0.2, rad, 2.0, 50, 1.0);
  CHECK(edge.value == doctest::Approx(0.2 + 4 * 2.0 * 0.1).epsilon(1e-15));
  CHECK_FALSE(edge.flags.empty());
  double prev = 1e300;
  for (Index n : {10, 100, 1000, 10000}) {
    const double v = generalization_bound(0.2, rad, 1.0, n, 0.05).value;
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(generalization_bound(0.2, rad, 1.0, 10, 0.0), Error);
}
