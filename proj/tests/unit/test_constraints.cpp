#include "doctest.h"

#include "sideknow/constraints.hpp"
#include "sideknow/rng.hpp"

#include <cmath>

using namespace sideknow;

namespace {

UnlabeledSet random_sample(Index p, Index m, Rng& rng) {
  Matrix x(p, m);
  for (Index j = 0; j < m; ++j) x.col(j) = rng.normal_vector(p);
  return UnlabeledSet::make(x);
}

UnlabeledSet columns(std::initializer_list<std::initializer_list<double>> cols) {
  const Index m = static_cast<Index>(cols.size());
  const Index p = static_cast<Index>(cols.begin()->size());
  Matrix x(p, m);
  Index j = 0;
  for (const auto& c : cols) {
    Index i = 0;
    for (double v : c) x(i++, j) = v;
    ++j;
  }
  return UnlabeledSet::make(x);
}

bool all_hold(const std::vector<HalfSpace>& hs, const Vector& beta) {
  for (const auto& h : hs)
    if (h.violation(beta) > 0.0) return false;
  return true;
}

}  // namespace

TEST_CASE("poset: definition and degenerate pair") {
  const UnlabeledSet u = columns({{1, 0}, {0, 0}});
  const auto hs = compile_poset(u, {{0, 1, 0.5}});
  REQUIRE(hs.size() == 1);
  CHECK(hs[0].normal == Vector::Unit(2, 0));
  CHECK(hs[0].offset == 0.5);

  const auto same = compile_poset(u, {{1, 1, 0.3}});
  CHECK(same[0].normal.isZero(0.0));
  CHECK(same[0].trivially_true());
  CHECK_THROWS_AS(compile_poset(u, {{1, 1, -0.3}}), Error);
  CHECK_THROWS_AS(compile_poset(u, {{0, 2, 1.0}}), Error);
}

TEST_CASE("poset: 1200 pairs from 120 points give 1200 half-spaces") {
  Rng rng(1, "poset");
  const UnlabeledSet u = random_sample(60, 120, rng);
  std::vector<PairSpec> pairs;
  for (Index i = 0; i < 120 && pairs.size() < 1200; ++i)
    for (Index j = i + 1; j < 120 && pairs.size() < 1200; ++j) pairs.push_back({i, j, 0.1});
  CHECK(compile_poset(u, pairs).size() == 1200);
}

TEST_CASE("must-link: two half-spaces equivalent to the absolute value bound") {
  Rng rng(2, "must_link");
  const UnlabeledSet u = random_sample(3, 2, rng);
  const auto hs = compile_must_link(u, {{0, 1, 1.0}});
  REQUIRE(hs.size() == 2);
  const Vector d = u.features.col(0) - u.features.col(1);
  for (int t = 0; t < 1000; ++t) {
    const Vector beta = rng.normal_vector(3);
    CHECK(all_hold(hs, beta) == (std::abs(beta.dot(d)) <= 1.0));
  }
  // c = 0 pins the prediction difference to zero.
  const auto slab = compile_must_link(u, {{0, 1, 0.0}});
  const Diagnostics diag = validate([&] {
    ConstraintSet s = ConstraintSet::ball(1.0);
    s.halfspaces = slab;
    return s;
  }(), 3);
  CHECK(diag.ok());
  REQUIRE(diag.warnings.size() == 1);
  CHECK(diag.warnings[0].find("zero-width") != std::string::npos);
  CHECK_THROWS_AS(compile_must_link(u, {{0, 1, -1.0}}), Error);
}

TEST_CASE("l1 sparsity: expansion counts and membership equivalence") {
  Rng rng(3, "l1");
  const UnlabeledSet u = random_sample(3, 5, rng);
  const auto one = std::get<std::vector<HalfSpace>>(compile_sparsity_l1(u, {2}, 0.7, true));
  REQUIRE(one.size() == 2);
  CHECK(one[0].normal == u.features.col(2));
  CHECK(one[1].normal == -u.features.col(2));

  const std::vector<Index> idx{0, 3, 4};
  const auto expanded = std::get<std::vector<HalfSpace>>(compile_sparsity_l1(u, idx, 1.5, true));
  CHECK(expanded.size() == 8);
  const auto block = std::get<L1PredictionBlock>(compile_sparsity_l1(u, idx, 1.5, false));
  for (int t = 0; t < 1000; ++t) {
    const Vector beta = rng.normal_vector(3);
    double direct = 0.0;
    for (Index i : idx) direct += std::abs(beta.dot(u.features.col(i)));
    CHECK((block.violation(beta) <= 0.0) == (direct <= 1.5));
    CHECK(all_hold(expanded, beta) == (direct <= 1.5));
  }
  const std::vector<Index> big(13, 0);
  CHECK_THROWS_AS(compile_sparsity_l1(u, big, 1.0, true), Error);
}

TEST_CASE("linf box: counts, zero level, direct max check") {
  Rng rng(4, "box");
  const UnlabeledSet u = random_sample(3, 4, rng);
  CHECK(compile_linf_box(u, {0, 1}, 1.0).size() == 4);

  const auto zero = compile_linf_box(u, {1}, 0.0);
  const Vector x = u.features.col(1);
  const Vector orth = Vector::Unit(3, 0) - x * (x(0) / x.squaredNorm());
  CHECK(all_hold(zero, orth * 0.0));
  CHECK_FALSE(all_hold(zero, x));

  const std::vector<Index> idx{0, 2, 3};
  const auto hs = compile_linf_box(u, idx, 0.8);
  for (int t = 0; t < 1000; ++t) {
    const Vector beta = rng.normal_vector(3);
    double worst = 0.0;
    for (Index i : idx) worst = std::max(worst, std::abs(beta.dot(u.features.col(i))));
    CHECK(all_hold(hs, beta) == (worst <= 0.8));
  }
}

TEST_CASE("quadratic pairwise: must-link outer product and rejected product") {
  const UnlabeledSet same = columns({{1, 2}, {1, 2}});
  CHECK(compile_quadratic_pairwise(same, {{0, 1, 1.0}}, PairwiseMode::MustLink)[0].matrix.isZero(0.0));

  const UnlabeledSet u = columns({{1, 1}, {0, 0}});
  const auto e = compile_quadratic_pairwise(u, {{0, 1, 2.0}}, PairwiseMode::MustLink);
  CHECK(e[0].matrix == Matrix::Ones(2, 2));
  CHECK(e[0].level == 2.0);
  CHECK(Eigen::FullPivLU<Matrix>(e[0].matrix).rank() == 1);

  const UnlabeledSet v = columns({{1, 0}, {0, 1}});
  // 1/2 [[0,1],[1,0]] has eigenvalues +-1/2.
  Matrix sym(2, 2);
  sym << 0, 0.5, 0.5, 0;
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues()(0) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(compile_quadratic_pairwise(v, {{0, 1, 1.0}}, PairwiseMode::Product), Error);
  // A point paired with itself gives x x^T, which is PSD.
  CHECK(compile_quadratic_pairwise(v, {{0, 0, 1.0}}, PairwiseMode::Product)[0].matrix == Matrix(Vector::Unit(2, 0) * Vector::Unit(2, 0).transpose()));
}

TEST_CASE("quadratic form: identity and first difference") {
  const UnlabeledSet one = columns({{1, 0}});
  const EllipsoidConstraint e = compile_quadratic_form(one, GammaOperator::identity(), 4.0);
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  CHECK(e.matrix == expect);
  CHECK(e.level == 4.0);

  const UnlabeledSet twins = columns({{0.3, -1}, {0.3, -1}});
  CHECK(compile_quadratic_form(twins, GammaOperator::first_difference(), 1.0).matrix.isZero(0.0));

  CHECK(GammaOperator::first_difference().materialize(120).rows() == 119);
  CHECK(GammaOperator::first_difference().materialize(120).cols() == 120);

  // Energy equals the sum of squared prediction steps.
  Rng rng(5, "qf");
  const UnlabeledSet u = random_sample(4, 6, rng);
  const EllipsoidConstraint fd = compile_quadratic_form(u, GammaOperator::first_difference(), 1.0);
  for (int t = 0; t < 100; ++t) {
    const Vector beta = rng.normal_vector(4);
    double steps = 0.0;
    for (Index i = 0; i + 1 < 6; ++i) steps += std::pow(beta.dot(u.features.col(i) - u.features.col(i + 1)), 2);
    CHECK(beta.dot(fd.matrix * beta) == doctest::Approx(steps).epsilon(1e-12));
  }
}

TEST_CASE("graph Laplacian: empty graph, identical points, edge-sum identity") {
  Rng rng(6, "graph");
  const UnlabeledSet u = random_sample(3, 3, rng);
  CHECK(compile_graph_laplacian(u, GraphSpec{3, {}}, 1.0).matrix.isZero(0.0));

  const UnlabeledSet twins = columns({{1, 2}, {1, 2}});
  CHECK(compile_graph_laplacian(twins, GraphSpec{2, {{0, 1, 1.0}}}, 1.0).matrix.isZero(0.0));

  // Path 0-1-2, each edge listed once: beta^T X L X^T beta = sum_edges a_ij (f_i - f_j)^2.
  const GraphSpec path{3, {{0, 1, 0.7}, {1, 2, 2.0}}};
  const EllipsoidConstraint e = compile_graph_laplacian(u, path, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Vector beta = rng.normal_vector(3);
    double edge_sum = 0.0;
    for (const auto& edge : path.edges)
      edge_sum += edge.weight * std::pow(beta.dot(u.features.col(edge.i)) - beta.dot(u.features.col(edge.j)), 2);
    CHECK(beta.dot(e.matrix * beta) == doctest::Approx(edge_sum).epsilon(1e-12));
  }
  CHECK_THROWS_AS(graph_laplacian(GraphSpec{2, {{0, 0, 1.0}}}), Error);

  const GraphSpec complete = gaussian_edge_weights(u, 0.5, 2.0);
  CHECK(complete.edges.size() == 3);
  CHECK(complete.edges[0].weight ==
        doctest::Approx(std::exp(-0.5 * (u.features.col(0) - u.features.col(1)).norm())));
}

TEST_CASE("robust cone: degenerate cases and sampled worst case") {
  const Vector mean = (Vector(2) << 0.3, -0.1).finished();
  const SOConstraint flat = compile_robust_soc(mean, Matrix::Zero(2, 2));
  for (const Vector& beta : {Vector(Vector::Unit(2, 0) * 3.0), Vector(Vector::Unit(2, 1) * 5.0)})
    CHECK((flat.violation(beta) <= 0.0) == (mean.dot(beta) <= 1.0));

  const SOConstraint ball = compile_robust_soc(Vector::Zero(2), Matrix::Identity(2, 2));
  CHECK(ball.violation(Vector::Unit(2, 1) * 0.99) <= 0.0);
  CHECK(ball.violation(Vector::Unit(2, 1) * 1.01) > 0.0);

  Rng rng(7, "robust");
  Matrix spread(3, 3);
  for (Index j = 0; j < 3; ++j) spread.col(j) = 0.4 * rng.normal_vector(3);
  const Vector abar = 0.5 * rng.normal_vector(3);
  const SOConstraint cone = compile_robust_soc(abar, spread);
  std::vector<Vector> us;
  for (int s = 0; s < 10'000; ++s) us.push_back(rng.unit_vector(3));
  for (int t = 0; t < 1000; ++t) {
    const Vector beta = rng.normal_vector(3);
    double worst = -1e300;
    for (const auto& uu : us) worst = std::max(worst, (abar + spread * uu).dot(beta));
    const bool holds = cone.violation(beta) <= 0.0;
    if (holds) CHECK(worst <= 1.0 + 1e-9);
    if (worst <= 1.0 - 1e-3) CHECK(holds);
  }
}

TEST_CASE("chance cone: quantile scaling and empirical probability") {
  const SOConstraint c = compile_chance_soc(Vector::Zero(2), Matrix::Identity(2, 2), 0.975);
  CHECK((c.map - 1.959964 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6);

  const SOConstraint near_half = compile_chance_soc(Vector::Ones(2), Matrix::Identity(2, 2), 0.5 + 1e-12);
  CHECK(near_half.map.norm() <= 1e-9);

  CHECK_THROWS_AS(compile_chance_soc(Vector::Zero(1), Matrix::Identity(1, 1), 0.5), Error);

  // p = 1, mean 0, unit variance, eta = 0.9: the boundary point satisfies
  // z * beta = 1, and P(a beta <= 1) should be 0.9.
  const SOConstraint one = compile_chance_soc(Vector::Zero(1), Matrix::Identity(1, 1), 0.9);
  const double beta = 1.0 / one.map(0, 0);
  Rng rng(8, "chance");
  int ok = 0;
  for (int s = 0; s < 100'000; ++s) ok += rng.normal() * beta <= 1.0;
  CHECK(std::abs(ok / 1e5 - 0.9) <= 0.01);
}

TEST_CASE("compilers are deterministic") {
  Rng rng(9, "pure");
  const UnlabeledSet u = random_sample(3, 6, rng);
  const auto a = compile_graph_laplacian(u, gaussian_edge_weights(u, 1.0, 1.0), 2.0);
  const auto b = compile_graph_laplacian(u, gaussian_edge_weights(u, 1.0, 1.0), 2.0);
  CHECK(a.matrix == b.matrix);
  CHECK(a.matrix.isApprox(a.matrix.transpose(), 0.0));
  CHECK(min_eigenvalue(a.matrix) >= -1e-10);
}
