#include "doctest.h"

#include "sideknow/consensus.hpp"
#include "verify/oracles.hpp"

#include <cmath>

using namespace sideknow;
using namespace sideknow::verify;

TEST_CASE("interior unconstrained minimizer is returned") {
  ConstraintSet set = ConstraintSet::ball(10.0);
  set.halfspaces.push_back({Vector::Unit(2, 0), 5.0, std::nullopt});
  const Matrix p = (Matrix(2, 2) << 2, 0.5, 0.5, 1).finished();
  const Vector q = (Vector(2) << -1, 0.5).finished();
  const QpSolution s = ConsensusSolver(set, 2).solve(p, q);
  const Vector exact = p.ldlt().solve(-q);
  CHECK((s.beta - exact).norm() <= 1e-6);
  CHECK(s.report.converged);
}

TEST_CASE("projection QP matches closed forms") {
  // min 1/2||beta - z||^2 over the unit ball is the radial projection.
  const Vector z = (Vector(3) << 3, -4, 12).finished();
  const QpSolution s = ConsensusSolver(ConstraintSet::ball(1.0), 3).solve(Matrix::Identity(3, 3), -z);
  CHECK((s.beta - z / z.norm()).norm() <= 1e-6);
  CHECK(s.beta.norm() <= 1.0 + 1e-10);
}

TEST_CASE("quadratic programs against the p = 2 grid oracle") {
  Rng rng(1, "consensus");
  for (int t = 0; t < 8; ++t) {
    ConstraintSet set = ConstraintSet::ball(rng.uniform(1.0, 2.0));
    set.halfspaces.push_back({rng.unit_vector(2), rng.uniform(0.1, 0.6), std::nullopt});
    set.ellipsoids.push_back({random_spd(2, 0.5, 4.0, rng), 1.0});
    if (t % 2 == 0) {
      set.cones.push_back({0.5 * random_spd(2, 0.5, 2.0, rng), 0.3 * rng.normal_vector(2), 0.8});
    } else {
      set.l1_blocks.push_back({{0, 1}, random_features(2, 2, rng), 1.0});
    }
    const Matrix p = random_spd(2, 0.1, 3.0, rng);
    const Vector q = 3.0 * rng.normal_vector(2);
    auto objective = [&](const Vector& b) { return 0.5 * b.dot(p * b) + q.dot(b); };
    const QpSolution s = ConsensusSolver(set, 2).solve(p, q);
    const GridOptimum oracle = grid_minimize_2d(objective, set);
    CHECK(set.max_violation(s.beta) <= 1e-6);
    CHECK(objective(s.beta) <= oracle.value + 1e-6);
    CHECK(objective(s.beta) >= oracle.value - 1e-4 * std::max(1.0, std::abs(oracle.value)));
  }
}

TEST_CASE("make_feasible leaves feasible points alone and repairs slight violations") {
  Rng rng(2, "feasible");
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.halfspaces.push_back({Vector::Unit(3, 0), 0.5, std::nullopt});
  set.ellipsoids.push_back({random_spd(3, 0.5, 3.0, rng), 1.0});
  set.cones.push_back({Matrix::Identity(3, 3), Vector::Zero(3), 0.9});
  const ConsensusSolver solver(set, 3);
  const Vector inside = 0.01 * rng.normal_vector(3);
  CHECK(solver.make_feasible(inside) == inside);
  for (int t = 0; t < 50; ++t) {
    const Vector raw = 2.0 * rng.normal_vector(3);
    const Vector fixed = solver.make_feasible(raw);
    CHECK(set.max_violation(fixed) <= 1e-6);
  }
}

TEST_CASE("empty sets raise InfeasibleError naming a block") {
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.halfspaces.push_back({Vector::Unit(2, 0), -2.0, std::nullopt});
  try {
    ConsensusSolver(set, 2).solve(Matrix::Identity(2, 2), Vector::Zero(2));
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK_FALSE(e.block().empty());
    CHECK(e.violation() > 1e-6);
  }

  ConstraintSet zero = ConstraintSet::ball(1.0);
  zero.halfspaces.push_back({Vector::Zero(2), -1.0, std::nullopt});
  CHECK_THROWS_AS(ConsensusSolver(zero, 2), InfeasibleError);
}

TEST_CASE("trivially true half-spaces are ignored") {
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.halfspaces.push_back({Vector::Zero(2), 0.0, std::nullopt});
  const QpSolution s = ConsensusSolver(set, 2).solve(Matrix::Identity(2, 2), -Vector::Ones(2) * 0.3);
  CHECK((s.beta - Vector::Ones(2) * 0.3).norm() <= 1e-6);
}

TEST_CASE("solver is shareable and deterministic") {
  Rng rng(3, "share");
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.ellipsoids.push_back({random_spd(4, 0.5, 5.0, rng), 1.0});
  const ConsensusSolver solver(set, 4);
  const Vector q = rng.normal_vector(4);
  const QpSolution a = solver.solve(Matrix::Zero(4, 4), q);
  const QpSolution b = solver.solve(Matrix::Zero(4, 4), q);
  CHECK(a.beta == b.beta);
  CHECK(a.report.iterations == b.report.iterations);
}
