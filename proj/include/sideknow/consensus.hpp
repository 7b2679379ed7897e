#pragma once

#include "sideknow/types.hpp"

namespace sideknow {

struct SolverOptions {
  double tol = kTolerances.optimizer;  // absolute and relative residual tolerance
  int max_iterations = 10'000;
  double rho = 1.0;                    // initial penalty
  double relaxation = 1.6;             // over-relaxation factor in (0, 2)
};

struct SolverReport {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rho = 1.0;
  bool converged = false;
  double max_violation = 0.0;  // of the returned point, raw constraint excess
};

struct QpSolution {
  Vector beta;
  SolverReport report;
};

/// Consensus ADMM for   minimize 1/2 beta^T P beta + q^T beta   over a
/// ConstraintSet. Every member becomes one block z_k = L_k beta + o_k that
/// must lie in a simple set:
///   ball        L = I,                 ||z|| <= B_b
///   halfspace   L = w^T/||w||,         z <= b/||w||
///   ellipsoid   L = sqrt(Lambda) V^T,  ||z|| <= sqrt(c)   (A = V Lambda V^T)
///   l1 block    L = columns^T,         ||z||_1 <= c
///   cone        L = [A; a^T], o = (0, d), z in the second-order cone
/// The beta-update is the p x p solve (P + rho L^T L) beta = rhs. The solver is
/// immutable after construction and may be shared between threads.
class ConsensusSolver {
 public:
  ConsensusSolver(const ConstraintSet& set, Index p, SolverOptions options = {});

  /// Raw ADMM iterate; may violate constraints at the level of the tolerance.
  QpSolution minimize(const Matrix& P, const Vector& q) const;

  /// minimize followed by `make_feasible`. Throws InfeasibleError when no
  /// point within the feasibility tolerance can be produced.
  QpSolution solve(const Matrix& P, const Vector& q) const;

  /// Sequential projection pass over violated blocks, then a radial pull-back
  /// toward the origin if the origin is feasible. Throws InfeasibleError
  /// naming the worst block when the result still violates the set.
  Vector make_feasible(const Vector& beta) const;

  const ConstraintSet& set() const { return set_; }
  Index dim() const { return p_; }

 private:
  enum class Shape { Ball, UpperBound, L1Ball, Cone };
  struct Block {
    Shape shape;
    Index offset;
    Index rows;
    double radius;
  };

  Vector project(const Vector& v) const;

  ConstraintSet set_;
  Index p_;
  SolverOptions options_;
  std::vector<Block> blocks_;
  Matrix lift_;    // R x p
  Vector shift_;   // R
  Matrix gram_;    // lift^T lift
};

}  // namespace sideknow
