#pragma once

#include "sideknow/rng.hpp"
#include "sideknow/types.hpp"

namespace sideknow {

/// gamma A1 + (1 - gamma) A2 after normalizing both levels to one. The
/// result circumscribes the intersection of the two ellipsoids.
EllipsoidConstraint kahan_combine(const EllipsoidConstraint& e1, const EllipsoidConstraint& e2,
                                  double gamma);

/// trace(X^T A^{-1} X) for examples-as-columns X; +inf when A is not
/// positive definite.
double trace_objective(const Matrix& a, const Matrix& x);

struct GammaChoice {
  double gamma = 0.0;
  double value = 0.0;
};

/// Member of the combination family minimizing trace(X^T A_gamma^{-1} X):
/// 64-point scan plus golden-section refinement, ties toward smaller gamma.
GammaChoice trace_min_gamma(const EllipsoidConstraint& e1, const EllipsoidConstraint& e2,
                            const Matrix& x);

struct VolumeChoice {
  double gamma = 0.0;
  Matrix congruence;  // C with C^T A_i C diagonal
  Vector diag1;
  Vector diag2;
};

/// Member of the combination family with the largest determinant (smallest
/// volume). Simultaneous diagonalization via Cholesky of the definite matrix,
/// then a guarded Newton solve of the concave log-determinant in gamma.
VolumeChoice volume_min_gamma(const EllipsoidConstraint& e1, const EllipsoidConstraint& e2);

struct SimplexChoice {
  Vector gamma;
  double value = 0.0;
};

/// Best-effort minimization of trace(X^T (sum_k gamma_k A_k)^{-1} X) over the
/// simplex: projected gradient from the barycenter plus `restarts` random
/// starts. Not guaranteed to be globally optimal for K > 2.
SimplexChoice simplex_trace_min(const std::vector<EllipsoidConstraint>& ellipsoids, const Matrix& x,
                                std::uint64_t seed = 0, int restarts = 10);

/// Euclidean projection onto the simplex {g >= 0, sum g = 1}.
Vector project_simplex(const Vector& v);

Vector project_ball(const Vector& z, double radius);
Vector project_halfspace(const Vector& z, const HalfSpace& h);

struct ConePoint {
  Vector u;
  double t = 0.0;
};

/// Projection onto the second-order cone {(u, t) : ||u|| <= t}.
ConePoint project_soc(const ConePoint& point);

/// Projection onto the l1 ball of the given radius.
Vector project_l1_ball(const Vector& v, double radius);

/// Exact Euclidean projection onto {beta : beta^T A beta <= c}. Directions in
/// the null space of A are left untouched.
Vector project_ellipsoid(const Vector& z, const EllipsoidConstraint& e);

struct IntersectionSample {
  std::vector<Vector> points;
  std::size_t attempts = 0;
  Vector half_widths;  // rejection box [-w, w]

  double acceptance_rate() const {
    return attempts == 0 ? 0.0 : static_cast<double>(points.size()) / static_cast<double>(attempts);
  }
};

/// Uniform samples from the intersection of two ellipsoids by rejection from
/// the tightest bounding box. Aborts when the acceptance rate drops below 1e-6.
IntersectionSample sample_intersection(const EllipsoidConstraint& e1, const EllipsoidConstraint& e2,
                                       std::size_t count, Rng& rng);

}  // namespace sideknow
