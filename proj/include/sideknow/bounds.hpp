#pragma once

#include "sideknow/rng.hpp"
#include "sideknow/types.hpp"

#include <cstdint>
#include <functional>

namespace sideknow {

/// Conjugate exponents for the feature norm (r) and coefficient norm (q).
struct NormPair {
  double r = 2.0;
  double q = 2.0;

  static NormPair from_r(double r);
  /// Throws unless r, q >= 1 and |1/r + 1/q - 1| <= 1e-12.
  void check() const;
};

/// Absolute constant of the Gaussian-to-Rademacher comparison used by the
/// ellipsoid lower bound. Never fixed numerically in the literature.
struct LowerBoundConstants {
  double C = 1.0;
};

// ---- single half-space ------------------------------------------------------

/// Fraction alpha of the radius-r ball left after removing the cap above the
/// hyperplane at distance 1/||a|| + eps/(2 X_b), where r = B_b + eps/(2 X_b).
/// The cap fraction uses the regularized incomplete beta function
///   cap(h) / V_p(r) = 1/2 I_{1 - (h/r)^2}((p + 1)/2, 1/2).
double cap_fraction(Index p, const Vector& a, double eps, double ball_radius, double feature_bound);

/// log of alpha (2 B_b X_b / eps + 1)^p for the constraint w^T beta <= b,
/// normalized to a^T beta <= 1 with a = w / b. For b <= 0 the normalization
/// is impossible and the unconstrained bound (alpha = 1) is returned, flagged.
BoundReport covering_single_halfspace(const LabeledDataset& data, const HalfSpace& h, double eps,
                                      double ball_radius);

enum class DualVariant { Sound, PaperLiteral };

/// Monte Carlo dual bound for ball + one half-space a^T beta <= 1:
///   v_-(sigma) = min_{eta >= 0} B_b ||X sigma - eta a|| + eta,   v_+ likewise with +eta a.
/// Sound:        (1/n) E[max(v_-, v_+)]
/// PaperLiteral: (1/n) max(E[v_-], E[v_+])
/// When 2^n <= mc every sign vector is enumerated and the result is exact.
BoundReport rademacher_dual_halfspace(const LabeledDataset& data, const HalfSpace& h,
                                      double ball_radius, std::size_t mc, const Rng& rng,
                                      DualVariant variant = DualVariant::Sound);

// ---- polygonal --------------------------------------------------------------

struct LatticeCount {
  double log_count = 0.0;
  std::optional<std::uint64_t> exact;  // when the count fits in 64 bits
};

/// |{k in Z^p : sum |k_j| <= K}| = sum_{i=0}^{min(p,K)} 2^i C(p,i) C(K,i).
LatticeCount lattice_count_cross_polytope(Index p, double K);

/// Number of points of the cross-polytope lattice with sum_j c_j k_j <= K for
/// every row c of `coeffs` (V x p). Plain enumeration; callers cap the size.
std::uint64_t count_constrained_lattice(const Matrix& coeffs, std::int64_t K);

inline constexpr double kLatticeEnumerationCap = 1e7;

/// Polygonal covering bound. Each half-space w^T beta <= b (b > 0) becomes
/// c^T beta <= 1 with c = w / b and must carry its margin delta.
BoundReport covering_polygonal(const LabeledDataset& data, const std::vector<HalfSpace>& halfspaces,
                               double ball_radius, double eps, NormPair norms = {});

/// Polygonal bound with the ball radius replaced by sqrt(lambda_max(A^{-1}))
/// for A = gamma A1 + (1 - gamma) A2.
BoundReport covering_linear_quadratic(const LabeledDataset& data,
                                      const std::vector<HalfSpace>& halfspaces,
                                      const EllipsoidConstraint& e1, const EllipsoidConstraint& e2,
                                      double eps, double gamma);

// ---- ellipsoids -------------------------------------------------------------

/// (1/n) sqrt(trace(X^T A^{-1} X)), A normalized to level one.
BoundReport rademacher_ellipsoid_upper(const LabeledDataset& data, const EllipsoidConstraint& a_int);

/// kappa / (n ln n) sqrt(trace(X^T A^{-1} X)) with
/// kappa = 1 / (C sqrt(1 + 2 pi p n X_b^2 / min_j ||(P X)_j||^2)), A = P^T D P.
BoundReport rademacher_ellipsoid_lower(const LabeledDataset& data, const EllipsoidConstraint& a_int,
                                       double feature_bound, LowerBoundConstants consts = {});

/// sum_i log(2 X_b / (eps sqrt(lambda_i)) + 1).
BoundReport covering_ellipsoid_product(const Vector& eigenvalues, double feature_bound, double eps);

/// min over eta in [0, 1] of
///   (1/4n) trace(X^T (I + eta (A2 - I))^{-1} X) + (1/n)(B_b^2 + eta (1 - B_b^2)).
BoundReport rademacher_quadratic_dual(const LabeledDataset& data, const EllipsoidConstraint& a2,
                                      double ball_radius);

// ---- cones ------------------------------------------------------------------

/// (X_b / sqrt(n)) min{B_b, sum_k (B_b ||a_k|| + d_k) / (K lambda_min(A_k))}.
BoundReport rademacher_conic(Index n, double feature_bound, double ball_radius,
                             const std::vector<SOConstraint>& cones);

// ---- assembly ---------------------------------------------------------------

/// c_chain * integral_0^{eps_max} sqrt(cover_fn(eps) / n) d eps, where
/// cover_fn(eps) is log N(sqrt(n) eps). Adaptive trapezoid on
/// [eps_max 1e-6, eps_max]; the sliver below is bounded by
/// eps_min sqrt(cover_fn(eps_min) / n). Throws when cover_fn increases.
BoundReport dudley_rademacher_from_covering(const std::function<double(double)>& cover_fn, Index n,
                                            double eps_max, double c_chain = 1.0);

/// emp + 4 L R + c_conf sqrt(log(1/delta) / (2n)).
BoundReport generalization_bound(double emp_risk, const BoundReport& rad, double lipschitz, Index n,
                                 double delta, double c_conf = 1.0);

}  // namespace sideknow
