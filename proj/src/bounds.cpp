#include "sideknow/bounds.hpp"

#include "sideknow/detail/univariate.hpp"
#include "sideknow/geometry.hpp"
#include "sideknow/parallel.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sideknow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoundReport make_report(BoundKind kind, std::string tag) {
  BoundReport r;
  r.kind = kind;
  r.theorem_tag = std::move(tag);
  return r;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw Error(std::string(name) + " must be positive");
}

Vector normalized_normal(const HalfSpace& h, const char* who) {
  if (!(h.offset > 0.0)) {
    throw Error(std::string(who) + ": half-space offset must be positive to normalize to a^T beta <= 1");
  }
  return h.normal / h.offset;
}

// log C(K, i) for real K >= i, stable when K is huge.
double log_choose(double K, Index i) {
  double s = 0.0;
  for (Index t = 0; t < i; ++t) s += std::log(K - static_cast<double>(t));
  return s - std::lgamma(static_cast<double>(i) + 1.0);
}

}  // namespace

NormPair NormPair::from_r(double r) {
  if (!(r >= 1.0)) throw Error("feature norm order r must be >= 1");
  if (std::isinf(r)) return {r, 1.0};
  if (r == 1.0) return {1.0, kInf};
  return {r, r / (r - 1.0)};
}

void NormPair::check() const {
  if (!(r >= 1.0 && q >= 1.0)) throw Error("norm orders must be >= 1");
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  if (std::abs(inv_r + inv_q - 1.0) > 1e-12) throw Error("norm orders must satisfy 1/r + 1/q = 1");
}

double cap_fraction(Index p, const Vector& a, double eps, double ball_radius, double feature_bound) {
  if (p < 1) throw Error("cap_fraction: p must be >= 1");
  require_positive(eps, "eps");
  require_positive(ball_radius, "ball radius");
  require_positive(feature_bound, "feature bound");
  const double norm = a.norm();
  if (norm == 0.0) return 1.0;
  const double slack = eps / (2.0 * feature_bound);
  const double r = ball_radius + slack;
  const double h = 1.0 / norm + slack;
  if (h >= r) return 1.0;
  const double x = h / r;
  const double cap = 0.5 * boost::math::ibeta(0.5 * (static_cast<double>(p) + 1.0), 0.5, 1.0 - x * x);
  const double alpha = 1.0 - cap;
  return std::clamp(alpha, std::numeric_limits<double>::min(), 1.0);
}

BoundReport covering_single_halfspace(const LabeledDataset& data, const HalfSpace& h, double eps,
                                      double ball_radius) {
  require_positive(eps, "eps");
  require_positive(ball_radius, "ball radius");
  const Index p = data.dim();
  const double xb = data.feature_bound;
  require_positive(xb, "feature bound");
  if (h.normal.size() != p) throw Error("covering_single_halfspace: dimension mismatch");

  BoundReport rep = make_report(BoundKind::CoveringLog, "single_halfspace_volume");
  double alpha = 1.0;
  if (h.offset > 0.0) {
    alpha = cap_fraction(p, h.normal / h.offset, eps, ball_radius, xb);
  } else {
    rep.flags.push_back("offset <= 0: cannot normalize to a^T beta <= 1; unconstrained bound used (alpha = 1)");
  }
  const double base = static_cast<double>(p) * std::log(2.0 * ball_radius * xb / eps + 1.0);
  rep.value = std::log(alpha) + base;
  rep.parameters["alpha"] = alpha;
  rep.parameters["r"] = ball_radius + eps / (2.0 * xb);
  rep.parameters["log_unconstrained"] = base;
  rep.parameters["eps"] = eps;
  return rep;
}

namespace {

// min_{eta >= 0} B ||v - eta a|| + eta; convex in eta.
double dual_inner(const Vector& v, const Vector& a, double ball_radius) {
  const double an = a.norm();
  const double at_zero = ball_radius * v.norm();
  if (an == 0.0) return at_zero;
  const double eta_max = 2.0 * v.norm() / an + 1.0;
  auto f = [&](double eta) { return ball_radius * (v - eta * a).norm() + eta; };
  const auto best = detail::golden_section(f, 0.0, eta_max, 1e-13);
  return std::min(at_zero, best.value);
}

}  // namespace

BoundReport rademacher_dual_halfspace(const LabeledDataset& data, const HalfSpace& h,
                                      double ball_radius, std::size_t mc, const Rng& rng,
                                      DualVariant variant) {
  if (mc == 0) throw Error("rademacher_dual_halfspace: mc must be positive");
  require_positive(ball_radius, "ball radius");
  if (h.normal.size() != data.dim()) throw Error("rademacher_dual_halfspace: dimension mismatch");
  const Vector a = normalized_normal(h, "rademacher_dual_halfspace");
  const Index n = data.size();

  const bool exhaustive = n < 63 && (std::uint64_t{1} << n) <= mc;
  const std::size_t draws = exhaustive ? static_cast<std::size_t>(std::uint64_t{1} << n) : mc;
  std::vector<double> minus(draws);
  std::vector<double> plus(draws);
  parallel_for(draws, [&](std::size_t i) {
    Vector sigma(n);
    if (exhaustive) {
      for (Index k = 0; k < n; ++k) sigma(k) = (i >> k) & 1U ? -1.0 : 1.0;
    } else {
      Rng stream = rng.substream(i);
      sigma = stream.rademacher_vector(n);
    }
    const Vector v = data.features * sigma;
    minus[i] = dual_inner(v, a, ball_radius);
    plus[i] = dual_inner(v, -a, ball_radius);
  });

  const double inv_n = 1.0 / static_cast<double>(n);
  auto mean_sd = [&](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };

  BoundReport rep = make_report(BoundKind::Rademacher, "halfspace_dual");
  std::vector<double> worst(draws);
  for (std::size_t i = 0; i < draws; ++i) worst[i] = std::max(minus[i], plus[i]);
  const auto [m_sound, sd_sound] = mean_sd(worst);
  const auto [m_minus, sd_minus] = mean_sd(minus);
  const auto [m_plus, sd_plus] = mean_sd(plus);
  const double sqrt_draws = std::sqrt(static_cast<double>(draws));

  rep.parameters["sound"] = inv_n * m_sound;
  rep.parameters["paper_literal"] = inv_n * std::max(m_minus, m_plus);
  rep.parameters["mean_minus"] = inv_n * m_minus;
  rep.parameters["mean_plus"] = inv_n * m_plus;
  rep.parameters["draws"] = static_cast<double>(draws);
  if (variant == DualVariant::Sound) {
    rep.value = inv_n * m_sound;
    rep.mc_stderr = exhaustive ? 0.0 : inv_n * sd_sound / sqrt_draws;
    rep.parameters["variant_sound"] = 1.0;
  } else {
    rep.value = inv_n * std::max(m_minus, m_plus);
    const double sd = m_minus >= m_plus ? sd_minus : sd_plus;
    rep.mc_stderr = exhaustive ? 0.0 : inv_n * sd / sqrt_draws;
    rep.parameters["variant_sound"] = 0.0;
    rep.flags.push_back("paper_literal variant: max of expectations, may under-bound");
  }
  if (exhaustive) rep.flags.push_back("exhaustive: all 2^n sign vectors enumerated");
  return rep;
}

LatticeCount lattice_count_cross_polytope(Index p, double K) {
  if (p < 1) throw Error("lattice count: p must be >= 1");
  if (!(K >= 0.0) || K != std::floor(K)) throw Error("lattice count: K must be a nonnegative integer");
  const Index top = static_cast<Index>(std::min(static_cast<double>(p), K));

  LatticeCount out;
  // Exact sum in 128-bit arithmetic while it fits.
  if (K < 1e18) {
    using u128 = unsigned __int128;
    const auto k_int = static_cast<u128>(K);
    const u128 limit = ~u128{0} >> 2;
    u128 cp = 1;  // C(p, i)
    u128 ck = 1;  // C(K, i)
    u128 pow2 = 1;
    u128 total = 0;
    bool overflow = false;
    for (Index i = 0; i <= top && !overflow; ++i) {
      if (i > 0) {
        const auto ii = static_cast<u128>(i);
        // C(n, i) = C(n, i-1) (n - i + 1) / i is exact at every step.
        if (cp > limit / static_cast<u128>(p)) { overflow = true; break; }
        cp = cp * static_cast<u128>(p - i + 1) / ii;
        if (ck != 0 && (k_int - ii + 1) > limit / ck) { overflow = true; break; }
        ck = ck * (k_int - ii + 1) / ii;
        pow2 <<= 1;
        if (pow2 > limit) { overflow = true; break; }
      }
      const u128 a = pow2;
      if (a != 0 && cp > limit / a) { overflow = true; break; }
      const u128 ab = a * cp;
      if (ab != 0 && ck > limit / ab) { overflow = true; break; }
      total += ab * ck;
      if (total > limit) overflow = true;
    }
    if (!overflow) {
      out.log_count = std::log(static_cast<long double>(total));
      if (total <= static_cast<u128>(std::numeric_limits<std::uint64_t>::max())) {
        out.exact = static_cast<std::uint64_t>(total);
      }
      return out;
    }
  }
  // Log-sum-exp fallback.
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(top) + 1);
  for (Index i = 0; i <= top; ++i) {
    terms.push_back(static_cast<double>(i) * std::numbers::ln2 +
                    log_choose(static_cast<double>(p), i) + log_choose(K, i));
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - peak);
  out.log_count = peak + std::log(s);
  return out;
}

namespace {

void enumerate_lattice(const Matrix& coeffs, Index j, std::int64_t budget, Vector& partial,
                       std::int64_t K, std::uint64_t& count) {
  const Index p = coeffs.cols();
  if (j == p) {
    if (coeffs.rows() == 0 || partial.maxCoeff() <= static_cast<double>(K) + 1e-9) ++count;
    return;
  }
  for (std::int64_t k = -budget; k <= budget; ++k) {
    const std::int64_t rest = budget - (k < 0 ? -k : k);
    if (k != 0) partial += static_cast<double>(k) * coeffs.col(j);
    enumerate_lattice(coeffs, j + 1, rest, partial, K, count);
    if (k != 0) partial -= static_cast<double>(k) * coeffs.col(j);
  }
}

}  // namespace

std::uint64_t count_constrained_lattice(const Matrix& coeffs, std::int64_t K) {
  if (K < 0) throw Error("lattice count: K must be nonnegative");
  Vector partial = Vector::Zero(coeffs.rows());
  std::uint64_t count = 0;
  enumerate_lattice(coeffs, 0, K, partial, K, count);
  return count;
}

BoundReport covering_polygonal(const LabeledDataset& data, const std::vector<HalfSpace>& halfspaces,
                               double ball_radius, double eps, NormPair norms) {
  require_positive(eps, "eps");
  require_positive(ball_radius, "ball radius");
  norms.check();
  const Index p = data.dim();
  const Index n = data.size();
  const double r = norms.r;

  double xb = data.feature_bound;
  if (r != 2.0) {
    xb = 0.0;
    for (Index i = 0; i < n; ++i) {
      const auto col = data.features.col(i);
      xb = std::max(xb, std::isinf(r) ? col.lpNorm<Eigen::Infinity>()
                                      : std::pow(col.cwiseAbs().array().pow(r).sum(), 1.0 / r));
    }
  }
  require_positive(xb, "feature bound");

  BoundReport rep = make_report(BoundKind::CoveringLog, "polygonal_lattice");
  rep.parameters["X_b"] = xb;
  rep.parameters["B_b"] = ball_radius;
  rep.parameters["eps"] = eps;
  rep.parameters["r"] = r;
  const double scale_sq = xb * xb * ball_radius * ball_radius;
  if (eps >= xb * ball_radius) {
    rep.value = 0.0;
    rep.flags.push_back("eps >= X_b B_b: a single ball covers the class");
    return rep;
  }

  const double k0 = std::ceil(scale_sq / (eps * eps));
  const LatticeCount p_k0 = lattice_count_cross_polytope(p, k0);
  rep.parameters["K0"] = k0;
  rep.parameters["log_P_K0"] = p_k0.log_count;
  rep.value = p_k0.log_count;
  if (halfspaces.empty()) return rep;

  // Row norms of X_L (one per feature) and the scaled coefficients.
  Vector row_scale(p);
  for (Index j = 0; j < p; ++j) {
    const auto row = data.features.row(j);
    const double hn = std::isinf(r) ? row.lpNorm<Eigen::Infinity>()
                                    : std::pow(row.cwiseAbs().array().pow(r).sum(), 1.0 / r);
    if (!(hn > 0.0)) throw Error("covering_polygonal: feature row " + std::to_string(j) + " is zero");
    row_scale(j) = std::pow(static_cast<double>(n), 1.0 / r) * xb * ball_radius / hn;
  }
  const auto v_count = static_cast<Index>(halfspaces.size());
  Matrix c_tilde(v_count, p);
  double min_ratio = kInf;
  for (Index v = 0; v < v_count; ++v) {
    const auto& h = halfspaces[static_cast<std::size_t>(v)];
    if (h.normal.size() != p) throw Error("covering_polygonal: dimension mismatch");
    if (!h.margin) {
      throw Error("covering_polygonal: halfspace[" + std::to_string(v) + "] has no margin delta");
    }
    require_positive(*h.margin, "margin");
    const Vector c = normalized_normal(h, "covering_polygonal");
    c_tilde.row(v) = c.cwiseProduct(row_scale).transpose();
    const double l1 = c_tilde.row(v).lpNorm<1>();
    min_ratio = std::min(min_ratio, l1 > 0.0 ? *h.margin / l1 : kInf);
  }
  const Matrix xs = row_scale.asDiagonal() * data.features;
  const double lam_min = min_eigenvalue(xs * xs.transpose());
  rep.parameters["lambda_min"] = lam_min;
  rep.parameters["min_margin_ratio"] = min_ratio;
  if (lam_min <= 1e-12) {
    rep.flags.push_back("lambda_min(X_sL X_sL^T) <= 1e-12: K is infinite, closed-form |P^K0| used");
    return rep;
  }
  double k = k0;
  if (std::isfinite(min_ratio)) {
    k = std::max(k0, std::ceil(static_cast<double>(n) * scale_sq / (lam_min * min_ratio * min_ratio)));
  }
  rep.parameters["K"] = k;
  const LatticeCount p_k = lattice_count_cross_polytope(p, k);
  rep.parameters["log_P_K"] = p_k.log_count;
  if (!p_k.exact || static_cast<double>(*p_k.exact) > kLatticeEnumerationCap) {
    rep.flags.push_back("|P^K| exceeds the enumeration cap; |P_c^K| skipped, |P^K0| used alone");
    return rep;
  }
  const std::uint64_t pck = count_constrained_lattice(c_tilde, static_cast<std::int64_t>(k));
  rep.parameters["P_c_K"] = static_cast<double>(pck);
  const double log_pck = std::log(static_cast<double>(pck));
  rep.parameters["log_P_c_K"] = log_pck;
  rep.value = std::min(p_k0.log_count, log_pck);
  return rep;
}

BoundReport covering_linear_quadratic(const LabeledDataset& data,
                                      const std::vector<HalfSpace>& halfspaces,
                                      const EllipsoidConstraint& e1, const EllipsoidConstraint& e2,
                                      double eps, double gamma) {
  const EllipsoidConstraint a = kahan_combine(e1, e2, gamma);
  const double lam_min = min_eigenvalue(a.matrix);
  if (!(lam_min > kTolerances.psd)) {
    throw Error("covering_linear_quadratic: combined matrix is not positive definite");
  }
  const double lam_max_inv = 1.0 / lam_min;
  BoundReport rep = covering_polygonal(data, halfspaces, std::sqrt(lam_max_inv), eps);
  rep.theorem_tag = "linear_quadratic_lattice";
  rep.parameters["lambda_max_inverse"] = lam_max_inv;
  rep.parameters["gamma"] = gamma;
  return rep;
}

BoundReport rademacher_ellipsoid_upper(const LabeledDataset& data, const EllipsoidConstraint& a_int) {
  const Matrix a = a_int.normalized().matrix;
  if (a.rows() != data.dim()) throw Error("rademacher_ellipsoid_upper: dimension mismatch");
  const double trace = trace_objective(a, data.features);
  if (!std::isfinite(trace)) throw Error("rademacher_ellipsoid_upper: matrix is singular");
  BoundReport rep = make_report(BoundKind::Rademacher, "ellipsoid_trace_upper");
  rep.value = std::sqrt(trace) / static_cast<double>(data.size());
  rep.parameters["trace"] = trace;
  return rep;
}

BoundReport rademacher_ellipsoid_lower(const LabeledDataset& data, const EllipsoidConstraint& a_int,
                                       double feature_bound, LowerBoundConstants consts) {
  require_positive(consts.C, "constant C");
  const Index n = data.size();
  const Index p = data.dim();
  if (n < 3) throw Error("rademacher_ellipsoid_lower: needs n >= 3 so that log n >= 1");
  const Matrix a = a_int.normalized().matrix;
  if (a.rows() != p) throw Error("rademacher_ellipsoid_lower: dimension mismatch");
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (!(eig.eigenvalues()(0) > kTolerances.psd)) {
    throw Error("rademacher_ellipsoid_lower: matrix must be positive definite");
  }
  const double trace = trace_objective(sym, data.features);
  const Matrix px = eig.eigenvectors().transpose() * data.features;
  const double min_row_sq = px.rowwise().squaredNorm().minCoeff();

  BoundReport rep = make_report(BoundKind::Rademacher, "ellipsoid_trace_lower");
  rep.parameters["trace"] = trace;
  rep.parameters["min_row_norm"] = std::sqrt(min_row_sq);
  rep.parameters["C"] = consts.C;
  if (min_row_sq <= 0.0) {
    rep.value = 0.0;
    rep.parameters["kappa"] = 0.0;
    rep.flags.push_back("P X_L has a zero row: kappa degenerates to 0");
    return rep;
  }
  const double nd = static_cast<double>(n);
  const double kappa =
      1.0 / (consts.C * std::sqrt(1.0 + 2.0 * std::numbers::pi * static_cast<double>(p) * nd *
                                            feature_bound * feature_bound / min_row_sq));
  rep.parameters["kappa"] = kappa;
  rep.value = kappa / (nd * std::log(nd)) * std::sqrt(trace);
  return rep;
}

BoundReport covering_ellipsoid_product(const Vector& eigenvalues, double feature_bound, double eps) {
  require_positive(eps, "eps");
  require_positive(feature_bound, "feature bound");
  BoundReport rep = make_report(BoundKind::CoveringLog, "ellipsoid_product_covering");
  double s = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    if (!(eigenvalues(i) > 0.0)) throw Error("covering_ellipsoid_product: eigenvalues must be positive");
    s += std::log(2.0 * feature_bound / (eps * std::sqrt(eigenvalues(i))) + 1.0);
  }
  rep.value = s;
  rep.parameters["eps"] = eps;
  rep.parameters["X_b"] = feature_bound;
  return rep;
}

BoundReport rademacher_quadratic_dual(const LabeledDataset& data, const EllipsoidConstraint& a2,
                                      double ball_radius) {
  require_positive(ball_radius, "ball radius");
  const Index p = data.dim();
  const Matrix a = a2.normalized().matrix;
  if (a.rows() != p) throw Error("rademacher_quadratic_dual: dimension mismatch");
  const double nd = static_cast<double>(data.size());
  const double b2 = ball_radius * ball_radius;
  const Matrix ident = Matrix::Identity(p, p);
  auto objective = [&](double eta) {
    const double t = trace_objective(ident + eta * (a - ident), data.features);
    return t / (4.0 * nd) + (b2 + eta * (1.0 - b2)) / nd;
  };
  const auto best = detail::grid_golden_unit(objective, 64, 1e-12);
  if (!std::isfinite(best.value)) throw Error("rademacher_quadratic_dual: singular at every grid point");
  BoundReport rep = make_report(BoundKind::Rademacher, "quadratic_dual");
  rep.value = best.value;
  rep.parameters["eta"] = best.x;
  rep.parameters["objective_eta0"] = objective(0.0);
  rep.parameters["objective_eta1"] = objective(1.0);
  return rep;
}

BoundReport rademacher_conic(Index n, double feature_bound, double ball_radius,
                             const std::vector<SOConstraint>& cones) {
  if (n < 1) throw Error("rademacher_conic: n must be >= 1");
  require_positive(ball_radius, "ball radius");
  if (!(feature_bound >= 0.0)) throw Error("feature bound must be nonnegative");
  BoundReport rep = make_report(BoundKind::Rademacher, "conic_dual");
  const double front = feature_bound / std::sqrt(static_cast<double>(n));
  rep.parameters["K"] = static_cast<double>(cones.size());
  if (cones.empty()) {
    rep.value = front * ball_radius;
    rep.parameters["branch_ball"] = 1.0;
    return rep;
  }
  const double kd = static_cast<double>(cones.size());
  double inner = 0.0;
  for (std::size_t k = 0; k < cones.size(); ++k) {
    const auto& c = cones[k];
    const Matrix& a = c.map;
    const bool square = a.rows() == a.cols();
    if (!square || (a - a.transpose()).cwiseAbs().maxCoeff() > kTolerances.psd) {
      throw Error("rademacher_conic: cone[" + std::to_string(k) + "] map must be square symmetric");
    }
    const double lam = min_eigenvalue(a);
    if (!(lam > kTolerances.psd)) {
      std::ostringstream msg;
      msg << "rademacher_conic: cone[" << k << "] map is not positive definite (lambda_min = " << lam << ")";
      throw Error(msg.str());
    }
    inner += (ball_radius * c.slope.norm() + c.shift) / (kd * lam);
  }
  rep.parameters["inner_sum"] = inner;
  rep.parameters["branch_ball"] = ball_radius <= inner ? 1.0 : 0.0;
  rep.value = front * std::min(ball_radius, inner);
  return rep;
}

BoundReport dudley_rademacher_from_covering(const std::function<double(double)>& cover_fn, Index n,
                                            double eps_max, double c_chain) {
  if (n < 1) throw Error("dudley: n must be >= 1");
  require_positive(eps_max, "eps_max");
  if (!(c_chain >= 0.0)) throw Error("dudley: chaining constant must be nonnegative");
  const double nd = static_cast<double>(n);
  const double eps_min = eps_max * 1e-6;

  std::vector<std::pair<double, double>> samples;
  auto integrand = [&](double e) {
    const double v = cover_fn(e);
    if (!(v >= 0.0) || std::isnan(v)) throw Error("dudley: cover_fn must return a nonnegative log count");
    samples.emplace_back(e, v);
    return std::sqrt(v / nd);
  };

  constexpr double kTol = 1e-9;
  constexpr int kMaxDepth = 40;
  std::function<double(double, double, double, double, double, int)> adapt =
      [&](double a, double b, double fa, double fb, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double fm = integrand(m);
        const double whole = 0.5 * (b - a) * (fa + fb);
        const double halves = 0.25 * (b - a) * (fa + 2.0 * fm + fb);
        if (depth >= kMaxDepth || std::abs(halves - whole) <= 3.0 * tol) return halves;
        return adapt(a, m, fa, fm, 0.5 * tol, depth + 1) + adapt(m, b, fm, fb, 0.5 * tol, depth + 1);
      };

  // Log-spaced panels so the region near eps_min is resolved.
  constexpr int kPanels = 24;
  double integral = 0.0;
  double prev = eps_min;
  double f_prev = integrand(prev);
  const double f_min = f_prev;
  for (int k = 1; k <= kPanels; ++k) {
    const double next = k == kPanels ? eps_max : eps_min * std::pow(1e6, static_cast<double>(k) / kPanels);
    const double f_next = integrand(next);
    integral += adapt(prev, next, f_prev, f_next, kTol / kPanels, 0);
    prev = next;
    f_prev = f_next;
  }

  std::sort(samples.begin(), samples.end());
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double rise = samples[i].second - samples[i - 1].second;
    if (rise > 1e-9 * std::max(1.0, std::abs(samples[i - 1].second))) {
      std::ostringstream msg;
      msg << "dudley: cover_fn increases between eps = " << samples[i - 1].first << " and "
          << samples[i].first;
      throw Error(msg.str());
    }
  }

  const double sliver = eps_min * f_min;
  BoundReport rep = make_report(BoundKind::Rademacher, "dudley_integral");
  rep.value = c_chain * (integral + sliver);
  rep.parameters["integral"] = integral;
  rep.parameters["sliver"] = sliver;
  rep.parameters["eps_max"] = eps_max;
  rep.parameters["c_chain"] = c_chain;
  return rep;
}

BoundReport generalization_bound(double emp_risk, const BoundReport& rad, double lipschitz, Index n,
                                 double delta, double c_conf) {
  if (rad.kind != BoundKind::Rademacher) throw Error("generalization_bound needs a Rademacher report");
  if (!(delta > 0.0 && delta <= 1.0)) throw Error("generalization_bound: delta must lie in (0, 1]");
  require_positive(lipschitz, "Lipschitz constant");
  if (n < 1) throw Error("generalization_bound: n must be >= 1");
  if (!(c_conf >= 0.0)) throw Error("generalization_bound: c_conf must be nonnegative");
  BoundReport rep = make_report(BoundKind::Generalization, "generalization");
  const double confidence = c_conf * std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
  if (delta == 1.0) rep.flags.push_back("delta = 1: confidence term vanishes");
  rep.value = emp_risk + 4.0 * lipschitz * rad.value + confidence;
  rep.parameters["emp_risk"] = emp_risk;
  rep.parameters["rademacher"] = rad.value;
  rep.parameters["confidence_term"] = confidence;
  rep.parameters["delta"] = delta;
  rep.parameters["lipschitz"] = lipschitz;
  rep.parameters["c_conf"] = c_conf;
  return rep;
}

}  // namespace sideknow
