#include "sideknow/geometry.hpp"

#include "sideknow/detail/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sideknow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_square(const EllipsoidConstraint& e, Index p, const char* what) {
  if (e.matrix.rows() != p || e.matrix.cols() != p) {
    throw Error(std::string(what) + ": ellipsoid matrices must share the same square shape");
  }
}

// Cholesky factor of a symmetric matrix that is positive definite with a
// pivot margin relative to its scale; std::nullopt otherwise.
std::optional<Eigen::LLT<Matrix>> definite_factor(const Matrix& a) {
  Eigen::LLT<Matrix> llt(0.5 * (a + a.transpose()));
  if (llt.info() != Eigen::Success) return std::nullopt;
  const double scale = std::max(a.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  const Vector pivots = Matrix(llt.matrixL()).diagonal();
  if (pivots.minCoeff() <= std::sqrt(kTolerances.psd * scale)) return std::nullopt;
  return llt;
}

}  // namespace

EllipsoidConstraint kahan_combine(const EllipsoidConstraint& e1, const EllipsoidConstraint& e2,
                                  double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error("combination weight gamma must lie in [0, 1]");
  require_square(e2, e1.matrix.rows(), "kahan_combine");
  const auto a1 = e1.normalized();
  const auto a2 = e2.normalized();
  return EllipsoidConstraint{gamma * a1.matrix + (1.0 - gamma) * a2.matrix, 1.0};
}

double trace_objective(const Matrix& a, const Matrix& x) {
  const auto llt = definite_factor(a);
  if (!llt) return kInf;
  const Matrix y = llt->matrixL().solve(x);
  return y.squaredNorm();
}

GammaChoice trace_min_gamma(const EllipsoidConstraint& e1, const EllipsoidConstraint& e2,
                            const Matrix& x) {
  require_square(e2, e1.matrix.rows(), "trace_min_gamma");
  if (x.rows() != e1.matrix.rows()) throw Error("trace_min_gamma: data dimension mismatch");
  const Matrix a1 = e1.normalized().matrix;
  const Matrix a2 = e2.normalized().matrix;
  auto objective = [&](double g) { return trace_objective(g * a1 + (1.0 - g) * a2, x); };
  const auto best = detail::grid_golden_unit(objective, 64, 1e-12);
  if (!std::isfinite(best.value)) {
    throw Error("trace_min_gamma: combined matrix is singular at every grid point");
  }
  return GammaChoice{best.x, best.value};
}

VolumeChoice volume_min_gamma(const EllipsoidConstraint& e1, const EllipsoidConstraint& e2) {
  require_square(e2, e1.matrix.rows(), "volume_min_gamma");
  const Matrix a1 = e1.normalized().matrix;
  const Matrix a2 = e2.normalized().matrix;

  bool first_definite = true;
  auto llt = definite_factor(a1);
  if (!llt) {
    llt = definite_factor(a2);
    first_definite = false;
  }
  if (!llt) throw Error("volume_min_gamma: neither matrix is positive definite");

  const Matrix& definite = first_definite ? a1 : a2;
  const Matrix& other = first_definite ? a2 : a1;
  // M = L^{-1} other L^{-T}; eigenvectors V give C = L^{-T} V.
  const Matrix linv_other = llt->matrixL().solve(other);
  Matrix m = llt->matrixL().solve(linv_other.transpose());
  m = (0.5 * (m + m.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const Matrix c = llt->matrixU().solve(eig.eigenvectors());

  VolumeChoice out;
  out.congruence = c;
  const Vector d_def = (c.transpose() * definite * c).diagonal();
  const Vector d_oth = (c.transpose() * other * c).diagonal();
  out.diag1 = first_definite ? d_def : d_oth;
  out.diag2 = first_definite ? d_oth : d_def;

  const Vector& p1 = out.diag1;
  const Vector& p2 = out.diag2;
  const Vector diff = p1 - p2;
  const double scale = std::max(p1.cwiseAbs().maxCoeff(), p2.cwiseAbs().maxCoeff());
  if (diff.cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    out.gamma = 0.0;
    return out;
  }

  // Derivative of sum log(g p1 + (1-g) p2); +inf where a denominator vanishes.
  auto slope = [&](double g) {
    double s = 0.0;
    for (Index i = 0; i < p1.size(); ++i) {
      const double den = g * p1(i) + (1.0 - g) * p2(i);
      if (den <= 0.0) {
        if (diff(i) > 0.0) return kInf;
        if (diff(i) < 0.0) return -kInf;
        continue;
      }
      s += diff(i) / den;
    }
    return s;
  };
  auto curvature = [&](double g) {
    double s = 0.0;
    for (Index i = 0; i < p1.size(); ++i) {
      const double den = g * p1(i) + (1.0 - g) * p2(i);
      s -= diff(i) * diff(i) / (den * den);
    }
    return s;
  };

  if (slope(0.0) <= 0.0) {
    out.gamma = 0.0;
    return out;
  }
  if (slope(1.0) >= 0.0) {
    out.gamma = 1.0;
    return out;
  }
  double lo = 0.0;
  double hi = 1.0;
  double g = 0.5;
  for (int it = 0; it < 200 && hi - lo > kTolerances.root * 1e-2; ++it) {
    const double s = slope(g);
    if (s > 0.0) {
      lo = g;
    } else if (s < 0.0) {
      hi = g;
    } else {
      lo = hi = g;
      break;
    }
    const double curv = curvature(g);
    double next = (std::isfinite(s) && curv < 0.0) ? g - s / curv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - g) < kTolerances.root * 1e-2) {
      g = next;
      break;
    }
    g = next;
  }
  out.gamma = std::clamp(g, 0.0, 1.0);
  return out;
}

Vector project_simplex(const Vector& v) {
  const Index k = v.size();
  std::vector<double> sorted(v.data(), v.data() + k);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (Index i = 0; i < k; ++i) {
    cum += sorted[static_cast<std::size_t>(i)];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (sorted[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

namespace {

struct SimplexEval {
  double value = kInf;
  Vector grad;
};

SimplexEval simplex_eval(const std::vector<Matrix>& mats, const Vector& gamma, const Matrix& x) {
  Matrix a = Matrix::Zero(x.rows(), x.rows());
  for (std::size_t k = 0; k < mats.size(); ++k) a += gamma(static_cast<Index>(k)) * mats[k];
  SimplexEval out;
  const auto llt = definite_factor(a);
  if (!llt) return out;
  const Matrix y = llt->solve(x);
  out.value = (x.transpose() * y).trace();
  out.grad.resize(static_cast<Index>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) {
    out.grad(static_cast<Index>(k)) = -(y.transpose() * mats[k] * y).trace();
  }
  return out;
}

SimplexChoice descend(const std::vector<Matrix>& mats, Vector gamma, const Matrix& x) {
  SimplexEval cur = simplex_eval(mats, gamma, x);
  if (!std::isfinite(cur.value)) return {gamma, kInf};
  double step = 1.0 / std::max(cur.grad.norm(), 1e-300);
  for (int it = 0; it < 5000; ++it) {
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Vector cand = project_simplex(gamma - step * cur.grad);
      const Vector delta = cand - gamma;
      const SimplexEval next = simplex_eval(mats, cand, x);
      if (std::isfinite(next.value) &&
          next.value <= cur.value + cur.grad.dot(delta) + delta.squaredNorm() / (2.0 * step)) {
        const double moved = delta.norm();
        gamma = cand;
        cur = next;
        accepted = true;
        step *= 2.0;
        if (moved < 1e-13) return {gamma, cur.value};
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return {gamma, cur.value};
}

}  // namespace

SimplexChoice simplex_trace_min(const std::vector<EllipsoidConstraint>& ellipsoids, const Matrix& x,
                                std::uint64_t seed, int restarts) {
  if (ellipsoids.empty()) throw Error("simplex_trace_min: need at least one ellipsoid");
  const Index p = ellipsoids.front().matrix.rows();
  if (x.rows() != p) throw Error("simplex_trace_min: data dimension mismatch");
  std::vector<Matrix> mats;
  for (const auto& e : ellipsoids) {
    require_square(e, p, "simplex_trace_min");
    mats.push_back(e.normalized().matrix);
  }
  const auto k = static_cast<Index>(mats.size());
  if (k == 1) {
    const double v = trace_objective(mats.front(), x);
    if (!std::isfinite(v)) throw Error("simplex_trace_min: the only matrix is singular");
    return {Vector::Ones(1), v};
  }

  SimplexChoice best{Vector::Constant(k, 1.0 / static_cast<double>(k)), kInf};
  auto consider = [&](const Vector& start) {
    const SimplexChoice c = descend(mats, start, x);
    if (c.value < best.value) best = c;
  };
  consider(Vector::Constant(k, 1.0 / static_cast<double>(k)));
  Rng rng(seed, "simplex_trace_min");
  for (int r = 0; r < restarts; ++r) {
    Vector start(k);
    for (Index i = 0; i < k; ++i) start(i) = -std::log(1.0 - rng.uniform());
    consider(start / start.sum());
  }
  if (!std::isfinite(best.value)) {
    throw Error("simplex_trace_min: every explored combination is singular");
  }
  return best;
}

Vector project_ball(const Vector& z, double radius) {
  const double n = z.norm();
  if (n <= radius) return z;
  return (radius / n) * z;
}

Vector project_halfspace(const Vector& z, const HalfSpace& h) {
  const double excess = h.normal.dot(z) - h.offset;
  if (excess <= 0.0) return z;
  const double nn = h.normal.squaredNorm();
  if (nn == 0.0) return z;
  return z - (excess / nn) * h.normal;
}

ConePoint project_soc(const ConePoint& point) {
  const double nu = point.u.norm();
  if (nu <= point.t) return point;
  if (nu <= -point.t) return ConePoint{Vector::Zero(point.u.size()), 0.0};
  const double scale = 0.5 * (nu + point.t);
  return ConePoint{(scale / nu) * point.u, scale};
}

Vector project_l1_ball(const Vector& v, double radius) {
  if (radius <= 0.0) return Vector::Zero(v.size());
  const Vector mag = v.cwiseAbs();
  if (mag.sum() <= radius) return v;
  std::vector<double> sorted(mag.data(), mag.data() + mag.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cum += sorted[i];
    const double t = (cum - radius) / static_cast<double>(i + 1);
    if (sorted[i] > t) theta = t;
  }
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double shrunk = std::max(mag(i) - theta, 0.0);
    out(i) = v(i) < 0.0 ? -shrunk : shrunk;
  }
  return out;
}

Vector project_ellipsoid(const Vector& z, const EllipsoidConstraint& e) {
  const Matrix sym = 0.5 * (e.matrix + e.matrix.transpose());
  if (z.dot(sym * z) <= e.level) return z;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector lam_raw = eig.eigenvalues();
  const double cutoff = kTolerances.psd * std::max(1.0, lam_raw.cwiseAbs().maxCoeff());
  const Vector lam = lam_raw.unaryExpr([&](double l) { return l > cutoff ? l : 0.0; });
  const Vector y = eig.eigenvectors().transpose() * z;

  Vector out = y;
  if (e.level <= 0.0) {
    for (Index i = 0; i < y.size(); ++i)
      if (lam(i) > 0.0) out(i) = 0.0;
    return eig.eigenvectors() * out;
  }

  // h(mu) = sum lam y^2 / (1 + mu lam)^2 is decreasing; find h(mu) = c.
  auto h = [&](double mu) {
    double s = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
      const double d = 1.0 + mu * lam(i);
      s += lam(i) * y(i) * y(i) / (d * d);
    }
    return s;
  };
  auto dh = [&](double mu) {
    double s = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
      const double d = 1.0 + mu * lam(i);
      s -= 2.0 * lam(i) * lam(i) * y(i) * y(i) / (d * d * d);
    }
    return s;
  };
  const double c = e.level;
  double bound = 0.0;
  for (Index i = 0; i < y.size(); ++i)
    if (lam(i) > 0.0) bound += y(i) * y(i) / lam(i);
  double lo = 0.0;
  double hi = std::sqrt(bound / c) * (1.0 + 1e-12) + 1e-300;
  double mu = 0.0;
  for (int it = 0; it < 500; ++it) {
    const double f = h(mu) - c;
    if (std::abs(f) <= kTolerances.root * c) break;
    if (f > 0.0) {
      lo = mu;
    } else {
      hi = mu;
    }
    double next = mu - f / dh(mu);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    mu = next;
  }
  // Newton from mu = 0 approaches the root from below; a last step toward the
  // bracket's upper end settles on the feasible side without leaving the
  // root's neighbourhood.
  if (h(mu) > c) {
    const double nudged = mu + 2.0 * (h(mu) - c) / std::max(-dh(mu), 1e-300);
    if (nudged < hi) mu = nudged;
  }
  for (Index i = 0; i < y.size(); ++i) out(i) = y(i) / (1.0 + mu * lam(i));
  return eig.eigenvectors() * out;
}

IntersectionSample sample_intersection(const EllipsoidConstraint& e1, const EllipsoidConstraint& e2,
                                       std::size_t count, Rng& rng) {
  const Index p = e1.matrix.rows();
  require_square(e2, p, "sample_intersection");
  const Matrix a1 = e1.normalized().matrix;
  const Matrix a2 = e2.normalized().matrix;

  Vector width = Vector::Constant(p, kInf);
  bool bounded = false;
  for (const Matrix* a : {&a1, &a2}) {
    const auto llt = definite_factor(*a);
    if (!llt) continue;
    const Matrix inv = llt->solve(Matrix::Identity(p, p));
    width = width.cwiseMin(inv.diagonal().cwiseSqrt());
    bounded = true;
  }
  if (!bounded) throw Error("sample_intersection: one of the matrices must be positive definite");

  IntersectionSample out;
  out.half_widths = width;
  out.points.reserve(count);
  constexpr std::size_t kCheckEvery = 1'000'000;
  Vector beta(p);
  while (out.points.size() < count) {
    for (Index i = 0; i < p; ++i) beta(i) = rng.uniform(-width(i), width(i));
    ++out.attempts;
    if (beta.dot(a1 * beta) <= 1.0 && beta.dot(a2 * beta) <= 1.0) out.points.push_back(beta);
    if (out.attempts % kCheckEvery == 0 && out.acceptance_rate() < 1e-6) {
      std::ostringstream msg;
      msg << "sample_intersection: acceptance rate " << out.acceptance_rate() << " after "
          << out.attempts << " attempts is below 1e-6 (accepted " << out.points.size() << ")";
      throw Error(msg.str());
    }
  }
  return out;
}

}  // namespace sideknow
