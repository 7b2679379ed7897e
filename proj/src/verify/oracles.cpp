#include "verify/oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sideknow::verify {

bool oracle_feasible(const ConstraintSet& set, const Vector& beta, double slack) {
  double sq = 0.0;
  for (Index i = 0; i < beta.size(); ++i) sq += beta(i) * beta(i);
  if (std::sqrt(sq) > set.ball_radius + slack) return false;
  for (const auto& h : set.halfspaces) {
    double s = 0.0;
    for (Index i = 0; i < beta.size(); ++i) s += h.normal(i) * beta(i);
    if (s > h.offset + slack) return false;
  }
  for (const auto& e : set.ellipsoids) {
    double s = 0.0;
    for (Index i = 0; i < beta.size(); ++i)
      for (Index j = 0; j < beta.size(); ++j) s += beta(i) * e.matrix(i, j) * beta(j);
    if (s > e.level + slack) return false;
  }
  for (const auto& c : set.cones) {
    double lhs = 0.0;
    for (Index r = 0; r < c.map.rows(); ++r) {
      double row = 0.0;
      for (Index i = 0; i < beta.size(); ++i) row += c.map(r, i) * beta(i);
      lhs += row * row;
    }
    double rhs = c.shift;
    for (Index i = 0; i < beta.size(); ++i) rhs += c.slope(i) * beta(i);
    if (std::sqrt(lhs) > rhs + slack) return false;
  }
  for (const auto& b : set.l1_blocks) {
    double s = 0.0;
    for (Index k = 0; k < b.columns.cols(); ++k) {
      double pred = 0.0;
      for (Index i = 0; i < beta.size(); ++i) pred += b.columns(i, k) * beta(i);
      s += std::abs(pred);
    }
    if (s > b.level + slack) return false;
  }
  return true;
}

namespace {

// Minimizes f over the boundary of a convex planar set, parametrized by the
// angle of a ray from the interior point `center`. The boundary radius comes
// from bisection on membership and always stays on the feasible side.
void boundary_search(const std::function<double(const Vector&)>& f, const ConstraintSet& set,
                     const Vector& center, int zoom_levels, GridOptimum& best) {
  const double reach = 2.0 * set.ball_radius + center.norm();
  auto point_at = [&](double theta) {
    const Vector u = (Vector(2) << std::cos(theta), std::sin(theta)).finished();
    double lo = 0.0;
    double hi = reach;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (oracle_feasible(set, center + mid * u)) lo = mid; else hi = mid;
    }
    return Vector(center + lo * u);
  };
  auto consider = [&](double theta, double& best_theta) {
    const Vector b = point_at(theta);
    const double v = f(b);
    if (v < best.value) {
      best.value = v;
      best.point = b;
      best_theta = theta;
    }
  };
  constexpr int kRays = 20'000;
  double best_theta = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < kRays; ++k) consider(2.0 * std::numbers::pi * k / kRays, best_theta);
  if (std::isnan(best_theta)) return;
  double half = 2.0 * std::numbers::pi / kRays;
  for (int level = 0; level < zoom_levels; ++level) {
    const double mid = best_theta;
    for (int k = 0; k <= 40; ++k) consider(mid - half + k * half / 20.0, best_theta);
    half *= 0.3;
  }
}

}  // namespace

GridOptimum grid_minimize_2d(const std::function<double(const Vector&)>& f, const ConstraintSet& set,
                             int resolution, int zoom_levels) {
  GridOptimum best;
  best.value = std::numeric_limits<double>::infinity();
  const double radius = set.ball_radius;
  const double h = 2.0 * radius / (resolution - 1);
  Vector beta(2);
  Vector centroid = Vector::Zero(2);
  std::size_t feasible = 0;
  for (int i = 0; i < resolution; ++i) {
    beta(0) = -radius + i * h;
    for (int j = 0; j < resolution; ++j) {
      beta(1) = -radius + j * h;
      if (!oracle_feasible(set, beta)) continue;
      centroid += beta;
      ++feasible;
      const double v = f(beta);
      if (v < best.value) {
        best.value = v;
        best.point = beta;
        best.found = true;
      }
    }
  }
  if (!best.found) return best;

  // Pattern refinement: a 41 x 41 window around the incumbent. The window
  // keeps its size while the incumbent keeps landing on its border (the
  // optimum is sliding along a boundary) and shrinks otherwise.
  constexpr int kZoomGrid = 41;
  double half = 2.0 * h;
  int shrinks = 0;
  for (int step_count = 0; step_count < 50 * zoom_levels && shrinks < zoom_levels && half > 1e-15; ++step_count) {
    const Vector center = best.point;
    const double step = 2.0 * half / (kZoomGrid - 1);
    int bi = kZoomGrid / 2;
    int bj = kZoomGrid / 2;
    for (int i = 0; i < kZoomGrid; ++i) {
      beta(0) = center(0) - half + i * step;
      for (int j = 0; j < kZoomGrid; ++j) {
        beta(1) = center(1) - half + j * step;
        if (!oracle_feasible(set, beta)) continue;
        const double v = f(beta);
        if (v < best.value) {
          best.value = v;
          best.point = beta;
          bi = i;
          bj = j;
        }
      }
    }
    const bool on_border = bi == 0 || bj == 0 || bi == kZoomGrid - 1 || bj == kZoomGrid - 1;
    if (!on_border) {
      half *= 0.3;
      ++shrinks;
    }
  }
  // Optima at corners of thin feasible wedges are reached from the boundary.
  if (feasible > 0) boundary_search(f, set, centroid / static_cast<double>(feasible), zoom_levels, best);
  return best;
}

GridOptimum grid_sup_linear_2d(const Vector& g, const ConstraintSet& set) {
  GridOptimum out = grid_minimize_2d([&](const Vector& b) { return -(g(0) * b(0) + g(1) * b(1)); }, set);
  out.value = -out.value;
  return out;
}

double mc_cap_alpha_2d(const Vector& a, double eps, double ball_radius, double feature_bound,
                       std::size_t samples, Rng& rng) {
  const double slack = eps / (2.0 * feature_bound);
  const double r = ball_radius + slack;
  const double an = std::hypot(a(0), a(1));
  const double height = 1.0 / an + slack;
  std::size_t inside = 0;
  std::size_t kept = 0;
  while (kept < samples) {
    const double x = rng.uniform(-r, r);
    const double y = rng.uniform(-r, r);
    if (x * x + y * y > r * r) continue;
    ++kept;
    if ((a(0) * x + a(1) * y) / an < height) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(samples);
}

std::size_t greedy_packing(const std::vector<Vector>& points, double separation) {
  std::vector<const Vector*> centers;
  for (const auto& pt : points) {
    bool far = true;
    for (const Vector* c : centers) {
      if ((pt - *c).norm() <= separation) {
        far = false;
        break;
      }
    }
    if (far) centers.push_back(&pt);
  }
  return centers.size();
}

namespace {

template <typename Visit>
void walk_box(int p, int K, std::vector<int>& k, int j, Visit&& visit) {
  if (j == p) {
    visit(k);
    return;
  }
  for (int v = -K; v <= K; ++v) {
    k[static_cast<std::size_t>(j)] = v;
    walk_box(p, K, k, j + 1, visit);
  }
}

}  // namespace

std::uint64_t box_lattice_count(int p, int K) {
  std::vector<int> k(static_cast<std::size_t>(p));
  std::uint64_t count = 0;
  walk_box(p, K, k, 0, [&](const std::vector<int>& pt) {
    int s = 0;
    for (int v : pt) s += std::abs(v);
    if (s <= K) ++count;
  });
  return count;
}

std::uint64_t box_constrained_lattice_count(const Matrix& coeffs, int K) {
  const int p = static_cast<int>(coeffs.cols());
  std::vector<int> k(static_cast<std::size_t>(p));
  std::uint64_t count = 0;
  walk_box(p, K, k, 0, [&](const std::vector<int>& pt) {
    int s = 0;
    for (int v : pt) s += std::abs(v);
    if (s > K) return;
    for (Index r = 0; r < coeffs.rows(); ++r) {
      double dot = 0.0;
      for (int j = 0; j < p; ++j) dot += coeffs(r, j) * pt[static_cast<std::size_t>(j)];
      if (dot > K + 1e-9) return;
    }
    ++count;
  });
  return count;
}

double dense_grid_argmin(const std::function<double(double)>& f, int points) {
  double best_x = 0.0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / (points - 1);
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

double explicit_trace(const Matrix& a, const Matrix& x) {
  const Matrix inv = a.inverse();
  return (x.transpose() * inv * x).trace();
}

double log_det_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    if (eig.eigenvalues()(i) <= 0.0) return -std::numeric_limits<double>::infinity();
    s += std::log(eig.eigenvalues()(i));
  }
  return s;
}

Matrix random_spd(Index p, double lo, double hi, Rng& rng) {
  Matrix g(p, p);
  for (Index j = 0; j < p; ++j) g.col(j) = rng.normal_vector(p);
  const Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  Vector lam(p);
  for (Index i = 0; i < p; ++i) lam(i) = std::exp(rng.uniform(std::log(lo), std::log(hi)));
  Matrix a = q * lam.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

Matrix random_features(Index p, Index n, Rng& rng) {
  Matrix x(p, n);
  for (Index j = 0; j < n; ++j) x.col(j) = rng.uniform(0.5, 1.0) * rng.unit_vector(p);
  return x;
}

}  // namespace sideknow::verify
