#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace sideknow::detail {

struct ScalarMin {
  double x;
  double value;
};

/// Golden-section search for a minimum of f on [lo, hi].
template <typename F>
ScalarMin golden_section(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 500) {
  constexpr double inv_phi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? ScalarMin{c, fc} : ScalarMin{d, fd};
}

/// Minimizes f on [0, 1]: scan `grid` equally spaced points, then refine by
/// golden section inside the bracket around the best grid point. Ties keep
/// the smallest argument; the refined point replaces it only on strict
/// improvement. Returns value +inf when f is +inf on the whole grid.
template <typename F>
ScalarMin grid_golden_unit(F&& f, int grid = 64, double tol = 1e-12) {
  const double h = 1.0 / (grid - 1);
  ScalarMin best{0.0, std::numeric_limits<double>::infinity()};
  int best_k = -1;
  for (int k = 0; k < grid; ++k) {
    const double x = k * h;
    const double v = f(x);
    if (v < best.value) {
      best = {x, v};
      best_k = k;
    }
  }
  if (best_k < 0) return best;
  const double lo = std::max(0.0, (best_k - 1) * h);
  const double hi = std::min(1.0, (best_k + 1) * h);
  const ScalarMin refined = golden_section(f, lo, hi, tol);
  const double slack = 1e-14 * std::max(1.0, std::abs(best.value));
  if (refined.value < best.value - slack) return refined;
  return best;
}

}  // namespace sideknow::detail
