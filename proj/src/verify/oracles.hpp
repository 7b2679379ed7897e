#pragma once

// Brute-force reference computations. None of these call the solvers or the
// bound formulas they are used to check.

#include "sideknow/rng.hpp"
#include "sideknow/types.hpp"

#include <cstdint>
#include <functional>

namespace sideknow::verify {

/// Direct membership test with absolute slack, written out constraint by
/// constraint (no shared code with ConstraintSet::max_violation).
bool oracle_feasible(const ConstraintSet& set, const Vector& beta, double slack = 0.0);

struct GridOptimum {
  double value = 0.0;
  Vector point;
  bool found = false;
};

/// Minimizes f over the feasible part of [-B, B]^2 by a dense grid
/// (`resolution`^2 points) followed by a shrinking pattern search around the
/// incumbent (`zoom_levels` shrinks).
GridOptimum grid_minimize_2d(const std::function<double(const Vector&)>& f, const ConstraintSet& set,
                             int resolution = 1001, int zoom_levels = 40);

/// sup_{beta in set} g^T beta for p = 2 via `grid_minimize_2d`.
GridOptimum grid_sup_linear_2d(const Vector& g, const ConstraintSet& set);

/// Fraction of the disk of radius r = B + eps/(2 X_b) lying below the line at
/// distance 1/||a|| + eps/(2 X_b) along a, by uniform sampling.
double mc_cap_alpha_2d(const Vector& a, double eps, double ball_radius, double feature_bound,
                       std::size_t samples, Rng& rng);

/// Size of a greedy set of points with pairwise distances > separation.
std::size_t greedy_packing(const std::vector<Vector>& points, double separation);

/// Counts k in [-K, K]^p with sum |k_j| <= K by walking the whole box.
std::uint64_t box_lattice_count(int p, int K);

/// Counts box points with sum |k_j| <= K and coeffs * k <= K row-wise.
std::uint64_t box_constrained_lattice_count(const Matrix& coeffs, int K);

/// Index of the smallest value of f on the grid {i / (points - 1)}; first
/// index wins ties.
double dense_grid_argmin(const std::function<double(double)>& f, int points);

/// trace(X^T A^{-1} X) through an explicit inverse.
double explicit_trace(const Matrix& a, const Matrix& x);

/// Sum of logs of the eigenvalues of a symmetric matrix (-inf if singular).
double log_det_eig(const Matrix& a);

/// Random symmetric positive-definite matrix with eigenvalues drawn
/// log-uniformly from [lo, hi].
Matrix random_spd(Index p, double lo, double hi, Rng& rng);

/// p x n matrix whose columns are uniform on the unit sphere scaled by a
/// uniform radius in [0.5, 1].
Matrix random_features(Index p, Index n, Rng& rng);

}  // namespace sideknow::verify
