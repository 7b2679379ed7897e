#pragma once

#include "sideknow/types.hpp"

#include <variant>

namespace sideknow {

/// Ordered pair of knowledge-sample indices with bound c.
struct PairSpec {
  Index i = 0;
  Index j = 0;
  double c = 0.0;
};

struct GraphEdge {
  Index i = 0;
  Index j = 0;
  double weight = 1.0;
};

struct GraphSpec {
  Index node_count = 0;
  std::vector<GraphEdge> edges;
};

/// f(x_i) <= f(x_j) + c for every pair: one halfspace (x_i - x_j)^T beta <= c.
/// A pair with i == j gives a zero normal; c < 0 is then rejected.
std::vector<HalfSpace> compile_poset(const UnlabeledSet& u, const std::vector<PairSpec>& pairs);

/// |f(x_i) - f(x_j)| <= c as two opposing halfspaces. Requires c >= 0.
std::vector<HalfSpace> compile_must_link(const UnlabeledSet& u, const std::vector<PairSpec>& pairs);

using SparsityConstraint = std::variant<L1PredictionBlock, std::vector<HalfSpace>>;

/// ||(beta^T x_i)_{i in I}||_1 <= c_I. With expand=true the block is written as
/// 2^|I| halfspaces (one per sign pattern), limited to |I| <= 12.
SparsityConstraint compile_sparsity_l1(const UnlabeledSet& u, const std::vector<Index>& index_set,
                                       double level, bool expand);

inline constexpr std::size_t kMaxExpandedL1 = 12;

/// ||(beta^T x_i)_{i in I}||_inf <= c_I as 2|I| halfspaces.
std::vector<HalfSpace> compile_linf_box(const UnlabeledSet& u, const std::vector<Index>& index_set,
                                        double level);

enum class PairwiseMode { MustLink, Product };

/// Quadratic pair constraints:
///   must_link: (f(x_i) - f(x_j))^2 <= c, matrix (x_i - x_j)(x_i - x_j)^T;
///   product:   f(x_i) f(x_j) <= c, matrix (x_i x_j^T + x_j x_i^T) / 2, which
///              must be positive semidefinite or the pair is rejected.
std::vector<EllipsoidConstraint> compile_quadratic_pairwise(const UnlabeledSet& u,
                                                            const std::vector<PairSpec>& pairs,
                                                            PairwiseMode mode);

/// Linear operator applied to the knowledge-sample predictions.
struct GammaOperator {
  enum class Kind { Identity, FirstDifference, Custom };
  Kind kind = Kind::Identity;
  Matrix custom;  // rows x m, used when kind == Custom

  static GammaOperator identity() { return {}; }
  static GammaOperator first_difference() { return {Kind::FirstDifference, {}}; }
  static GammaOperator from_matrix(Matrix g) { return {Kind::Custom, std::move(g)}; }

  /// Dense operator for m predictions.
  Matrix materialize(Index m) const;
};

/// ||Gamma X_U^T beta||^2 <= c, i.e. matrix X_U Gamma^T Gamma X_U^T.
EllipsoidConstraint compile_quadratic_form(const UnlabeledSet& u, const GammaOperator& gamma,
                                           double level);

/// Graph Laplacian L = D - A of an undirected weighted graph (edges listed once).
Matrix graph_laplacian(const GraphSpec& g);

/// beta^T X_U L X_U^T beta <= c.
EllipsoidConstraint compile_graph_laplacian(const UnlabeledSet& u, const GraphSpec& g, double level);

/// Complete graph with weights exp(-scale * ||x_i - x_j||_q).
GraphSpec gaussian_edge_weights(const UnlabeledSet& u, double scale, double q);

/// a_bar^T beta + ||spread^T beta|| <= 1 for every a in {a_bar + spread u : ||u|| <= 1}.
SOConstraint compile_robust_soc(const Vector& mean, const Matrix& spread);

/// P(a^T beta <= 1) >= eta for a ~ N(mean, covariance), eta in (1/2, 1).
SOConstraint compile_chance_soc(const Vector& mean, const Matrix& covariance, double eta);

/// Symmetric PSD square root (negative eigenvalues within tolerance clipped).
Matrix psd_sqrt(const Matrix& a);

}  // namespace sideknow
