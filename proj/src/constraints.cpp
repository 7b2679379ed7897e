#include "sideknow/constraints.hpp"

#include "sideknow/normal.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace sideknow {

namespace {

void check_index(const UnlabeledSet& u, Index i) {
  if (i < 0 || i >= u.size()) {
    throw Error("knowledge index " + std::to_string(i) + " out of range [0, " +
                std::to_string(u.size()) + ")");
  }
}

Vector difference(const UnlabeledSet& u, const PairSpec& pair) {
  check_index(u, pair.i);
  check_index(u, pair.j);
  return u.features.col(pair.i) - u.features.col(pair.j);
}

void check_index_set(const UnlabeledSet& u, const std::vector<Index>& index_set) {
  if (index_set.empty()) throw Error("index set must not be empty");
  for (Index i : index_set) check_index(u, i);
}

}  // namespace

std::vector<HalfSpace> compile_poset(const UnlabeledSet& u, const std::vector<PairSpec>& pairs) {
  std::vector<HalfSpace> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    HalfSpace h{difference(u, pair), pair.c, std::nullopt};
    if (h.normal.isZero(0.0) && pair.c < 0.0) {
      throw Error("poset pair (" + std::to_string(pair.i) + ", " + std::to_string(pair.j) +
                  ") has identical points and negative bound: infeasible");
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<HalfSpace> compile_must_link(const UnlabeledSet& u, const std::vector<PairSpec>& pairs) {
  std::vector<HalfSpace> out;
  out.reserve(2 * pairs.size());
  for (const auto& pair : pairs) {
    if (pair.c < 0.0) throw Error("must-link bound must be nonnegative");
    const Vector w = difference(u, pair);
    out.push_back(HalfSpace{w, pair.c, std::nullopt});
    out.push_back(HalfSpace{-w, pair.c, std::nullopt});
  }
  return out;
}

SparsityConstraint compile_sparsity_l1(const UnlabeledSet& u, const std::vector<Index>& index_set,
                                       double level, bool expand) {
  check_index_set(u, index_set);
  if (!(level > 0.0)) throw Error("sparsity level must be positive");
  const auto k = index_set.size();
  Matrix cols(u.dim(), static_cast<Index>(k));
  for (std::size_t t = 0; t < k; ++t) cols.col(static_cast<Index>(t)) = u.features.col(index_set[t]);

  if (!expand) return L1PredictionBlock{index_set, std::move(cols), level};

  if (k > kMaxExpandedL1) {
    throw Error("expanding an l1 block over " + std::to_string(k) + " points needs 2^" +
                std::to_string(k) + " halfspaces (limit |I| <= 12)");
  }
  std::vector<HalfSpace> out;
  out.reserve(std::size_t{1} << k);
  for (std::size_t pattern = 0; pattern < (std::size_t{1} << k); ++pattern) {
    Vector w = Vector::Zero(u.dim());
    for (std::size_t t = 0; t < k; ++t) {
      const double sign = (pattern >> t) & 1U ? -1.0 : 1.0;
      w += sign * cols.col(static_cast<Index>(t));
    }
    out.push_back(HalfSpace{std::move(w), level, std::nullopt});
  }
  return out;
}

std::vector<HalfSpace> compile_linf_box(const UnlabeledSet& u, const std::vector<Index>& index_set,
                                        double level) {
  check_index_set(u, index_set);
  if (level < 0.0) throw Error("box level must be nonnegative");
  std::vector<HalfSpace> out;
  out.reserve(2 * index_set.size());
  for (Index i : index_set) {
    const Vector x = u.features.col(i);
    out.push_back(HalfSpace{x, level, std::nullopt});
    out.push_back(HalfSpace{-x, level, std::nullopt});
  }
  return out;
}

std::vector<EllipsoidConstraint> compile_quadratic_pairwise(const UnlabeledSet& u,
                                                            const std::vector<PairSpec>& pairs,
                                                            PairwiseMode mode) {
  std::vector<EllipsoidConstraint> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    if (mode == PairwiseMode::MustLink) {
      if (!(pair.c > 0.0)) throw Error("quadratic must-link bound must be positive");
      const Vector d = difference(u, pair);
      out.push_back(EllipsoidConstraint{d * d.transpose(), pair.c});
      continue;
    }
    check_index(u, pair.i);
    check_index(u, pair.j);
    const Vector xi = u.features.col(pair.i);
    const Vector xj = u.features.col(pair.j);
    const Matrix sym = 0.5 * (xi * xj.transpose() + xj * xi.transpose());
    const double lam = min_eigenvalue(sym);
    const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
    if (lam < -kTolerances.psd * scale) {
      std::ostringstream msg;
      msg << "product constraint on pair (" << pair.i << ", " << pair.j
          << ") is not ellipsoidal: symmetrized matrix has eigenvalue " << lam
          << "; the symmetrized product matrix must be positive semidefinite";
      throw Error(msg.str());
    }
    out.push_back(EllipsoidConstraint{sym, pair.c});
  }
  return out;
}

Matrix GammaOperator::materialize(Index m) const {
  switch (kind) {
    case Kind::Identity: return Matrix::Identity(m, m);
    case Kind::FirstDifference: {
      Matrix g = Matrix::Zero(std::max<Index>(m - 1, 0), m);
      for (Index i = 0; i + 1 < m; ++i) {
        g(i, i) = 1.0;
        g(i, i + 1) = -1.0;
      }
      return g;
    }
    case Kind::Custom:
      if (custom.cols() != m) {
        throw Error("custom Gamma has " + std::to_string(custom.cols()) + " columns, expected " +
                    std::to_string(m));
      }
      return custom;
  }
  return {};
}

EllipsoidConstraint compile_quadratic_form(const UnlabeledSet& u, const GammaOperator& gamma,
                                           double level) {
  if (!(level > 0.0)) throw Error("quadratic form level must be positive");
  const Matrix g = gamma.materialize(u.size());
  const Matrix gx = g * u.features.transpose();  // rows x p
  Matrix a = gx.transpose() * gx;
  a = (0.5 * (a + a.transpose())).eval();
  return EllipsoidConstraint{std::move(a), level};
}

Matrix graph_laplacian(const GraphSpec& g) {
  Matrix adj = Matrix::Zero(g.node_count, g.node_count);
  for (const auto& e : g.edges) {
    if (e.i < 0 || e.j < 0 || e.i >= g.node_count || e.j >= g.node_count) {
      throw Error("graph edge index out of range");
    }
    if (e.i == e.j) throw Error("graph self-loops are not allowed");
    if (!(e.weight >= 0.0)) throw Error("graph edge weights must be nonnegative");
    adj(e.i, e.j) += e.weight;
    adj(e.j, e.i) += e.weight;
  }
  Matrix lap = -adj;
  lap.diagonal() += adj.rowwise().sum();
  return lap;
}

EllipsoidConstraint compile_graph_laplacian(const UnlabeledSet& u, const GraphSpec& g, double level) {
  if (!(level > 0.0)) throw Error("graph constraint level must be positive");
  if (g.node_count != u.size()) {
    throw Error("graph has " + std::to_string(g.node_count) + " nodes but the knowledge sample has " +
                std::to_string(u.size()) + " points");
  }
  Matrix a = u.features * graph_laplacian(g) * u.features.transpose();
  a = (0.5 * (a + a.transpose())).eval();
  return EllipsoidConstraint{std::move(a), level};
}

GraphSpec gaussian_edge_weights(const UnlabeledSet& u, double scale, double q) {
  if (!(q >= 1.0)) throw Error("edge-weight norm order must be >= 1");
  GraphSpec g;
  g.node_count = u.size();
  for (Index i = 0; i < u.size(); ++i) {
    for (Index j = i + 1; j < u.size(); ++j) {
      const Vector d = u.features.col(i) - u.features.col(j);
      const double dist = std::isinf(q) ? d.lpNorm<Eigen::Infinity>()
                                        : std::pow(d.cwiseAbs().array().pow(q).sum(), 1.0 / q);
      g.edges.push_back(GraphEdge{i, j, std::exp(-scale * dist)});
    }
  }
  return g;
}

SOConstraint compile_robust_soc(const Vector& mean, const Matrix& spread) {
  if (spread.rows() != mean.size()) {
    throw Error("robust constraint: spread has " + std::to_string(spread.rows()) +
                " rows, mean has length " + std::to_string(mean.size()));
  }
  return SOConstraint{spread.transpose(), -mean, 1.0};
}

Matrix psd_sqrt(const Matrix& a) {
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues()(0) < -kTolerances.psd * scale) throw Error("matrix is not positive semidefinite");
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

SOConstraint compile_chance_soc(const Vector& mean, const Matrix& covariance, double eta) {
  if (!(eta > 0.5 && eta < 1.0)) {
    throw Error("chance constraint needs eta in (0.5, 1): for eta <= 0.5 the quantile is "
                "nonpositive and the constraint is no longer a convex cone");
  }
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
    throw Error("chance constraint: covariance must be square with the mean's dimension");
  }
  const double z = inverse_normal_cdf(eta);
  return SOConstraint{z * psd_sqrt(covariance), -mean, 1.0};
}

}  // namespace sideknow
