#include "sideknow/types.hpp"

#include <cmath>
#include <sstream>

namespace sideknow {

LabeledDataset LabeledDataset::make(Matrix features, Vector labels,
                                    std::optional<double> feature_bound) {
  if (features.rows() < 1) throw Error("dataset needs at least one feature");
  if (features.cols() < 1) throw Error("dataset needs at least one example");
  if (labels.size() != features.cols()) {
    throw Error("label count " + std::to_string(labels.size()) + " does not match " +
                std::to_string(features.cols()) + " examples");
  }
  if (!features.allFinite() || !labels.allFinite()) throw Error("dataset contains non-finite values");

  const double max_norm = features.colwise().norm().maxCoeff();
  double bound = max_norm;
  if (feature_bound) {
    if (!(*feature_bound >= 0.0)) throw Error("feature bound must be nonnegative");
    if (max_norm > *feature_bound * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "column norm " << max_norm << " exceeds feature bound " << *feature_bound;
      throw Error(msg.str());
    }
    bound = *feature_bound;
  }
  return LabeledDataset{std::move(features), std::move(labels), bound};
}

LabeledDataset LabeledDataset::subset(const std::vector<Index>& columns) const {
  Matrix x(dim(), static_cast<Index>(columns.size()));
  Vector y(static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    x.col(static_cast<Index>(k)) = features.col(columns[k]);
    y(static_cast<Index>(k)) = labels(columns[k]);
  }
  return LabeledDataset{std::move(x), std::move(y), feature_bound};
}

UnlabeledSet UnlabeledSet::make(Matrix features, std::optional<Vector> labels) {
  if (features.rows() < 1 || features.cols() < 1) throw Error("unlabeled set must be non-empty");
  if (labels && labels->size() != features.cols()) {
    throw Error("knowledge label count does not match unlabeled examples");
  }
  return UnlabeledSet{std::move(features), std::move(labels)};
}

bool HalfSpace::trivially_true() const { return normal.isZero(0.0) && offset >= 0.0; }

EllipsoidConstraint EllipsoidConstraint::normalized() const {
  if (!(level > 0.0)) throw Error("ellipsoid level must be positive to normalize");
  return EllipsoidConstraint{matrix / level, 1.0};
}

double ConstraintSet::max_violation(const Vector& beta) const {
  double worst = beta.norm() - ball_radius;
  for (const auto& h : halfspaces) worst = std::max(worst, h.violation(beta));
  for (const auto& e : ellipsoids) worst = std::max(worst, e.violation(beta));
  for (const auto& c : cones) worst = std::max(worst, c.violation(beta));
  for (const auto& b : l1_blocks) worst = std::max(worst, b.violation(beta));
  return worst;
}

std::string ConstraintSet::worst_block(const Vector& beta) const {
  std::string label = "ball";
  double worst = beta.norm() - ball_radius;
  auto consider = [&](const char* kind, std::size_t k, double v) {
    if (v > worst) {
      worst = v;
      label = std::string(kind) + "[" + std::to_string(k) + "]";
    }
  };
  for (std::size_t k = 0; k < halfspaces.size(); ++k) consider("halfspace", k, halfspaces[k].violation(beta));
  for (std::size_t k = 0; k < ellipsoids.size(); ++k) consider("ellipsoid", k, ellipsoids[k].violation(beta));
  for (std::size_t k = 0; k < cones.size(); ++k) consider("cone", k, cones[k].violation(beta));
  for (std::size_t k = 0; k < l1_blocks.size(); ++k) consider("l1_block", k, l1_blocks[k].violation(beta));
  return label;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::CoveringLog: return "CoveringLog";
    case BoundKind::Rademacher: return "Rademacher";
    case BoundKind::Generalization: return "Generalization";
  }
  return "Unknown";
}

BoundKind bound_kind_from_string(const std::string& name) {
  if (name == "CoveringLog") return BoundKind::CoveringLog;
  if (name == "Rademacher") return BoundKind::Rademacher;
  if (name == "Generalization") return BoundKind::Generalization;
  throw Error("unknown bound kind '" + name + "'");
}

double min_eigenvalue(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

namespace {

std::string tag(const char* kind, std::size_t k) {
  return std::string(kind) + "[" + std::to_string(k) + "]";
}

}  // namespace

Diagnostics validate(const ConstraintSet& set, Index p) {
  Diagnostics d;
  const double psd_tol = kTolerances.psd;
  if (!(set.ball_radius > 0.0)) d.errors.push_back("ball radius must be positive");

  for (std::size_t k = 0; k < set.halfspaces.size(); ++k) {
    const auto& h = set.halfspaces[k];
    if (h.normal.size() != p) {
      d.errors.push_back(tag("halfspace", k) + ": dimension " + std::to_string(h.normal.size()) +
                         " != " + std::to_string(p));
      continue;
    }
    if (h.normal.isZero(0.0)) {
      if (h.offset < 0.0) {
        d.errors.push_back(tag("halfspace", k) + ": zero normal with negative offset is infeasible");
      } else {
        d.warnings.push_back(tag("halfspace", k) + ": zero normal, always satisfied");
      }
    }
    if (h.margin && !(*h.margin > 0.0)) d.errors.push_back(tag("halfspace", k) + ": margin must be positive");
    if (h.offset < 0.0) d.zero_feasible = false;
  }

  // Opposing pairs with offsets summing to zero pin w^T beta to a single value.
  for (std::size_t i = 0; i < set.halfspaces.size(); ++i) {
    const auto& a = set.halfspaces[i];
    if (a.normal.size() != p || a.normal.isZero(0.0)) continue;
    for (std::size_t j = i + 1; j < set.halfspaces.size(); ++j) {
      const auto& b = set.halfspaces[j];
      if (b.normal.size() != p) continue;
      const double scale = std::max(a.normal.norm(), b.normal.norm());
      if ((a.normal + b.normal).norm() <= 1e-12 * scale &&
          std::abs(a.offset + b.offset) <= 1e-12 * std::max(1.0, std::abs(a.offset))) {
        std::ostringstream msg;
        msg << tag("halfspace", i) << " and " << tag("halfspace", j)
            << " form a zero-width slab: beta must satisfy w^T beta = " << a.offset;
        d.warnings.push_back(msg.str());
      }
    }
  }

  for (std::size_t k = 0; k < set.ellipsoids.size(); ++k) {
    const auto& e = set.ellipsoids[k];
    if (e.matrix.rows() != p || e.matrix.cols() != p) {
      d.errors.push_back(tag("ellipsoid", k) + ": matrix must be " + std::to_string(p) + "x" +
                         std::to_string(p));
      continue;
    }
    const double asym = (e.matrix - e.matrix.transpose()).cwiseAbs().maxCoeff();
    if (asym > psd_tol) {
      std::ostringstream msg;
      msg << tag("ellipsoid", k) << ": symmetry violation " << asym;
      d.errors.push_back(msg.str());
    } else if (min_eigenvalue(e.matrix) < -psd_tol) {
      d.errors.push_back(tag("ellipsoid", k) + ": matrix is not positive semidefinite");
    }
    if (e.level < 0.0) {
      d.errors.push_back(tag("ellipsoid", k) + ": negative level makes the set empty");
      d.zero_feasible = false;
    }
  }

  d.cone_eligible.assign(set.cones.size(), false);
  for (std::size_t k = 0; k < set.cones.size(); ++k) {
    const auto& c = set.cones[k];
    if (c.map.cols() != p || c.slope.size() != p) {
      d.errors.push_back(tag("cone", k) + ": dimension mismatch");
      continue;
    }
    if (c.shift < 0.0) d.zero_feasible = false;
    bool eligible = c.map.rows() == c.map.cols();
    if (eligible) eligible = (c.map - c.map.transpose()).cwiseAbs().maxCoeff() <= psd_tol;
    if (eligible) eligible = min_eigenvalue(c.map) > psd_tol;
    d.cone_eligible[k] = eligible;
    if (!eligible) {
      d.warnings.push_back(tag("cone", k) +
                           ": not eligible for the conic complexity bound (map must be "
                           "symmetric positive definite)");
    }
  }

  for (std::size_t k = 0; k < set.l1_blocks.size(); ++k) {
    const auto& b = set.l1_blocks[k];
    if (b.columns.rows() != p) d.errors.push_back(tag("l1_block", k) + ": dimension mismatch");
    if (b.columns.cols() < 1) d.errors.push_back(tag("l1_block", k) + ": empty index set");
    if (b.level < 0.0) {
      d.errors.push_back(tag("l1_block", k) + ": negative level makes the set empty");
      d.zero_feasible = false;
    }
  }
  return d;
}

}  // namespace sideknow
