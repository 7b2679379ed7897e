#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sideknow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Numerical tolerances shared by every module.
struct Tolerances {
  double feasibility = 1e-6;
  double psd = 1e-10;
  double root = 1e-10;
  double optimizer = 1e-8;
};

inline constexpr Tolerances kTolerances{};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; the message names the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Raised by the consensus solver when no feasible point can be produced.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::string block, double violation)
      : Error(what), block_(std::move(block)), violation_(violation) {}
  const std::string& block() const { return block_; }
  double violation() const { return violation_; }

 private:
  std::string block_;
  double violation_;
};

/// Training sample. Examples are stored as columns (p x n).
struct LabeledDataset {
  Matrix features;
  Vector labels;
  double feature_bound = 0.0;

  /// Validates shapes and computes the feature bound as the largest column
  /// norm unless an explicit bound is given.
  static LabeledDataset make(Matrix features, Vector labels,
                             std::optional<double> feature_bound = std::nullopt);

  Index dim() const { return features.rows(); }
  Index size() const { return features.cols(); }

  LabeledDataset subset(const std::vector<Index>& columns) const;
};

/// Knowledge sample; labels are only present for synthetic experiments.
struct UnlabeledSet {
  Matrix features;
  std::optional<Vector> labels;

  static UnlabeledSet make(Matrix features, std::optional<Vector> labels = std::nullopt);

  Index dim() const { return features.rows(); }
  Index size() const { return features.cols(); }
};

/// {beta : normal^T beta <= offset}
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
  std::optional<double> margin;

  /// Zero normal with nonnegative offset: satisfied by every beta.
  bool trivially_true() const;
  double violation(const Vector& beta) const { return normal.dot(beta) - offset; }
};

/// {beta : beta^T matrix beta <= level}
struct EllipsoidConstraint {
  Matrix matrix;
  double level = 1.0;

  double violation(const Vector& beta) const { return beta.dot(matrix * beta) - level; }
  /// Same set rescaled to level one.
  EllipsoidConstraint normalized() const;
};

/// {beta : ||map beta||_2 <= slope^T beta + shift}
struct SOConstraint {
  Matrix map;
  Vector slope;
  double shift = 0.0;

  double violation(const Vector& beta) const {
    return (map * beta).norm() - slope.dot(beta) - shift;
  }
};

/// {beta : sum_i |beta^T columns_i| <= level}
struct L1PredictionBlock {
  std::vector<Index> indices;
  Matrix columns;  // p x |I|
  double level = 0.0;

  double violation(const Vector& beta) const {
    return (columns.transpose() * beta).lpNorm<1>() - level;
  }
};

/// Hypothesis space: a mandatory l2 ball intersected with optional extras.
struct ConstraintSet {
  double ball_radius = 1.0;
  std::vector<HalfSpace> halfspaces;
  std::vector<EllipsoidConstraint> ellipsoids;
  std::vector<SOConstraint> cones;
  std::vector<L1PredictionBlock> l1_blocks;

  static ConstraintSet ball(double radius) {
    ConstraintSet set;
    set.ball_radius = radius;
    return set;
  }

  bool only_ball() const {
    return halfspaces.empty() && ellipsoids.empty() && cones.empty() && l1_blocks.empty();
  }

  /// Largest raw constraint excess over all members (ball included).
  double max_violation(const Vector& beta) const;
  /// Label of the member with the largest excess, e.g. "cone[2]".
  std::string worst_block(const Vector& beta) const;
  bool contains(const Vector& beta, double tol = kTolerances.feasibility) const {
    return max_violation(beta) <= tol;
  }
};

struct LinearModel {
  Vector beta;

  double predict(const Vector& x) const { return beta.dot(x); }
};

enum class BoundKind { CoveringLog, Rademacher, Generalization };

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

/// One computed bound. Covering bounds hold log N (natural log).
struct BoundReport {
  BoundKind kind = BoundKind::Rademacher;
  double value = 0.0;
  std::string theorem_tag;
  std::map<std::string, double> parameters;
  std::optional<double> mc_stderr;
  std::vector<std::string> flags;
};

/// Result of `validate`.
struct Diagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool zero_feasible = true;
  std::vector<bool> cone_eligible;  // A_k square, symmetric and positive definite

  bool ok() const { return errors.empty(); }
};

/// Checks dimensions, symmetry/PSD-ness and feasibility of beta = 0. Never
/// throws and never modifies its input.
Diagnostics validate(const ConstraintSet& set, Index p);

/// Smallest eigenvalue of the symmetric part of a square matrix.
double min_eigenvalue(const Matrix& a);

}  // namespace sideknow
