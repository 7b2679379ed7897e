#include "sideknow/consensus.hpp"

#include "sideknow/geometry.hpp"

#include <cmath>
#include <sstream>

namespace sideknow {

namespace {

// Blocks whose excess is below this are left to the radial pull-back.
constexpr double kProjectThreshold = 1e-8;
constexpr double kPullBackTarget = 1e-10;

std::string block_tag(const char* kind, std::size_t k) {
  return std::string(kind) + "[" + std::to_string(k) + "]";
}

}  // namespace

ConsensusSolver::ConsensusSolver(const ConstraintSet& set, Index p, SolverOptions options)
    : set_(set), p_(p), options_(options) {
  if (p < 1) throw Error("consensus solver needs p >= 1");
  if (!(set.ball_radius > 0.0)) throw Error("ball radius must be positive");

  std::vector<Matrix> lifts;
  std::vector<Vector> shifts;
  Index rows = 0;
  auto add = [&](Shape shape, Matrix lift, Vector shift, double radius) {
    blocks_.push_back(Block{shape, rows, lift.rows(), radius});
    rows += lift.rows();
    lifts.push_back(std::move(lift));
    shifts.push_back(std::move(shift));
  };

  add(Shape::Ball, Matrix::Identity(p, p), Vector::Zero(p), set.ball_radius);

  for (std::size_t k = 0; k < set.halfspaces.size(); ++k) {
    const auto& h = set.halfspaces[k];
    if (h.normal.size() != p) throw Error(block_tag("halfspace", k) + ": dimension mismatch");
    const double norm = h.normal.norm();
    if (norm == 0.0) {
      if (h.offset < 0.0) {
        throw InfeasibleError(block_tag("halfspace", k) + " has zero normal and negative offset",
                              block_tag("halfspace", k), -h.offset);
      }
      continue;
    }
    add(Shape::UpperBound, h.normal.transpose() / norm, Vector::Zero(1), h.offset / norm);
  }

  for (std::size_t k = 0; k < set.ellipsoids.size(); ++k) {
    const auto& e = set.ellipsoids[k];
    if (e.matrix.rows() != p || e.matrix.cols() != p) {
      throw Error(block_tag("ellipsoid", k) + ": dimension mismatch");
    }
    if (e.level < 0.0) {
      throw InfeasibleError(block_tag("ellipsoid", k) + " has a negative level",
                            block_tag("ellipsoid", k), -e.level);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (e.matrix + e.matrix.transpose()));
    const Vector& lam = eig.eigenvalues();
    const double cutoff = kTolerances.psd * std::max(1.0, lam.cwiseAbs().maxCoeff());
    Index rank = 0;
    for (Index i = 0; i < p; ++i)
      if (lam(i) > cutoff) ++rank;
    if (rank == 0) continue;
    Matrix lift(rank, p);
    Index r = 0;
    for (Index i = 0; i < p; ++i) {
      if (lam(i) > cutoff) lift.row(r++) = std::sqrt(lam(i)) * eig.eigenvectors().col(i).transpose();
    }
    add(Shape::Ball, std::move(lift), Vector::Zero(rank), std::sqrt(e.level));
  }

  for (std::size_t k = 0; k < set.l1_blocks.size(); ++k) {
    const auto& b = set.l1_blocks[k];
    if (b.columns.rows() != p) throw Error(block_tag("l1_block", k) + ": dimension mismatch");
    if (b.level < 0.0) {
      throw InfeasibleError(block_tag("l1_block", k) + " has a negative level",
                            block_tag("l1_block", k), -b.level);
    }
    add(Shape::L1Ball, b.columns.transpose(), Vector::Zero(b.columns.cols()), b.level);
  }

  for (std::size_t k = 0; k < set.cones.size(); ++k) {
    const auto& c = set.cones[k];
    if (c.map.cols() != p || c.slope.size() != p) throw Error(block_tag("cone", k) + ": dimension mismatch");
    const Index m = c.map.rows();
    Matrix lift(m + 1, p);
    lift.topRows(m) = c.map;
    lift.row(m) = c.slope.transpose();
    Vector shift = Vector::Zero(m + 1);
    shift(m) = c.shift;
    add(Shape::Cone, std::move(lift), std::move(shift), 0.0);
  }

  lift_.resize(rows, p);
  shift_.resize(rows);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    lift_.middleRows(blocks_[b].offset, blocks_[b].rows) = lifts[b];
    shift_.segment(blocks_[b].offset, blocks_[b].rows) = shifts[b];
  }
  gram_ = lift_.transpose() * lift_;
}

Vector ConsensusSolver::project(const Vector& v) const {
  Vector out(v.size());
  for (const auto& b : blocks_) {
    const auto seg = v.segment(b.offset, b.rows);
    switch (b.shape) {
      case Shape::Ball: out.segment(b.offset, b.rows) = project_ball(seg, b.radius); break;
      case Shape::UpperBound: out(b.offset) = std::min(seg(0), b.radius); break;
      case Shape::L1Ball: out.segment(b.offset, b.rows) = project_l1_ball(seg, b.radius); break;
      case Shape::Cone: {
        const ConePoint proj = project_soc(ConePoint{seg.head(b.rows - 1), seg(b.rows - 1)});
        out.segment(b.offset, b.rows - 1) = proj.u;
        out(b.offset + b.rows - 1) = proj.t;
        break;
      }
    }
  }
  return out;
}

QpSolution ConsensusSolver::minimize(const Matrix& P, const Vector& q) const {
  if (P.rows() != p_ || P.cols() != p_ || q.size() != p_) {
    throw Error("consensus solver: objective dimension mismatch");
  }
  const Index rows = lift_.rows();
  const double tol = options_.tol;
  const double alpha = options_.relaxation;

  double rho = options_.rho;
  Eigen::LLT<Matrix> llt(P + rho * gram_);
  if (llt.info() != Eigen::Success) throw Error("consensus solver: P must be positive semidefinite");

  Vector beta = Vector::Zero(p_);
  Vector z = project(shift_);
  Vector u = Vector::Zero(rows);
  SolverReport report;

  for (int it = 1; it <= options_.max_iterations; ++it) {
    beta = llt.solve(-q + rho * lift_.transpose() * (z - shift_ - u));
    const Vector lb = lift_ * beta;
    const Vector relaxed = alpha * lb + (1.0 - alpha) * (z - shift_);
    const Vector z_prev = z;
    z = project(relaxed + shift_ + u);
    u += relaxed + shift_ - z;

    const double primal = (lb + shift_ - z).norm();
    const double dual = rho * (lift_.transpose() * (z - z_prev)).norm();
    const double eps_primal =
        std::sqrt(static_cast<double>(rows)) * tol + tol * std::max(lb.norm(), (z - shift_).norm());
    const double eps_dual =
        std::sqrt(static_cast<double>(p_)) * tol + tol * rho * (lift_.transpose() * u).norm();
    report.iterations = it;
    report.primal_residual = primal;
    report.dual_residual = dual;
    if (primal <= eps_primal && dual <= eps_dual) {
      report.converged = true;
      break;
    }

    // Residual balancing on the tolerance-normalized residuals.
    if (it % 5 == 0) {
      const double ratio = (primal / eps_primal) / std::max(dual / eps_dual, 1e-300);
      if (ratio > 10.0 && rho < 1e8) {
        rho *= 2.0;
        u *= 0.5;
        llt.compute(P + rho * gram_);
      } else if (ratio < 0.1 && rho > 1e-8) {
        rho *= 0.5;
        u *= 2.0;
        llt.compute(P + rho * gram_);
      }
    }
  }
  report.rho = rho;
  report.max_violation = set_.max_violation(beta);
  return QpSolution{std::move(beta), report};
}

QpSolution ConsensusSolver::solve(const Matrix& P, const Vector& q) const {
  QpSolution sol = minimize(P, q);
  sol.beta = make_feasible(sol.beta);
  sol.report.max_violation = set_.max_violation(sol.beta);
  return sol;
}

Vector ConsensusSolver::make_feasible(const Vector& beta) const {
  Vector b = beta;
  if (set_.max_violation(b) <= kPullBackTarget) return b;

  auto inner_projection = [&](ConstraintSet single) {
    single.ball_radius = set_.ball_radius;
    SolverOptions inner = options_;
    inner.tol = std::min(options_.tol, 1e-10);
    ConsensusSolver solver(single, p_, inner);
    return solver.minimize(Matrix::Identity(p_, p_), -b).beta;
  };

  for (int sweep = 0; sweep < 3 && set_.max_violation(b) > kPullBackTarget; ++sweep) {
    b = project_ball(b, set_.ball_radius);
    for (const auto& h : set_.halfspaces) {
      if (h.violation(b) > 0.0) b = project_halfspace(b, h);
    }
    for (const auto& e : set_.ellipsoids) {
      if (e.violation(b) > 0.0) b = project_ellipsoid(b, e);
    }
    for (const auto& l1 : set_.l1_blocks) {
      if (l1.violation(b) > kProjectThreshold) {
        ConstraintSet single;
        single.l1_blocks.push_back(l1);
        b = inner_projection(std::move(single));
      }
    }
    for (const auto& c : set_.cones) {
      if (c.violation(b) > kProjectThreshold) {
        ConstraintSet single;
        single.cones.push_back(c);
        b = inner_projection(std::move(single));
      }
    }
  }

  if (set_.max_violation(b) > kPullBackTarget && set_.max_violation(Vector::Zero(p_)) <= 0.0) {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (set_.max_violation(mid * b) <= kPullBackTarget) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    b *= lo;
  }

  const double violation = set_.max_violation(b);
  if (violation > kTolerances.feasibility) {
    const std::string worst = set_.worst_block(b);
    std::ostringstream msg;
    msg << "no feasible point found: " << worst << " violated by " << violation;
    throw InfeasibleError(msg.str(), worst, violation);
  }
  return b;
}

}  // namespace sideknow
