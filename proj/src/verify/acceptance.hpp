#pragma once

#include "sideknow/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace sideknow::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20'240'611;
  std::size_t mc = 2000;
  /// When set, the determinism check also runs the command-line tool.
  std::optional<std::string> cli_path;
  /// Scratch directory for files written by the determinism check.
  std::string work_dir = "/tmp";
};

CriterionResult check_ellipsoid_sandwich(const AcceptanceOptions& opts);     // 1
CriterionResult check_quadratic_dual(const AcceptanceOptions& opts);         // 2
CriterionResult check_conic(const AcceptanceOptions& opts);                  // 3
CriterionResult check_halfspace_dual(const AcceptanceOptions& opts);         // 4
CriterionResult check_single_halfspace_cover(const AcceptanceOptions& opts); // 5
CriterionResult check_polygonal_cover(const AcceptanceOptions& opts);        // 6
CriterionResult check_geometry(const AcceptanceOptions& opts);               // 7
CriterionResult check_solvers(const AcceptanceOptions& opts);                // 8
CriterionResult check_desk_experiment(const AcceptanceOptions& opts);        // 9
CriterionResult check_determinism(const AcceptanceOptions& opts);            // 10

inline constexpr int kCriterionCount = 10;

/// Runs criterion `id` (1-based).
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Upper bounds against Monte Carlo estimates on random instances of one
/// (p, n) shape: ellipsoid trace bounds, quadratic dual, conic and half-space
/// dual. One row per check.
std::vector<CriterionResult> sandwich_suite(Index p, Index n, std::size_t mc, std::uint64_t seed,
                                            int instances = 3);

/// "PASS [id] name: detail" / "FAIL ..." line.
std::string format_result(const CriterionResult& r);

}  // namespace sideknow::verify
