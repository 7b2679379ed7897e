#include "doctest.h"

#include "sideknow/dataset_io.hpp"
#include "sideknow/normal.hpp"
#include "sideknow/parallel.hpp"
#include "sideknow/rng.hpp"
#include "sideknow/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace sideknow;

namespace {

std::string scratch_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("sideknow_core_" + name);
  std::ofstream(path) << body;
  return path.string();
}

// Phi(z) by its Maclaurin series in long double, then bisection for the
// quantile. Shares nothing with the library's rational approximation.
long double series_cdf(long double z) {
  long double term = z;
  long double sum = z;
  for (int k = 1; k < 200; ++k) {
    term *= -z * z / (2.0L * k);
    sum += term / (2.0L * k + 1.0L);
  }
  return 0.5L + sum / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
}

double series_quantile(double q) {
  long double lo = -8.0L;
  long double hi = 8.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    (series_cdf(mid) < q ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

}  // namespace

TEST_CASE("validate: plain ball passes") {
  const Diagnostics d = validate(ConstraintSet::ball(1.0), 3);
  CHECK(d.ok());
  CHECK(d.warnings.empty());
  CHECK(d.zero_feasible);
}

TEST_CASE("validate: asymmetric ellipsoid matrix is flagged") {
  ConstraintSet set = ConstraintSet::ball(1.0);
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  set.ellipsoids.push_back({a, 1.0});
  const Diagnostics d = validate(set, 2);
  REQUIRE_FALSE(d.ok());
  CHECK(d.errors.front().find("symmetry") != std::string::npos);
}

TEST_CASE("validate: zero cone map is not eligible for the conic bound") {
  ConstraintSet set = ConstraintSet::ball(1.0);
  set.cones.push_back({Matrix::Zero(2, 2), Vector::Zero(2), 1.0});
  const Diagnostics d = validate(set, 2);
  CHECK(d.ok());
  REQUIRE(d.cone_eligible.size() == 1);
  CHECK_FALSE(d.cone_eligible[0]);
}

TEST_CASE("validate does not modify its input and reports infeasible origin") {
  ConstraintSet set = ConstraintSet::ball(2.0);
  set.halfspaces.push_back({Vector::Ones(2), -0.5, std::nullopt});
  const Json before = to_json(set);
  const Diagnostics d = validate(set, 2);
  CHECK_FALSE(d.zero_feasible);
  CHECK(to_json(set) == before);
}

TEST_CASE("load_dataset: single unit example") {
  const auto path = scratch_file("one.csv", "x1,x2,y\n1,0,2\n");
  const LabeledDataset data = load_dataset(path, CsvLayout::Rows);
  CHECK(data.dim() == 2);
  CHECK(data.size() == 1);
  CHECK(data.feature_bound == 1.0);
  CHECK(data.labels(0) == 2.0);
}

TEST_CASE("load_dataset: rows and columns layouts agree") {
  const auto rows = scratch_file("rows.csv", "x1,x2,y\n1,2,3\n4,5,6\n-1,0.5,2\n");
  const auto cols = scratch_file("cols.csv", "x1,1,4,-1\nx2,2,5,0.5\ny,3,6,2\n");
  const LabeledDataset a = load_dataset(rows, CsvLayout::Rows);
  const LabeledDataset b = load_dataset(cols, CsvLayout::Columns);
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  CHECK(a.feature_bound == b.feature_bound);
  CHECK(a.feature_bound == doctest::Approx(std::sqrt(41.0)));
}

TEST_CASE("load_dataset: malformed cell names its line") {
  const auto path = scratch_file("bad.csv", "x1,x2,y\n1,2,3\na,b,1\n");
  try {
    load_dataset(path, CsvLayout::Rows);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(load_dataset(scratch_file("ragged.csv", "x1,y\n1,2,3\n"), CsvLayout::Rows), ParseError);
  CHECK_THROWS_AS(load_dataset(scratch_file("empty.csv", "x1,y\n"), CsvLayout::Rows), Error);
}

TEST_CASE("write_dataset round trip is exact") {
  Rng rng(3, "roundtrip");
  const LabeledDataset data = LabeledDataset::make(Matrix::NullaryExpr(3, 7, [&] { return rng.normal(); }),
                                                   rng.normal_vector(7));
  const auto path = (std::filesystem::temp_directory_path() / "sideknow_core_written.csv").string();
  write_dataset(path, data);
  const LabeledDataset back = load_dataset(path, CsvLayout::Rows);
  CHECK(back.features == data.features);
  CHECK(back.labels == data.labels);
}

TEST_CASE("feature bound invariant") {
  CHECK_THROWS_AS(LabeledDataset::make(Matrix::Ones(2, 2), Vector::Zero(2), 0.5), Error);
  CHECK_THROWS_AS(LabeledDataset::make(Matrix::Ones(2, 2), Vector::Zero(3)), Error);
  const LabeledDataset ok = LabeledDataset::make(Matrix::Ones(2, 2), Vector::Zero(2), 3.0);
  CHECK(ok.feature_bound == 3.0);
}

TEST_CASE("rng: same seed and label repeat, labels separate streams") {
  Rng a(7, "sigma");
  Rng b(7, "sigma");
  Rng c(7, "data");
  bool all_same = true;
  bool any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    all_same = all_same && x == b.next_u64();
    any_diff = any_diff || x != c.next_u64();
  }
  CHECK(all_same);
  CHECK(any_diff);
  CHECK(Rng(7, "sigma").substream(3).next_u64() == Rng(7, "sigma").substream(3).next_u64());
  CHECK(Rng(7, "sigma").substream(3).next_u64() != Rng(7, "sigma").substream(4).next_u64());
}

TEST_CASE("rng: Rademacher mean over a million draws") {
  Rng rng(7, "sigma");
  double sum = 0.0;
  for (int i = 0; i < 1'000'000; ++i) sum += rng.rademacher();
  CHECK(std::abs(sum / 1e6) <= 0.004);
}

TEST_CASE("inverse normal CDF against a series oracle") {
  CHECK(std::abs(inverse_normal_cdf(0.5)) <= 1e-15);
  CHECK(std::abs(inverse_normal_cdf(0.975) - series_quantile(0.975)) <= 1e-9);
  CHECK(std::abs(inverse_normal_cdf(0.975) - 1.959964) <= 1e-6);
  for (double q : {0.001, 0.02, 0.1, 0.3, 0.6, 0.9, 0.99, 0.9999}) {
    CHECK(std::abs(inverse_normal_cdf(q) - series_quantile(q)) <= 1e-8);
    CHECK(std::abs(inverse_normal_cdf(q) + inverse_normal_cdf(1.0 - q)) <= 1e-12);
  }
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), Error);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), Error);
}

TEST_CASE("constraint set JSON round trip") {
  Rng rng(11, "json");
  ConstraintSet set = ConstraintSet::ball(2.5);
  set.halfspaces.push_back({rng.normal_vector(3), 0.7, 0.1});
  set.halfspaces.push_back({rng.normal_vector(3), -0.2, std::nullopt});
  Matrix a = Matrix::NullaryExpr(3, 3, [&] { return rng.normal(); });
  set.ellipsoids.push_back({a * a.transpose(), 1.3});
  set.cones.push_back({Matrix::NullaryExpr(2, 3, [&] { return rng.normal(); }), rng.normal_vector(3), 0.4});
  set.l1_blocks.push_back({{0, 4}, Matrix::NullaryExpr(3, 2, [&] { return rng.normal(); }), 1.1});

  const ConstraintSet back = constraint_set_from_json(Json::parse(to_json(set).dump()));
  CHECK(back.ball_radius == set.ball_radius);
  REQUIRE(back.halfspaces.size() == 2);
  CHECK(back.halfspaces[0].normal == set.halfspaces[0].normal);
  CHECK(back.halfspaces[0].margin == set.halfspaces[0].margin);
  CHECK_FALSE(back.halfspaces[1].margin.has_value());
  CHECK(back.ellipsoids[0].matrix == set.ellipsoids[0].matrix);
  CHECK(back.cones[0].map == set.cones[0].map);
  CHECK(back.cones[0].slope == set.cones[0].slope);
  CHECK(back.l1_blocks[0].columns == set.l1_blocks[0].columns);
  CHECK(back.l1_blocks[0].indices == set.l1_blocks[0].indices);
}

TEST_CASE("parallel_for covers every index once, nested calls run inline") {
  set_thread_count(4);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) {
    parallel_for(3, [&](std::size_t) {});
    ++hits[i];
  });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  set_thread_count(1);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 123456789.123}) CHECK(std::stod(format_double(v)) == v);
}
