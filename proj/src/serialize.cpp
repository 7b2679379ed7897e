#include "sideknow/serialize.hpp"

#include <cmath>
#include <fstream>

namespace sideknow {

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error("expected a JSON array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw Error("expected a JSON array of rows");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = rows == 0 ? Index{0} : static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw Error("ragged matrix in JSON");
    for (Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Json to_json(const HalfSpace& h) {
  Json j{{"normal", to_json(h.normal)}, {"offset", h.offset}};
  if (h.margin) j["margin"] = *h.margin;
  return j;
}

Json to_json(const EllipsoidConstraint& e) {
  return Json{{"matrix", to_json(e.matrix)}, {"level", e.level}};
}

Json to_json(const SOConstraint& c) {
  return Json{{"map", to_json(c.map)}, {"slope", to_json(c.slope)}, {"shift", c.shift}};
}

Json to_json(const L1PredictionBlock& b) {
  Json cols = Json::array();
  for (Index k = 0; k < b.columns.cols(); ++k) cols.push_back(to_json(Vector(b.columns.col(k))));
  return Json{{"indices", b.indices}, {"columns", cols}, {"level", b.level}};
}

Json to_json(const ConstraintSet& set) {
  Json j;
  j["ball_radius"] = set.ball_radius;
  j["halfspaces"] = Json::array();
  for (const auto& h : set.halfspaces) j["halfspaces"].push_back(to_json(h));
  j["ellipsoids"] = Json::array();
  for (const auto& e : set.ellipsoids) j["ellipsoids"].push_back(to_json(e));
  j["cones"] = Json::array();
  for (const auto& c : set.cones) j["cones"].push_back(to_json(c));
  j["l1_blocks"] = Json::array();
  for (const auto& b : set.l1_blocks) j["l1_blocks"].push_back(to_json(b));
  return j;
}

Json to_json(const LinearModel& model) { return Json{{"beta", to_json(model.beta)}}; }

Json to_json(const BoundReport& report) {
  Json j;
  j["kind"] = to_string(report.kind);
  j["theorem_tag"] = report.theorem_tag;
  std::vector<std::string> flags = report.flags;
  if (std::isfinite(report.value)) {
    j["value"] = report.value;
  } else {
    j["value"] = nullptr;
    flags.push_back(std::string("value is ") + (report.value > 0 ? "+inf" : "non-finite"));
  }
  if (report.kind == BoundKind::CoveringLog && std::isfinite(report.value)) {
    j["value_log10"] = report.value / std::log(10.0);
  }
  Json params = Json::object();
  for (const auto& [name, value] : report.parameters) {
    if (std::isfinite(value)) {
      params[name] = value;
    } else {
      params[name] = nullptr;
    }
  }
  j["parameters"] = params;
  if (report.mc_stderr) {
    j["mc_stderr"] = *report.mc_stderr;
  } else {
    j["mc_stderr"] = nullptr;
  }
  j["flags"] = flags;
  return j;
}

Json to_json(const Diagnostics& d) {
  return Json{{"ok", d.ok()},
              {"errors", d.errors},
              {"warnings", d.warnings},
              {"zero_feasible", d.zero_feasible},
              {"cone_eligible", d.cone_eligible}};
}

HalfSpace halfspace_from_json(const Json& j) {
  HalfSpace h;
  h.normal = vector_from_json(j.at("normal"));
  h.offset = j.at("offset").get<double>();
  if (j.contains("margin") && !j["margin"].is_null()) h.margin = j["margin"].get<double>();
  return h;
}

EllipsoidConstraint ellipsoid_from_json(const Json& j) {
  return EllipsoidConstraint{matrix_from_json(j.at("matrix")), j.at("level").get<double>()};
}

SOConstraint cone_from_json(const Json& j) {
  return SOConstraint{matrix_from_json(j.at("map")), vector_from_json(j.at("slope")),
                      j.at("shift").get<double>()};
}

L1PredictionBlock l1_block_from_json(const Json& j) {
  L1PredictionBlock b;
  b.indices = j.at("indices").get<std::vector<Index>>();
  const auto& cols = j.at("columns");
  if (!cols.is_array() || cols.empty()) throw Error("l1 block needs at least one column");
  const auto p = static_cast<Index>(cols[0].size());
  b.columns.resize(p, static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Vector c = vector_from_json(cols[k]);
    if (c.size() != p) throw Error("l1 block columns have inconsistent length");
    b.columns.col(static_cast<Index>(k)) = c;
  }
  b.level = j.at("level").get<double>();
  return b;
}

ConstraintSet constraint_set_from_json(const Json& j) {
  ConstraintSet set;
  set.ball_radius = j.at("ball_radius").get<double>();
  if (j.contains("halfspaces"))
    for (const auto& h : j["halfspaces"]) set.halfspaces.push_back(halfspace_from_json(h));
  if (j.contains("ellipsoids"))
    for (const auto& e : j["ellipsoids"]) set.ellipsoids.push_back(ellipsoid_from_json(e));
  if (j.contains("cones"))
    for (const auto& c : j["cones"]) set.cones.push_back(cone_from_json(c));
  if (j.contains("l1_blocks"))
    for (const auto& b : j["l1_blocks"]) set.l1_blocks.push_back(l1_block_from_json(b));
  return set;
}

LinearModel model_from_json(const Json& j) { return LinearModel{vector_from_json(j.at("beta"))}; }

BoundReport bound_report_from_json(const Json& j) {
  BoundReport r;
  r.kind = bound_kind_from_string(j.at("kind").get<std::string>());
  r.theorem_tag = j.at("theorem_tag").get<std::string>();
  r.value = j.at("value").is_null() ? INFINITY : j.at("value").get<double>();
  if (j.contains("parameters")) {
    for (const auto& [name, value] : j["parameters"].items()) {
      r.parameters[name] = value.is_null() ? INFINITY : value.get<double>();
    }
  }
  if (j.contains("mc_stderr") && !j["mc_stderr"].is_null()) r.mc_stderr = j["mc_stderr"].get<double>();
  if (j.contains("flags")) r.flags = j["flags"].get<std::vector<std::string>>();
  return r;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace sideknow
