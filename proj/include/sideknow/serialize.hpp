#pragma once

#include "sideknow/types.hpp"

#include "json.hpp"

namespace sideknow {

using Json = nlohmann::json;

Json to_json(const Vector& v);
Json to_json(const Matrix& m);  // row-major nested arrays
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

Json to_json(const HalfSpace& h);
Json to_json(const EllipsoidConstraint& e);
Json to_json(const SOConstraint& c);
Json to_json(const L1PredictionBlock& b);
Json to_json(const ConstraintSet& set);
Json to_json(const LinearModel& model);
/// {kind, theorem_tag, value, parameters, mc_stderr, flags}; infinite values
/// are written as null and explained in flags.
Json to_json(const BoundReport& report);
Json to_json(const Diagnostics& d);

HalfSpace halfspace_from_json(const Json& j);
EllipsoidConstraint ellipsoid_from_json(const Json& j);
SOConstraint cone_from_json(const Json& j);
L1PredictionBlock l1_block_from_json(const Json& j);
ConstraintSet constraint_set_from_json(const Json& j);
LinearModel model_from_json(const Json& j);
BoundReport bound_report_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace sideknow
