#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "sp21kit/decision.hpp"
#include "sp21kit/fixtures.hpp"

namespace sp21kit::io {

using json = nlohmann::json;

inline constexpr std::string_view kSchema = "sp21kit/1";

json to_json(const Quat& q);
json to_json(const QMat3& m);

/// `path` is a JSON pointer used in error messages.
Quat quat_from_json(const json& j, const std::string& path = "");
QMat3 matrix_from_json(const json& j, const std::string& path = "");

struct GroupDocument {
  double tolerance = Tolerance{}.abs_tol;
  GeneratorSet gens;
};

/// Parses a group file. Syntax errors carry "line L, column C"; semantic
/// errors carry the JSON pointer of the offending value. Membership is not
/// checked here. Throws Error(Errc::Parse).
GroupDocument parse_group(std::string_view text);
std::string serialize_group(const GeneratorSet& gens, double tolerance = Tolerance{}.abs_tol);

json to_json(const TraceAuditReport& report, const GeneratorSet& gens);
json to_json(const CaseReport& report, const GeneratorSet& gens);
json to_json(const FalsifierReport& report);

}  // namespace sp21kit::io
