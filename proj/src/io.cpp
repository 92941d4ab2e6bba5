#include "sp21kit/io.hpp"

#include <algorithm>
#include <cmath>

namespace sp21kit::io {

namespace {

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw Error(Errc::Parse, "at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

double round4(double x) {
  const double r = std::round(x * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;
}

json frame_quat(const Quat& q) { return json::array({round4(q.w()), round4(q.x()), round4(q.y()), round4(q.z())}); }

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i + 1 < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json diagnostics_to_json(const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const Diagnostic& d : diagnostics) {
    json values = json::object();
    for (const auto& [name, value] : d.values) values[name] = value;
    out.push_back({{"rule", d.rule}, {"message", d.message}, {"values", values}});
  }
  return out;
}

}  // namespace

json to_json(const Quat& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

json to_json(const QMat3& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(to_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

Quat quat_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) fail_at(path, "expected a quaternion [w, x, y, z]");
  std::array<double, 4> v{};
  for (std::size_t k = 0; k < 4; ++k) {
    if (!j[k].is_number()) fail_at(path + "/" + std::to_string(k), "expected a number");
    v[k] = j[k].get<double>();
    if (!std::isfinite(v[k])) fail_at(path + "/" + std::to_string(k), "non-finite component");
  }
  return Quat(v[0], v[1], v[2], v[3]);
}

QMat3 matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail_at(path, "expected a 3x3 matrix");
  QMat3 m;
  for (std::size_t r = 0; r < 3; ++r) {
    const std::string row_path = path + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != 3) fail_at(row_path, "expected a row of 3 quaternions");
    for (std::size_t c = 0; c < 3; ++c) {
      m(static_cast<int>(r), static_cast<int>(c)) = quat_from_json(j[r][c], row_path + "/" + std::to_string(c));
    }
  }
  return m;
}

GroupDocument parse_group(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw Error(Errc::Parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                 std::string(e.what()));
  }
  if (!doc.is_object()) fail_at("", "expected an object");
  if (doc.contains("schema") && doc["schema"] != std::string(kSchema)) {
    fail_at("/schema", "unsupported schema, expected " + std::string(kSchema));
  }

  GroupDocument out;
  if (doc.contains("tolerance")) {
    const json& t = doc["tolerance"];
    if (!t.is_number() || !(t.get<double>() > 0.0) || !std::isfinite(t.get<double>())) {
      fail_at("/tolerance", "expected a positive number");
    }
    out.tolerance = t.get<double>();
  }
  if (!doc.contains("loxodromic")) fail_at("/loxodromic", "missing");
  out.gens.loxodromic = matrix_from_json(doc["loxodromic"], "/loxodromic");
  if (doc.contains("generators")) {
    const json& g = doc["generators"];
    if (!g.is_array()) fail_at("/generators", "expected an array of matrices");
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.gens.others.push_back(matrix_from_json(g[i], "/generators/" + std::to_string(i)));
    }
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const json& l = doc["labels"];
    if (!l.is_array()) fail_at("/labels", "expected an array of strings");
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (!l[i].is_string()) fail_at("/labels/" + std::to_string(i), "expected a string");
      labels.push_back(l[i].get<std::string>());
    }
    // A list covering only the non-loxodromic generators names A implicitly.
    if (labels.size() == out.gens.others.size()) {
      labels.insert(labels.begin(), "A");
    }
    if (labels.size() != out.gens.size()) fail_at("/labels", "expected one label per generator");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].empty() || labels[i].find_first_of(" \t\n^") != std::string::npos) {
        fail_at("/labels/" + std::to_string(i), "labels must be non-empty without spaces or '^'");
      }
      if (std::find(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(i), labels[i]) !=
          labels.begin() + static_cast<std::ptrdiff_t>(i)) {
        fail_at("/labels/" + std::to_string(i), "duplicate label");
      }
    }
  }
  out.gens.labels = std::move(labels);
  for (std::size_t i = out.gens.labels.size(); i < out.gens.size(); ++i) out.gens.labels.push_back(out.gens.label(i));
  return out;
}

std::string serialize_group(const GeneratorSet& gens, double tolerance) {
  json doc;
  doc["schema"] = std::string(kSchema);
  doc["tolerance"] = tolerance;
  doc["loxodromic"] = to_json(gens.loxodromic);
  doc["generators"] = json::array();
  for (const QMat3& m : gens.others) doc["generators"].push_back(to_json(m));
  json labels = json::array();
  for (std::size_t i = 0; i < gens.size(); ++i) labels.push_back(gens.label(i));
  doc["labels"] = labels;
  return doc.dump(2) + "\n";
}

json to_json(const TraceAuditReport& report, const GeneratorSet& gens) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < gens.size(); ++i) labels.push_back(gens.label(i));
  return {
      {"schema", kSchema},
      {"kind", "trace_audit"},
      {"passed", report.passed},
      {"max_len", report.max_len},
      {"words_checked", report.words_checked},
      {"max_jk_residual", report.max_jk_residual},
      {"worst_word", to_string(report.worst_word, labels)},
      {"tolerance", report.tolerance},
  };
}

json to_json(const CaseReport& report, const GeneratorSet& gens) {
  json out;
  out["schema"] = std::string(kSchema);
  out["kind"] = "case_report";
  out["case"] = std::string(to_string(report.label));
  out["certified"] = is_certified(report.label);
  if (report.certificate) {
    const FrameCertificate& cert = *report.certificate;
    out["frame"] = {{"family", std::string(to_string(cert.family))},
                    {"u", json::array({frame_quat(cert.u[0]), frame_quat(cert.u[1]), frame_quat(cert.u[2])})}};
    out["conjugator"] = cert.sp_conjugator ? to_json(*cert.sp_conjugator) : json(nullptr);
  } else {
    out["frame"] = nullptr;
    out["conjugator"] = nullptr;
  }
  json table = json::array();
  for (std::size_t i = 0; i < report.residuals.size(); ++i) {
    json row = {{"generator", gens.label(i)}, {"frame_residual", report.residuals[i]}};
    if (report.check && i < report.check->conjugated_residuals.size()) {
      row["conjugated_residual"] = report.check->conjugated_residuals[i];
    }
    table.push_back(row);
  }
  out["residuals"] = table;
  if (report.check && report.check->conjugator_sp_residual) {
    out["conjugator_sp_residual"] = *report.check->conjugator_sp_residual;
  }
  out["diagnostics"] = diagnostics_to_json(report.diagnostics);
  return out;
}

json to_json(const FalsifierReport& report) {
  json samples = json::array();
  for (const FalsifierSample& s : report.counterexamples) {
    samples.push_back({{"lambda", s.lambda},
                       {"mu", to_json(s.mu)},
                       {"nu", to_json(s.nu)},
                       {"residual", s.residual},
                       {"injected", s.injected}});
  }
  return {
      {"schema", kSchema},
      {"kind", "falsifier"},
      {"trials", report.trials},
      {"converged", report.converged},
      {"not_converged", report.not_converged},
      {"max_converged_residual", report.max_converged_residual},
      {"counterexamples", samples},
  };
}

}  // namespace sp21kit::io
