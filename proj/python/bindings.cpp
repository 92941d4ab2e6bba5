#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "sp21kit/io.hpp"

namespace py = pybind11;
using namespace sp21kit;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Quat quat_from(const Array& a) {
  if (a.ndim() != 1 || a.shape(0) != 4) throw py::value_error("expected a quaternion of shape (4,)");
  const double* p = a.data();
  return Quat(p[0], p[1], p[2], p[3]);
}

Array quat_to(const Quat& q) {
  Array out(std::vector<py::ssize_t>{4});
  double* p = out.mutable_data();
  p[0] = q.w();
  p[1] = q.x();
  p[2] = q.y();
  p[3] = q.z();
  return out;
}

QMat3 matrix_from(const Array& a) {
  if (a.ndim() != 3 || a.shape(0) != 3 || a.shape(1) != 3 || a.shape(2) != 4) {
    throw py::value_error("expected a quaternion matrix of shape (3, 3, 4)");
  }
  const double* p = a.data();
  QMat3 m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const double* e = p + 4 * (3 * r + c);
      m(r, c) = Quat(e[0], e[1], e[2], e[3]);
    }
  }
  return m;
}

Array matrix_to(const QMat3& m) {
  Array out({3, 3, 4});
  double* p = out.mutable_data();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const Quat& q = m(r, c);
      double* e = p + 4 * (3 * r + c);
      e[0] = q.w();
      e[1] = q.x();
      e[2] = q.y();
      e[3] = q.z();
    }
  }
  return out;
}

GeneratorSet gens_from(const Array& loxodromic, const std::vector<Array>& others,
                       const std::vector<std::string>& labels) {
  GeneratorSet gens;
  gens.loxodromic = matrix_from(loxodromic);
  for (const Array& m : others) gens.others.push_back(matrix_from(m));
  gens.labels = labels;
  for (std::size_t i = gens.labels.size(); i < gens.size(); ++i) gens.labels.push_back(gens.label(i));
  return gens;
}

py::object to_python(const io::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Field field_from(const std::string& name) {
  if (name == "real") return Field::Real;
  if (name == "complex") return Field::Complex;
  if (name == "quaternion") return Field::Quaternion;
  throw py::value_error("field must be 'real', 'complex' or 'quaternion'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quaternionic matrices preserving an indefinite Hermitian form";

  py::register_exception<Error>(m, "Sp21Error", PyExc_ValueError);

  m.def("mul", [](const Array& p, const Array& q) { return quat_to(quat_from(p) * quat_from(q)); },
        "Hamilton product");
  m.def("conj", [](const Array& q) { return quat_to(conj(quat_from(q))); });
  m.def("inv", [](const Array& q, double abs_tol) { return quat_to(inv(quat_from(q), Tolerance(abs_tol))); },
        py::arg("q"), py::arg("abs_tol") = 1e-9);
  m.def("matmul", [](const Array& a, const Array& b) { return matrix_to(matrix_from(a) * matrix_from(b)); });
  m.def("trace", [](const Array& a) { return quat_to(trace(matrix_from(a))); });
  m.def("herm_inner", [](const Array& p, const Array& q) {
    if (p.ndim() != 2 || q.ndim() != 2 || p.shape(0) != 3 || q.shape(0) != 3 || p.shape(1) != 4 ||
        q.shape(1) != 4) {
      throw py::value_error("expected vectors of shape (3, 4)");
    }
    QVec3 a;
    QVec3 b;
    for (int i = 0; i < 3; ++i) {
      a[static_cast<std::size_t>(i)] = Quat(p.at(i, 0), p.at(i, 1), p.at(i, 2), p.at(i, 3));
      b[static_cast<std::size_t>(i)] = Quat(q.at(i, 0), q.at(i, 1), q.at(i, 2), q.at(i, 3));
    }
    return quat_to(herm_inner(a, b));
  });
  m.def(
      "is_sp21",
      [](const Array& a, double abs_tol) {
        const Sp21Check check = is_sp21(matrix_from(a), Tolerance(abs_tol));
        return py::make_tuple(check.member, check.residual);
      },
      py::arg("a"), py::arg("abs_tol") = 1e-9);
  m.def("sp_inverse", [](const Array& a) { return matrix_to(sp_inverse(matrix_from(a))); });
  m.def("numeric_inverse", [](const Array& a) { return matrix_to(numeric_inverse(matrix_from(a))); });
  m.def("structure_identities", [](const Array& a) {
    const auto ids = structure_identities(matrix_from(a));
    return std::vector<double>(ids.begin(), ids.end());
  });
  m.def(
      "random_sp21", [](std::uint64_t seed, const std::string& field) {
        return matrix_to(random_sp21(seed, field_from(field)));
      },
      py::arg("seed"), py::arg("field") = "quaternion");

  m.def(
      "pair_case",
      [](const Array& a, const Array& b, double abs_tol) {
        const PairCase pc = pair_case(quat_from(a), quat_from(b), Tolerance(abs_tol));
        py::dict out;
        out["label"] = std::string(to_string(pc.label));
        out["satisfied"] = std::vector<bool>(pc.satisfied.begin(), pc.satisfied.end());
        out["r"] = pc.r ? py::cast(*pc.r) : py::none();
        out["a_star"] = pc.a_star ? py::cast(*pc.a_star) : py::none();
        out["b_star"] = pc.b_star ? py::cast(*pc.b_star) : py::none();
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("abs_tol") = 1e-9);

  m.def(
      "make_fixture",
      [](const std::string& case_tag, std::uint64_t seed, std::size_t generators, double lambda,
         std::optional<double> theta) {
        const auto tag = parse_fixture_case(case_tag);
        if (!tag) throw py::value_error("unknown fixture case '" + case_tag + "'");
        const GeneratorSet gens = make_fixture({*tag, seed, generators, lambda, theta});
        py::list others;
        for (const QMat3& g : gens.others) others.append(matrix_to(g));
        py::dict out;
        out["loxodromic"] = matrix_to(gens.loxodromic);
        out["generators"] = others;
        out["labels"] = gens.labels;
        return out;
      },
      py::arg("case"), py::arg("seed") = 0, py::arg("generators") = 2, py::arg("lam") = 2.0,
      py::arg("theta") = py::none());

  m.def(
      "trace_audit",
      [](const Array& loxodromic, const std::vector<Array>& others, std::size_t max_len, double abs_tol,
         const std::vector<std::string>& labels) {
        const GeneratorSet gens = gens_from(loxodromic, others, labels);
        return to_python(io::to_json(trace_audit(gens, max_len, Tolerance(abs_tol)), gens));
      },
      py::arg("loxodromic"), py::arg("generators"), py::arg("max_len") = 4, py::arg("abs_tol") = 1e-9,
      py::arg("labels") = std::vector<std::string>{});

  m.def(
      "decide",
      [](const Array& loxodromic, const std::vector<Array>& others, std::size_t audit_max_len, double abs_tol,
         const std::vector<std::string>& labels) {
        const GeneratorSet gens = gens_from(loxodromic, others, labels);
        DecideOptions options;
        options.tol = Tolerance(abs_tol);
        options.audit_max_len = audit_max_len;
        return to_python(io::to_json(decide(gens, options), gens));
      },
      py::arg("loxodromic"), py::arg("generators"), py::arg("audit_max_len") = 4, py::arg("abs_tol") = 1e-9,
      py::arg("labels") = std::vector<std::string>{});

  m.def(
      "falsify_unitarity",
      [](std::size_t trials, std::uint64_t seed) {
        return to_python(io::to_json(falsify_loxodromic_unitarity(trials, seed)));
      },
      py::arg("trials") = 1000, py::arg("seed") = 0);

  m.def("parse_group", [](const std::string& text) {
    const io::GroupDocument doc = io::parse_group(text);
    py::list others;
    for (const QMat3& g : doc.gens.others) others.append(matrix_to(g));
    py::dict out;
    out["tolerance"] = doc.tolerance;
    out["loxodromic"] = matrix_to(doc.gens.loxodromic);
    out["generators"] = others;
    out["labels"] = doc.gens.labels;
    return out;
  });
  m.def(
      "serialize_group",
      [](const Array& loxodromic, const std::vector<Array>& others, double tolerance,
         const std::vector<std::string>& labels) {
        return io::serialize_group(gens_from(loxodromic, others, labels), tolerance);
      },
      py::arg("loxodromic"), py::arg("generators"), py::arg("tolerance") = 1e-9,
      py::arg("labels") = std::vector<std::string>{});
}
