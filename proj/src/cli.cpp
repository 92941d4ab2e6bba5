#include "sp21kit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "sp21kit/io.hpp"

namespace sp21kit {

namespace {

using io::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Parse, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Quat parse_quat_arg(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(Errc::Parse, "bad quaternion component '" + item + "'");
    }
    if (used != item.size()) throw Error(Errc::Parse, "bad quaternion component '" + item + "'");
    parts.push_back(v);
  }
  if (parts.size() != 4) throw Error(Errc::Parse, "expected w,x,y,z");
  return Quat(parts[0], parts[1], parts[2], parts[3]);
}

template <class T>
std::string complex_text(const T& re, const T& im) {
  std::ostringstream os;
  os << re;
  if (im != 0) os << (im < 0 ? "-" : "+") << (im < 0 ? -im : im) << "i";
  return os.str();
}

template <class T>
std::string pair_case_line(const BasicPairCase<T>& pc) {
  std::string out(to_string(pc.label));
  if (pc.label == PairLabel::CaseII) {
    out += " a_*=" + complex_text(pc.a_star->first, pc.a_star->second);
    out += " b_*=" + complex_text(pc.b_star->first, pc.b_star->second);
  } else if (pc.label == PairLabel::CaseIII) {
    std::ostringstream os;
    os << *pc.r;
    out += " r=" + os.str();
  }
  return out;
}

template <class T>
json pair_case_json(const BasicPairCase<T>& pc) {
  auto num = [](const T& x) {
    if constexpr (std::is_same_v<T, double>) {
      return json(x);
    } else {
      return json(x.str());
    }
  };
  json out = {{"schema", io::kSchema}, {"kind", "pair_case"}, {"label", std::string(to_string(pc.label))}};
  out["satisfied"] = {pc.satisfied[0], pc.satisfied[1], pc.satisfied[2]};
  out["r"] = pc.r ? num(*pc.r) : json(nullptr);
  out["a_star"] = pc.a_star ? json::array({num(pc.a_star->first), num(pc.a_star->second)}) : json(nullptr);
  out["b_star"] = pc.b_star ? json::array({num(pc.b_star->first), num(pc.b_star->second)}) : json(nullptr);
  return out;
}

struct Globals {
  std::optional<double> tol;
  bool exact = false;
};

Tolerance effective_tolerance(const Globals& g, const io::GroupDocument& doc) {
  return Tolerance(g.tol.value_or(doc.tolerance));
}

int cmd_check(const Globals& g, const std::string& path, std::ostream& out) {
  const io::GroupDocument doc = io::parse_group(read_file(path));
  const Tolerance tol = effective_tolerance(g, doc);
  json rows = json::array();
  bool all = true;
  for (std::size_t i = 0; i < doc.gens.size(); ++i) {
    const QMat3& m = doc.gens.generator(i);
    json row = {{"generator", doc.gens.label(i)}};
    bool pass = false;
    if (g.exact) {
      RationalMat3 r;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) r(a, b) = to_rational(m(a, b));
      }
      const Sp21Check check = is_sp21(r);
      const auto defects = structure_identity_defects(r);
      json ids = json::array();
      bool ids_ok = true;
      for (const auto& d : defects) {
        ids.push_back(std::sqrt(d.norm2().convert_to<double>()));
        ids_ok = ids_ok && d.norm2() == 0;
      }
      pass = check.member && ids_ok;
      row["residual"] = check.residual;
      row["identities"] = ids;
    } else {
      const Sp21Check check = is_sp21(m, tol);
      const auto ids = structure_identities(m);
      const double n = max_entry_norm(m);
      const double worst = *std::max_element(ids.begin(), ids.end());
      pass = check.member && worst <= tol.bound(n * n);
      row["residual"] = check.residual;
      row["identities"] = ids;
    }
    row["member"] = pass;
    all = all && pass;
    rows.push_back(row);
  }
  json report = {{"schema", io::kSchema}, {"kind", "check"},       {"passed", all},
                 {"exact", g.exact},      {"tolerance", tol.abs_tol}, {"matrices", rows}};
  out << report.dump(2) << "\n";
  return all ? kExitOk : kExitFailed;
}

int cmd_audit(const Globals& g, const std::string& path, std::size_t max_len, std::optional<std::size_t> budget,
              unsigned threads, std::ostream& out) {
  const io::GroupDocument doc = io::parse_group(read_file(path));
  WordLimits limits;
  if (budget) {
    limits.budget = *budget;
    limits.max_len_cap = std::numeric_limits<std::size_t>::max();
  }
  const TraceAuditReport report = trace_audit(doc.gens, max_len, effective_tolerance(g, doc), limits, threads);
  out << io::to_json(report, doc.gens).dump(2) << "\n";
  return report.passed ? kExitOk : kExitFailed;
}

int cmd_decide(const Globals& g, const std::string& path, std::size_t max_len, std::ostream& out) {
  const io::GroupDocument doc = io::parse_group(read_file(path));
  DecideOptions options;
  options.tol = effective_tolerance(g, doc);
  options.audit_max_len = max_len;
  const CaseReport report = decide(doc.gens, options);
  out << io::to_json(report, doc.gens).dump(2) << "\n";
  if (is_certified(report.label)) return kExitOk;
  if (report.label == CaseLabel::HypothesisViolated) return kExitFailed;
  return kExitContradiction;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternionic hyperbolic plane toolkit: membership checks, trace audits and the complex-frame "
               "decision procedure"};
  app.name("sp21kit");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "Absolute tolerance (overrides the file value)")->check(CLI::PositiveNumber);
  app.add_flag("--exact", g.exact, "Use exact rational arithmetic where supported");

  std::string path;
  std::size_t max_len = 4;
  std::optional<std::size_t> budget;
  unsigned threads = 0;
  bool as_json = false;

  CLI::App* check = app.add_subcommand("check", "Membership residual and the 18 entry identities");
  check->add_option("path", path, "Group file")->required();

  CLI::App* audit = app.add_subcommand("audit", "Complex-trace audit over short words");
  audit->add_option("path", path, "Group file")->required();
  audit->add_option("--max-len", max_len, "Longest word length")->capture_default_str();
  audit->add_option("--budget", budget, "Total word budget; lifts the length cap");
  audit->add_option("--threads", threads, "Worker threads (0 = hardware)");

  CLI::App* decide_cmd = app.add_subcommand("decide", "Run the decision procedure");
  decide_cmd->add_option("path", path, "Group file")->required();
  decide_cmd->add_option("--max-len", max_len, "Trace audit length (0 skips)")->capture_default_str();

  std::string case_name;
  std::uint64_t seed = 0;
  std::string output;
  std::size_t generators = 2;
  double lambda = 2.0;
  std::optional<double> theta;
  CLI::App* fixture = app.add_subcommand("fixture", "Write a synthetic generator set");
  fixture->add_option("--case", case_name, "c1 | c2 | c31 | bd0_c | bd0_j | bd0_im")->required();
  fixture->add_option("--seed", seed, "Random seed");
  fixture->add_option("-o,--output", output, "Output file (default stdout)");
  fixture->add_option("--generators", generators, "Generators besides the loxodromic")->capture_default_str();
  fixture->add_option("--lambda", lambda, "Loxodromic dilation, > 1")->capture_default_str();
  fixture->add_option("--theta", theta, "Loxodromic rotation angle");

  std::string a_text;
  std::string b_text;
  CLI::App* classify = app.add_subcommand("classify-pair", "Classify a pair (a, b) with ab, ba complex");
  classify->add_option("--a", a_text, "w,x,y,z")->required()->allow_extra_args(false);
  classify->add_option("--b", b_text, "w,x,y,z")->required()->allow_extra_args(false);
  classify->add_flag("--json", as_json, "Print a JSON document");

  std::size_t trials = 1000;
  CLI::App* falsify = app.add_subcommand("falsify31", "Randomised search for loxodromics with complex traces "
                                                     "but non-complex rotation parts");
  falsify->add_option("--trials", trials, "Number of trials")->capture_default_str();
  falsify->add_option("--seed", seed, "Random seed");
  falsify->add_flag("--json", as_json, "Print a JSON document");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) return cmd_check(g, path, out);
    if (*audit) return cmd_audit(g, path, max_len, budget, threads, out);
    if (*decide_cmd) return cmd_decide(g, path, max_len, out);
    if (*fixture) {
      const auto tag = parse_fixture_case(case_name);
      if (!tag) {
        err << "unknown fixture case '" << case_name << "'\n";
        return kExitUsage;
      }
      FixtureSpec spec{*tag, seed, generators, lambda, theta};
      const std::string text = io::serialize_group(make_fixture(spec), g.tol.value_or(Tolerance{}.abs_tol));
      if (output.empty()) {
        out << text;
      } else {
        std::ofstream file(output, std::ios::binary);
        if (!(file << text)) {
          err << "cannot write " << output << "\n";
          return kExitUsage;
        }
      }
      return kExitOk;
    }
    if (*classify) {
      const Quat a = parse_quat_arg(a_text);
      const Quat b = parse_quat_arg(b_text);
      if (g.exact) {
        const RationalPairCase pc = pair_case_oracle(to_rational(a), to_rational(b));
        out << (as_json ? pair_case_json(pc).dump(2) : pair_case_line(pc)) << "\n";
      } else {
        const PairCase pc = pair_case(a, b, Tolerance(g.tol.value_or(Tolerance{}.abs_tol)));
        out << (as_json ? pair_case_json(pc).dump(2) : pair_case_line(pc)) << "\n";
      }
      return kExitOk;
    }
    if (*falsify) {
      const FalsifierReport report = falsify_loxodromic_unitarity(trials, seed);
      if (as_json) {
        out << io::to_json(report).dump(2) << "\n";
      } else {
        out << report.counterexamples.size() << " counterexamples (" << report.converged << " of "
            << report.trials << " trials converged)\n";
      }
      return report.counterexamples.empty() ? kExitOk : kExitFailed;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    switch (e.code()) {
      case Errc::Parse:
      case Errc::CapExceeded:
      case Errc::InfeasibleSpec:
      case Errc::ConstraintViolated:
        return kExitUsage;
      default:
        return kExitFailed;
    }
  }
  return kExitUsage;
}

}  // namespace sp21kit
