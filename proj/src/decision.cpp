#include "sp21kit/decision.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace sp21kit {

namespace {

using Complex = std::complex<double>;

constexpr double kMaxCondition = 1e8;
constexpr double kAngleTol = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string entry_name(int r, int c) {
  static constexpr char kLetters[] = "abcdefghl";
  return std::string(1, kLetters[3 * r + c]);
}

// Eigenvalue-like diagonal of the loxodromic: (lambda mu, nu, mu / lambda).
std::array<Complex, 3> loxodromic_diagonal(const LoxodromicData& lox) {
  if (!lox.theta || !lox.phi) {
    throw Error(Errc::ConstraintViolated, "mu and nu must be complex");
  }
  const Complex mu = complex_part(lox.mu);
  const Complex nu = complex_part(lox.nu);
  return {lox.lambda * mu, nu, mu / lox.lambda};
}

double entry_bound(const Tolerance& tol, const QMat3& m) { return tol.abs_tol * (1.0 + max_entry_norm(m)); }

double product_bound(const Tolerance& tol, const QMat3& m) {
  const double n = max_entry_norm(m);
  return tol.abs_tol * (1.0 + n * n);
}

bool is_diagonal(const QMat3& m, const Tolerance& tol) {
  const double bound = entry_bound(tol, m);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (r != c && norm(m(r, c)) > bound) return false;
    }
  }
  return true;
}

Quat unit(const Quat& q) { return q / norm(q); }

}  // namespace

DiagonalSolution solve_diagonal_entries(const Quat& tr_b, const Quat& tr_ab, const Quat& tr_ainv_b,
                                        const LoxodromicData& lox, const Tolerance& tol) {
  const auto d = loxodromic_diagonal(lox);
  const std::array<const Quat*, 3> traces{&tr_b, &tr_ab, &tr_ainv_b};
  static constexpr const char* kNames[] = {"tr(B)", "tr(AB)", "tr(A^-1 B)"};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!is_complex(*traces[i], tol)) {
      throw Error(Errc::NonComplexTraces, std::string(kNames[i]) + " = " + to_string(*traces[i]) +
                                              " is not complex");
    }
  }

  Eigen::Matrix3cd system;
  for (int k = 0; k < 3; ++k) {
    system(0, k) = 1.0;
    system(1, k) = d[static_cast<std::size_t>(k)];
    system(2, k) = 1.0 / d[static_cast<std::size_t>(k)];
  }
  const Eigen::PartialPivLU<Eigen::Matrix3cd> lu(system);
  const double rcond = lu.rcond();
  const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition < kMaxCondition)) {
    throw Error(Errc::SingularSystem, "trace system condition estimate " + fmt(condition));
  }

  // Quaternion right-hand sides split as z1 + z2 j; the coefficients are
  // complex and act on the left, so both halves solve independently.
  Eigen::Matrix<Complex, 3, 2> rhs;
  for (int i = 0; i < 3; ++i) {
    rhs(i, 0) = complex_part(*traces[static_cast<std::size_t>(i)]);
    rhs(i, 1) = j_coefficient(*traces[static_cast<std::size_t>(i)]);
  }
  const Eigen::Matrix<Complex, 3, 2> x = lu.solve(rhs);

  DiagonalSolution out;
  out.a = from_complex_pair(x(0, 0), x(0, 1));
  out.e = from_complex_pair(x(1, 0), x(1, 1));
  out.l = from_complex_pair(x(2, 0), x(2, 1));
  out.condition = condition;
  return out;
}

MixedProducts mixed_products(const QMat3& b1, const QMat3& b2, const LoxodromicData& lox, int entry,
                             const Tolerance& tol) {
  if (entry < 0 || entry > 2) throw Error(Errc::ConstraintViolated, "entry must be 0, 1 or 2");
  const auto d = loxodromic_diagonal(lox);
  const QMat3 a = loxodromic_matrix(lox.lambda, lox.mu, lox.nu);
  const Quat i = Quat::unit_i();

  MixedProducts out;
  out.entry = entry;
  std::array<int, 2> others{};
  for (int m = 0, s = 0; m < 3; ++m) {
    if (m != entry) others[static_cast<std::size_t>(s++)] = m;
  }

  // Columns 2s, 2s+1 hold X Y and X i Y for X = B1(entry, m), Y = B2(m, entry).
  std::array<bool, 4> active{};
  for (std::size_t s = 0; s < 2; ++s) {
    const int m = others[s];
    const Quat& x = b1(entry, m);
    const Quat& y = b2(m, entry);
    const std::string left = entry_name(entry, m) + "1";
    const std::string right = entry_name(m, entry) + "2";
    out.names[2 * s] = left + right;
    out.names[2 * s + 1] = left + "i" + right;
    out.direct[2 * s] = x * y;
    out.direct[2 * s + 1] = x * i * y;
    if (x == Quat() || y == Quat()) {
      out.recovered[2 * s] = Quat();
      out.recovered[2 * s + 1] = Quat();
      continue;
    }
    active[2 * s] = true;
    const Complex dm = d[static_cast<std::size_t>(m)];
    double max_sine = 0.0;
    for (int n = 1; n <= 4; ++n) {
      const Complex p = std::pow(dm, n);
      max_sine = std::max(max_sine, std::abs(p.imag()) / std::abs(p));
    }
    if (max_sine <= kAngleTol) {
      out.degenerate = true;
    } else {
      active[2 * s + 1] = true;
    }
  }

  std::vector<std::size_t> columns;
  for (std::size_t k = 0; k < 4; ++k) {
    if (active[k]) columns.push_back(k);
  }
  if (columns.empty()) return out;

  Eigen::Matrix<double, 4, Eigen::Dynamic> coef(4, static_cast<Eigen::Index>(columns.size()));
  Eigen::Matrix4d rhs;
  QMat3 power = QMat3::identity();
  for (int n = 1; n <= 4; ++n) {
    power = power * a;
    const QMat3 product = b1 * power * b2;
    const Quat known = b1(entry, entry) * from_complex(std::pow(d[static_cast<std::size_t>(entry)], n)) *
                       b2(entry, entry);
    const Quat z = product(entry, entry) - known;
    rhs.row(n - 1) << z.w(), z.x(), z.y(), z.z();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const std::size_t k = columns[c];
      const Complex p = std::pow(d[static_cast<std::size_t>(others[k / 2])], n);
      coef(n - 1, static_cast<Eigen::Index>(c)) = k % 2 == 0 ? p.real() : p.imag();
    }
  }
  // Column equilibration; powers of lambda and 1/lambda differ widely.
  Eigen::VectorXd scale(columns.size());
  for (Eigen::Index c = 0; c < coef.cols(); ++c) {
    scale(c) = coef.col(c).cwiseAbs().maxCoeff();
    if (scale(c) == 0.0) throw Error(Errc::SingularSystem, "zero column in product system");
    coef.col(c) /= scale(c);
  }

  Eigen::MatrixXd solution;
  if (columns.size() == 4) {
    const Eigen::Matrix4d square = coef;
    const Eigen::PartialPivLU<Eigen::Matrix4d> lu(square);
    const double rcond = lu.rcond();
    out.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(out.condition < kMaxCondition)) {
      throw Error(Errc::SingularSystem, "product system condition estimate " + fmt(out.condition));
    }
    solution = lu.solve(rhs);
  } else {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(coef);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    out.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(out.condition < kMaxCondition)) {
      throw Error(Errc::SingularSystem, "reduced product system condition estimate " + fmt(out.condition));
    }
    solution = coef.colPivHouseholderQr().solve(rhs);
  }

  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto row = static_cast<Eigen::Index>(c);
    const double s = scale(row);
    out.recovered[columns[c]] =
        Quat(solution(row, 0) / s, solution(row, 1) / s, solution(row, 2) / s, solution(row, 3) / s);
  }
  for (std::size_t k = 0; k < 4; ++k) {
    if (!out.recovered[k]) continue;
    out.all_complex = out.all_complex && is_complex(*out.recovered[k], tol);
    out.max_mismatch = std::max(out.max_mismatch, norm(*out.recovered[k] - out.direct[k]));
  }
  return out;
}

ConjBStructure conj_b_structure(const QMat3& m, const Tolerance& tol) {
  const Quat &a = m(0, 0), &b = m(0, 1), &c = m(0, 2);
  const Quat &d = m(1, 0), &e = m(1, 1), &f = m(1, 2);
  const Quat &g = m(2, 0), &h = m(2, 1), &l = m(2, 2);
  const PairCase pc = pair_case(b, d, tol);
  if (!pc.satisfied[2]) throw Error(Errc::ConstraintViolated, "d is not a real multiple of conj(b)");
  if (norm(f) <= tol.abs_tol || norm(h) <= tol.abs_tol) {
    throw Error(Errc::ConstraintViolated, "f and h must be nonzero");
  }

  ConjBStructure out;
  const double nb2 = b.norm2();
  out.r1 = (d * b).w() / nb2;
  out.r2 = (f * b).w() / nb2;
  out.b = b;
  out.a = a;
  out.c = c;
  out.e_real = e.w();
  const double r1 = out.r1;
  const double r2 = out.r2;

  out.residuals = {
      {"d=r_1 conj(b)", norm(d - r1 * conj(b))},
      {"f=r_2 conj(b)", norm(f - r2 * conj(b))},
      {"h=r_1 r_2 b", norm(h - r1 * r2 * b)},
      {"r_1 r_2=(1-|e|^2)/(2|b|^2)", std::abs(r1 * r2 - (1.0 - e.norm2()) / (2.0 * nb2))},
      {"l=r_2^2 a", norm(l - r2 * r2 * a)},
      {"g=r_1^2 c", norm(g - r1 * r1 * c)},
  };
  if (is_complex(c, tol)) out.residuals.emplace_back("e real", std::hypot(e.x(), e.y(), e.z()));

  const double bound = product_bound(tol, m);
  for (const auto& [name, residual] : out.residuals) {
    if (residual > bound) {
      throw Error(Errc::StructureMismatch, "relation " + name + " fails with residual " + fmt(residual));
    }
  }
  return out;
}

Diagnostic imaginary_c_contradiction(const QMat3& m, const LoxodromicData& lox, const Tolerance& tol,
                                     double r2_tol) {
  const ConjBStructure s = conj_b_structure(m, tol);
  if (is_complex(s.c, tol) || !is_pure_imaginary(s.c, tol)) {
    throw Error(Errc::ConstraintViolated, "c must be purely imaginary and not complex");
  }
  const double nb2 = s.b.norm2();
  const Quat entry13 = (m * m)(0, 2);
  const double lhs = 2.0 * entry13.w();
  const double rhs = nb2 * (s.r2 + 1.0) * (s.r2 + 1.0);

  Diagnostic out;
  out.values = {{"r_2", s.r2}, {"2Re((B^2)_13)", lhs}, {"|b|^2(r_2+1)^2", rhs}};
  if (std::abs(s.r2 + 1.0) > r2_tol) {
    out.rule = "r2-minus-one";
    out.message = "r_2 = " + fmt(s.r2) +
                  " differs from -1, so the (1,2) entry of B^2 is nonzero while the (1,3) entry has "
                  "nonzero real part; no consistent configuration exists";
    return out;
  }
  const QMat3 ba = m * loxodromic_matrix(lox.lambda, lox.mu, lox.nu);
  const double left = norm(ba(0, 1));
  const double right = norm(ba(1, 2));
  out.rule = "modulus-contradiction";
  out.message = "BA keeps the same shape, so |(BA)_12| = |(BA)_23| would force |b| = |b|/lambda, i.e. lambda = 1";
  out.values.insert(out.values.end(), {{"|b|", left}, {"|b|/lambda", right}, {"lambda", lox.lambda}});
  return out;
}

BdZeroForm bd_zero_reduce(const QMat3& m, const Tolerance& tol) {
  const Quat &b = m(0, 1), &d = m(1, 0), &f = m(1, 2), &h = m(2, 1);
  const double pbound = product_bound(tol, m);
  if (norm(b) * norm(d) > pbound || norm(f) * norm(h) > pbound) {
    throw Error(Errc::ConstraintViolated, "bd and fh must vanish");
  }
  const auto defects = structure_identity_defects(m);
  BdZeroForm out{m(0, 0), m(0, 2), m(1, 1), m(2, 0), m(2, 2), norm(defects[5]), norm(defects[14])};

  const double bound = entry_bound(tol, m);
  const double largest = std::max({norm(b), norm(d), norm(f), norm(h)});
  if (largest <= bound) return out;
  if (out.identity6_residual > pbound) {
    throw Error(Errc::ReductionFailed, "structure identity 6 (d conj(c) + e conj(b) + f conj(a) = 0) fails "
                                       "with residual " + fmt(out.identity6_residual));
  }
  if (out.identity15_residual > pbound) {
    throw Error(Errc::ReductionFailed, "structure identity 15 (conj(h) c + conj(e) f + conj(b) l = 0) fails "
                                       "with residual " + fmt(out.identity15_residual));
  }
  throw Error(Errc::ReductionFailed, "b, d, f, h do not vanish (largest " + fmt(largest) + ")");
}

Diagnostic theta_mod_pi_check(const QMat3& m, const LoxodromicData& lox, const Tolerance& tol) {
  if (!lox.theta) throw Error(Errc::ConstraintViolated, "mu must be complex");
  const Quat &c = m(0, 2), &g = m(2, 0);
  if (norm(c) <= tol.abs_tol) throw Error(Errc::ConstraintViolated, "c must be nonzero");
  if (!is_pure_imaginary(c, tol) || is_complex(c, tol)) {
    throw Error(Errc::ConstraintViolated, "c must be purely imaginary and not complex");
  }
  const double r = (g * c).w() / c.norm2();
  if (norm(g - r * conj(c)) > product_bound(tol, m)) {
    throw Error(Errc::ConstraintViolated, "g is not a real multiple of conj(c)");
  }

  Diagnostic out;
  const double sine = std::sin(*lox.theta);
  out.values = {{"theta", *lox.theta}, {"sin(theta)", sine}};
  if (std::abs(sine) <= kAngleTol) {
    out.rule = "theta-mod-pi";
    out.message = "theta is 0 mod pi, so the loxodromic is diag(+-lambda, 1, +-1/lambda)";
    return out;
  }
  const Quat cic = c * Quat::unit_i() * c;
  const QMat3 a = loxodromic_matrix(lox.lambda, lox.mu, lox.nu);
  const Quat bab11 = (m * a * m)(0, 0);
  out.values.insert(out.values.end(), {{"jk(cic)", jk_magnitude(cic)}, {"jk((BAB)_11)", jk_magnitude(bab11)}});
  if (is_complex(bab11, tol) && is_complex(cic, tol)) {
    out.rule = "theta-forces-c-complex-or-cj";
    out.message = "c e^{i theta} conj(c) complex with sin(theta) != 0 forces c i c complex, so c lies in C or "
                  "Cj (" + std::string(to_string(qiq_case(c, tol))) + "), contradicting the assumed shape of c";
    return out;
  }
  out.rule = "bab-entry-not-complex";
  out.message = "the (1,1) entry of BAB is not complex; the trace hypothesis fails";
  return out;
}

std::string_view to_string(FrameFamily family) noexcept {
  switch (family) {
    case FrameFamily::Standard: return "Standard";
    case FrameFamily::MiddleTwist: return "MiddleTwist";
    case FrameFamily::FirstTwist: return "FirstTwist";
    case FrameFamily::MiddleScaledByConjB: return "MiddleScaledByConjB";
    case FrameFamily::FirstScaledByImaginaryC: return "FirstScaledByImaginaryC";
  }
  return "?";
}

std::string_view to_string(CaseLabel label) noexcept {
  switch (label) {
    case CaseLabel::AllComplex: return "AllComplex";
    case CaseLabel::MiddleJTwist: return "MiddleJTwist";
    case CaseLabel::ConjBFrame: return "ConjBFrame";
    case CaseLabel::BdZeroComplex: return "BdZeroComplex";
    case CaseLabel::BdZeroJTwist: return "BdZeroJTwist";
    case CaseLabel::BdZeroImaginaryC: return "BdZeroImaginaryC";
    case CaseLabel::Inconsistent: return "Inconsistent";
    case CaseLabel::HypothesisViolated: return "HypothesisViolated";
    case CaseLabel::CommonFixedPoint: return "CommonFixedPoint";
  }
  return "?";
}

bool is_certified(CaseLabel label) noexcept {
  switch (label) {
    case CaseLabel::AllComplex:
    case CaseLabel::MiddleJTwist:
    case CaseLabel::ConjBFrame:
    case CaseLabel::BdZeroComplex:
    case CaseLabel::BdZeroJTwist:
    case CaseLabel::BdZeroImaginaryC:
      return true;
    default:
      return false;
  }
}

namespace {

double frame_residual(const QMat3& m, const std::array<Quat, 3>& u, const std::array<Quat, 3>& u_inv) {
  double out = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out = std::max(out, jk_magnitude(u_inv[static_cast<std::size_t>(r)] * m(r, c) *
                                       u[static_cast<std::size_t>(c)]));
    }
  }
  return out;
}

double complex_residual(const QMat3& m) {
  double out = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out = std::max(out, jk_magnitude(m(r, c)));
  }
  return out;
}

}  // namespace

CertificateCheck verify_certificate(const GeneratorSet& gens, const FrameCertificate& cert) {
  const std::array<Quat, 3> u_inv{inv(cert.u[0]), inv(cert.u[1]), inv(cert.u[2])};
  CertificateCheck out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const double r = frame_residual(gens.generator(i), cert.u, u_inv);
    out.frame_residuals.push_back(r);
    out.max_residual = std::max(out.max_residual, r);
  }
  if (cert.sp_conjugator) {
    const QMat3& t = *cert.sp_conjugator;
    const Sp21Check check = is_sp21(t);
    out.conjugator_sp_residual = check.residual;
    out.max_residual = std::max(out.max_residual, check.residual);
    const QMat3 t_inv = sp_inverse_unchecked(t);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const double r = complex_residual(t_inv * gens.generator(i) * t);
      out.conjugated_residuals.push_back(r);
      out.max_residual = std::max(out.max_residual, r);
    }
  }
  return out;
}

namespace {

FrameCertificate make_certificate(FrameFamily family, const std::array<Quat, 3>& u, bool with_conjugator) {
  FrameCertificate cert;
  cert.family = family;
  cert.u = u;
  if (with_conjugator) cert.sp_conjugator = QMat3::diagonal(u[0], u[1], u[2]);
  return cert;
}

class Pipeline {
 public:
  Pipeline(const GeneratorSet& gens, const DecideOptions& options) : gens_(gens), opt_(options) {}

  CaseReport run();

 private:
  CaseReport fail(CaseLabel label, std::string rule, std::string message,
                  std::vector<std::pair<std::string, double>> values = {}) {
    report_.label = label;
    report_.diagnostics.push_back({std::move(rule), std::move(message), std::move(values)});
    return report_;
  }
  void note(std::string rule, std::string message, std::vector<std::pair<std::string, double>> values = {}) {
    report_.diagnostics.push_back({std::move(rule), std::move(message), std::move(values)});
  }

  CaseReport finish(CaseLabel label, FrameCertificate cert);
  std::optional<CaseReport> preflight();
  CaseReport branch_bd_nonzero(std::size_t pivot);
  CaseReport branch_bd_zero();

  const GeneratorSet& gens_;
  const DecideOptions& opt_;
  CaseReport report_;
  LoxodromicData lox_;
  std::vector<std::size_t> nonpower_;
};

CaseReport Pipeline::finish(CaseLabel label, FrameCertificate cert) {
  const CertificateCheck check = verify_certificate(gens_, cert);
  report_.residuals = check.frame_residuals;
  report_.check = check;
  report_.certificate = std::move(cert);
  if (check.max_residual > opt_.certificate_tol) {
    return fail(CaseLabel::HypothesisViolated, "certificate",
                "frame certificate does not verify", {{"max residual", check.max_residual}});
  }
  report_.label = label;
  return report_;
}

std::optional<CaseReport> Pipeline::preflight() {
  const Tolerance& tol = opt_.tol;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const Sp21Check check = is_sp21(gens_.generator(i), tol);
    if (!check.member) {
      return fail(CaseLabel::HypothesisViolated, "membership",
                  "generator " + gens_.label(i) + " does not preserve the form", {{"residual", check.residual}});
    }
  }

  LoxodromicUnitarity unitarity;
  try {
    lox_ = loxodromic_extract(gens_.loxodromic, tol);
    unitarity = check_loxodromic_unitarity(gens_.loxodromic, tol);
  } catch (const Error& e) {
    return fail(CaseLabel::HypothesisViolated, "loxodromic-form", e.what());
  }
  if (!unitarity.holds_hypothesis) {
    return fail(CaseLabel::HypothesisViolated, "loxodromic-unitary",
                "tr(A^" + std::to_string(unitarity.failing_power) + ") is not complex",
                {{"jk(tr A^n)", unitarity.trace_jk[static_cast<std::size_t>(unitarity.failing_power - 1)]}});
  }
  if (!unitarity.conclusion) {
    return fail(CaseLabel::Inconsistent, "loxodromic-unitary",
                "complex traces of A..A^4 with mu or nu outside C", {{"jk(mu)", unitarity.mu_jk},
                                                                     {"jk(nu)", unitarity.nu_jk}});
  }
  if (!lox_.normalized) {
    note("loxodromic-normalization", "nu != mu^-2; solvers use the general pair (arg mu, arg nu)");
  }

  if (opt_.audit_max_len > 0) {
    const TraceAuditReport audit = trace_audit(gens_, opt_.audit_max_len, tol, opt_.limits);
    if (!audit.passed) {
      return fail(CaseLabel::HypothesisViolated, "trace-audit",
                  "tr(" + to_string(audit.worst_word, gens_.labels) + ") is not complex",
                  {{"max jk residual", audit.max_jk_residual},
                   {"words checked", static_cast<double>(audit.words_checked)}});
    }
    note("trace-audit", "traces complex for all words up to length " + std::to_string(audit.max_len),
         {{"max jk residual", audit.max_jk_residual}, {"words checked", static_cast<double>(audit.words_checked)}});
  }

  for (std::size_t i = 1; i < gens_.size(); ++i) {
    if (!is_diagonal(gens_.generator(i), tol)) nonpower_.push_back(i);
  }
  for (std::size_t i : nonpower_) {
    const QMat3& m = gens_.generator(i);
    const double bound = entry_bound(tol, m);
    if (norm(m(0, 2)) <= bound || norm(m(2, 0)) <= bound) {
      const bool c_zero = norm(m(0, 2)) <= bound;
      return fail(CaseLabel::CommonFixedPoint, "shared-fixed-point",
                  c_zero ? "c = 0 forces f = 0, so " + gens_.label(i) + " fixes 0 together with A"
                         : "g = 0 forces h = 0, so " + gens_.label(i) + " fixes infinity together with A",
                  {{"|c|", norm(m(0, 2))}, {"|g|", norm(m(2, 0))}});
    }
  }

  const QMat3 a_inv = sp_inverse_unchecked(gens_.loxodromic);
  for (std::size_t i = 1; i < gens_.size(); ++i) {
    const QMat3& m = gens_.generator(i);
    DiagonalSolution sol;
    try {
      sol = solve_diagonal_entries(trace(m), trace(gens_.loxodromic * m), trace(a_inv * m), lox_, tol);
    } catch (const Error& e) {
      if (e.code() == Errc::NonComplexTraces) return fail(CaseLabel::HypothesisViolated, "diagonal-solve", e.what());
      note("diagonal-solve", std::string("skipped for ") + gens_.label(i) + ": " + e.what());
      continue;
    }
    const double mismatch = std::max({norm(sol.a - m(0, 0)), norm(sol.e - m(1, 1)), norm(sol.l - m(2, 2))});
    const bool complex = is_complex(sol.a, opt_.tol) && is_complex(sol.e, opt_.tol) && is_complex(sol.l, opt_.tol);
    if (mismatch > opt_.certificate_tol * (1.0 + max_entry_norm(m)) || !complex) {
      return fail(CaseLabel::HypothesisViolated, "diagonal-solve",
                  "diagonal of " + gens_.label(i) + " is not the complex solution of the trace system",
                  {{"mismatch", mismatch}, {"condition", sol.condition}});
    }
  }
  return std::nullopt;
}

CaseReport Pipeline::branch_bd_nonzero(std::size_t pivot) {
  const Tolerance& tol = opt_.tol;
  const QMat3& m = gens_.generator(pivot);
  const std::string name = gens_.label(pivot);

  double worst = 0.0;
  std::size_t solved = 0;
  std::size_t degenerate = 0;
  for (std::size_t j : nonpower_) {
    for (int entry = 0; entry < 3; ++entry) {
      MixedProducts mp;
      try {
        mp = mixed_products(m, gens_.generator(j), lox_, entry, tol);
      } catch (const Error& e) {
        note("mixed-products", std::string(e.what()));
        continue;
      }
      if (!mp.all_complex) {
        return fail(CaseLabel::HypothesisViolated, "mixed-products",
                    "products recovered from the diagonal of " + name + " A^n " + gens_.label(j) +
                        " are not complex",
                    {{"mismatch", mp.max_mismatch}});
      }
      worst = std::max(worst, mp.max_mismatch);
      ++solved;
      if (mp.degenerate) ++degenerate;
    }
  }
  note("mixed-products", "off-diagonal products recovered from the diagonal of B1 A^n B2",
       {{"systems", static_cast<double>(solved)},
        {"reduced systems", static_cast<double>(degenerate)},
        {"max mismatch", worst}});

  const PairCase pc = pair_case(m(0, 1), m(1, 0), tol);
  note("pair-classification", "pair (b, d) of " + name + " is " + std::string(to_string(pc.label)));
  const Quat one(1.0);
  switch (pc.label) {
    case PairLabel::CaseI: {
      // Identity (2) gives c conj(d) = -(a conj(f) + b conj(e)).
      const Quat c_derived = -(m(0, 0) * conj(m(1, 2)) + m(0, 1) * conj(m(1, 1))) * inv(conj(m(1, 0)), tol);
      note("complex-propagation", "complexness of b, d propagates to c and g through identities 2 and 13",
           {{"|c - derived c|", norm(c_derived - m(0, 2))}});
      return finish(CaseLabel::AllComplex, make_certificate(FrameFamily::Standard, {one, one, one}, true));
    }
    case PairLabel::CaseII:
      return finish(CaseLabel::MiddleJTwist,
                    make_certificate(FrameFamily::MiddleTwist, {one, Quat::unit_j(), one}, true));
    case PairLabel::CaseIII: {
      ConjBStructure s;
      try {
        s = conj_b_structure(m, tol);
      } catch (const Error& e) {
        return fail(CaseLabel::HypothesisViolated, "conj-b-structure", e.what());
      }
      note("conj-b-structure", "d = r_1 conj(b), f = r_2 conj(b) for " + name, {{"r_1", s.r1}, {"r_2", s.r2}});
      const double t = lox_.theta.value_or(0.0);
      note("theta-mod-half-pi", "b i d complex would force b into C or Cj, so 2 theta = 0 mod pi",
           {{"sin(2 theta)", std::sin(2.0 * t)}});
      if (is_complex(s.c, tol)) {
        return finish(CaseLabel::ConjBFrame,
                      make_certificate(FrameFamily::MiddleScaledByConjB, {one, unit(conj(s.b)), one}, true));
      }
      if (is_pure_imaginary(s.c, tol)) {
        report_.label = CaseLabel::Inconsistent;
        report_.diagnostics.push_back(imaginary_c_contradiction(m, lox_, tol));
        return report_;
      }
      return fail(CaseLabel::HypothesisViolated, "conj-b-structure",
                  "c is neither complex nor purely imaginary although cg must be complex");
    }
    case PairLabel::HypothesisViolated:
      break;
  }
  return fail(CaseLabel::HypothesisViolated, "pair-classification",
              "bd or db is not complex for " + name,
              {{"jk(bd)", jk_magnitude(m(0, 1) * m(1, 0))}, {"jk(db)", jk_magnitude(m(1, 0) * m(0, 1))}});
}

CaseReport Pipeline::branch_bd_zero() {
  const Tolerance& tol = opt_.tol;
  for (std::size_t i : nonpower_) {
    try {
      bd_zero_reduce(gens_.generator(i), tol);
    } catch (const Error& e) {
      return fail(CaseLabel::HypothesisViolated, "bd-zero-reduction", gens_.label(i) + ": " + e.what());
    }
  }
  note("bd-zero-reduction", "b = d = f = h = 0 for every generator");

  const std::size_t pivot = nonpower_.front();
  const QMat3& m = gens_.generator(pivot);
  const PairCase pc = pair_case(m(0, 2), m(2, 0), tol);
  note("pair-classification", "pair (c, g) of " + gens_.label(pivot) + " is " + std::string(to_string(pc.label)));
  const Quat one(1.0);
  switch (pc.label) {
    case PairLabel::CaseI:
      return finish(CaseLabel::BdZeroComplex, make_certificate(FrameFamily::Standard, {one, one, one}, true));
    case PairLabel::CaseII:
      note("conjugator-not-j-unitary", "diag(j, 1, 1) does not preserve the form; the frame certifies the family only");
      return finish(CaseLabel::BdZeroJTwist, make_certificate(FrameFamily::FirstTwist, {Quat::unit_j(), one, one}, false));
    case PairLabel::CaseIII: {
      const Quat& c = m(0, 2);
      if (!is_pure_imaginary(c, tol)) {
        return fail(CaseLabel::HypothesisViolated, "bd-zero-reduction",
                    "g = r conj(c) with c neither complex nor purely imaginary");
      }
      const Diagnostic theta = theta_mod_pi_check(m, lox_, tol);
      report_.diagnostics.push_back(theta);
      if (theta.rule == "theta-forces-c-complex-or-cj") {
        report_.label = CaseLabel::Inconsistent;
        return report_;
      }
      if (theta.rule != "theta-mod-pi") {
        report_.label = CaseLabel::HypothesisViolated;
        return report_;
      }
      double worst = 0.0;
      for (std::size_t i : nonpower_) worst = std::max(worst, std::hypot(gens_.generator(i)(0, 0).x(),
                                                                         gens_.generator(i)(0, 0).y(),
                                                                         gens_.generator(i)(0, 0).z()));
      if (worst > product_bound(tol, m)) {
        return fail(CaseLabel::HypothesisViolated, "identity-3-real-a",
                    "Re(ca) = 0 with c purely imaginary forces a real", {{"max |Im a|", worst}});
      }
      note("identity-3-real-a", "a is real for every generator", {{"max |Im a|", worst}});
      note("conjugator-not-j-unitary",
           "diag(c/|c|, 1, 1) does not preserve the form; the frame certifies the family only");
      return finish(CaseLabel::BdZeroImaginaryC,
                    make_certificate(FrameFamily::FirstScaledByImaginaryC, {unit(c), one, one}, false));
    }
    case PairLabel::HypothesisViolated:
      break;
  }
  return fail(CaseLabel::HypothesisViolated, "pair-classification",
              "cg or gc is not complex for " + gens_.label(pivot));
}

CaseReport Pipeline::run() {
  if (auto early = preflight()) return *early;
  const Quat one(1.0);
  if (nonpower_.empty()) {
    note("elementary", "every generator is diagonal; the group fixes 0 and infinity");
    return finish(CaseLabel::AllComplex, make_certificate(FrameFamily::Standard, {one, one, one}, true));
  }

  std::optional<std::size_t> pivot;
  std::optional<std::size_t> borderline;
  for (std::size_t i : nonpower_) {
    const QMat3& m = gens_.generator(i);
    const double bd = norm(m(0, 1)) * norm(m(1, 0));
    const double low = entry_bound(opt_.tol, m);
    if (bd > 1e3 * low) {
      pivot = i;
      break;
    }
    if (bd > low && !borderline) borderline = i;
  }
  if (pivot) return branch_bd_nonzero(*pivot);
  if (!borderline) return branch_bd_zero();

  const CaseReport base = report_;
  const QMat3& m = gens_.generator(*borderline);
  const double bd = norm(m(0, 1)) * norm(m(1, 0));
  CaseReport nonzero = branch_bd_nonzero(*borderline);
  report_ = base;
  CaseReport zero = branch_bd_zero();
  CaseReport& chosen = is_certified(nonzero.label) || !is_certified(zero.label) ? nonzero : zero;
  chosen.diagnostics.insert(chosen.diagnostics.begin(),
                            {"borderline-branch", "|b||d| lies in the borderline band; both branches tried",
                             {{"|b||d|", bd}}});
  return chosen;
}

}  // namespace

CaseReport decide(const GeneratorSet& gens, const DecideOptions& options) {
  Pipeline pipeline(gens, options);
  return pipeline.run();
}

}  // namespace sp21kit
