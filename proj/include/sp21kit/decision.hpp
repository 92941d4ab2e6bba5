#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sp21kit/classify.hpp"
#include "sp21kit/kleinian.hpp"

namespace sp21kit {

/// A structured finding emitted by the decision pipeline. `rule` names the
/// argument that fired; `values` carries the numeric witnesses.
struct Diagnostic {
  std::string rule;
  std::string message;
  std::vector<std::pair<std::string, double>> values;
};

// ---------------------------------------------------------------------------
// Diagonal entries from the traces of B, AB and A^{-1}B.

struct DiagonalSolution {
  Quat a, e, l;
  double condition = 0.0;
};

/// Solves
///   tr(B)      = a + e + l
///   tr(AB)     = (lambda mu) a + nu e + (mu / lambda) l
///   tr(A^-1 B) = (lambda mu)^-1 a + nu^-1 e + (mu / lambda)^-1 l
/// for complex mu, nu. Throws NonComplexTraces when a trace leaves C and
/// SingularSystem when the condition estimate reaches 1e8.
DiagonalSolution solve_diagonal_entries(const Quat& tr_b, const Quat& tr_ab, const Quat& tr_ainv_b,
                                        const LoxodromicData& lox, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Off-diagonal products recovered from the diagonal of B1 A^n B2, n = 1..4.

struct MixedProducts {
  int entry = 0;  // 0, 1, 2 for the (1,1), (2,2), (3,3) entry
  std::array<std::string, 4> names;             // e.g. b1d2, b1id2, c1g2, c1ig2
  std::array<std::optional<Quat>, 4> recovered;  // empty when undetermined
  std::array<Quat, 4> direct;                    // products multiplied out
  bool degenerate = false;  // a sine column vanished; a reduced system was solved
  bool all_complex = true;  // every recovered product is complex
  double max_mismatch = 0.0;
  double condition = 0.0;
};

/// Requires complex mu and nu. Works with the general pair (arg mu, arg nu).
/// Throws SingularSystem when the system is singular outside the recognised
/// degenerate regime (all sines of one phase vanish).
MixedProducts mixed_products(const QMat3& b1, const QMat3& b2, const LoxodromicData& lox, int entry,
                             const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// bd != 0 with d = r1 conj(b).

struct ConjBStructure {
  double r1 = 0.0;
  double r2 = 0.0;
  Quat b;
  double e_real = 0.0;
  Quat a, c;
  std::vector<std::pair<std::string, double>> residuals;
};

/// Recovers
///   B = [ a        b          c     ]
///       [ r1 b^*   e          r2 b^* ]
///       [ r1^2 c   r1 r2 b    r2^2 a ]
/// with r1 r2 = (1 - |e|^2) / (2 |b|^2), and e real when c is complex.
/// Throws StructureMismatch naming the first failing relation.
ConjBStructure conj_b_structure(const QMat3& m, const Tolerance& tol = {});

/// For the structure above with c purely imaginary: confirms r2 = -1 through
/// the real part of the (1,3) entry of B^2 and reports the modulus clash
/// |b| = |b| / lambda carried by BA. Throws ConstraintViolated if c is complex
/// or not purely imaginary.
Diagnostic imaginary_c_contradiction(const QMat3& m, const LoxodromicData& lox, const Tolerance& tol = {},
                                     double r2_tol = 1e-6);

// ---------------------------------------------------------------------------
// bd = 0 for every generator.

struct BdZeroForm {
  Quat a, c, e, g, l;
  double identity6_residual = 0.0;
  double identity15_residual = 0.0;
};

/// Confirms b = d = f = h = 0 given bd = fh = 0, cross-checked against
/// identities (6) and (15). Throws ReductionFailed naming the violated identity.
BdZeroForm bd_zero_reduce(const QMat3& m, const Tolerance& tol = {});

/// For g = r conj(c) with c purely imaginary: theta must be 0 mod pi, since
/// otherwise c i c would be complex. Rules: "theta-mod-pi" (holds),
/// "theta-forces-c-complex-or-cj" (contradiction), "bab-entry-not-complex"
/// (hypothesis violated).
Diagnostic theta_mod_pi_check(const QMat3& m, const LoxodromicData& lox, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Certificates and the decision procedure.

enum class FrameFamily { Standard, MiddleTwist, FirstTwist, MiddleScaledByConjB, FirstScaledByImaginaryC };

std::string_view to_string(FrameFamily family) noexcept;

/// Unit triple (u1, u2, u3): every generator entry B_ik satisfies
/// u_i^-1 B_ik u_k in C, so the family {(u1 z1, u2 z2, u3 z3)^t : z in C} is
/// invariant.
struct FrameCertificate {
  std::array<Quat, 3> u;
  FrameFamily family = FrameFamily::Standard;
  std::optional<QMat3> sp_conjugator;  // diag(u), only when it preserves the form
};

struct CertificateCheck {
  std::vector<double> frame_residuals;  // per generator, index 0 is the loxodromic
  std::optional<double> conjugator_sp_residual;
  std::vector<double> conjugated_residuals;
  double max_residual = 0.0;
};

CertificateCheck verify_certificate(const GeneratorSet& gens, const FrameCertificate& cert);

enum class CaseLabel {
  AllComplex,
  MiddleJTwist,
  ConjBFrame,
  BdZeroComplex,
  BdZeroJTwist,
  BdZeroImaginaryC,
  Inconsistent,
  HypothesisViolated,
  CommonFixedPoint,
};

std::string_view to_string(CaseLabel label) noexcept;
bool is_certified(CaseLabel label) noexcept;

struct CaseReport {
  CaseLabel label = CaseLabel::HypothesisViolated;
  std::optional<FrameCertificate> certificate;
  std::vector<double> residuals;  // per generator, frame-conjugated jk residual
  std::optional<CertificateCheck> check;
  std::vector<Diagnostic> diagnostics;
};

struct DecideOptions {
  Tolerance tol;
  std::size_t audit_max_len = 4;  // 0 skips the trace audit
  WordLimits limits;
  double certificate_tol = 1e-8;
};

/// Runs the full case split on a generator set and returns the certified
/// case, or the reason no certificate was produced.
CaseReport decide(const GeneratorSet& gens, const DecideOptions& options = {});

}  // namespace sp21kit
