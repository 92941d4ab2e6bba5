#include "sp21kit/classify.hpp"

namespace sp21kit {

std::string_view to_string(PairLabel label) noexcept {
  switch (label) {
    case PairLabel::CaseI: return "CaseI";
    case PairLabel::CaseII: return "CaseII";
    case PairLabel::CaseIII: return "CaseIII";
    case PairLabel::HypothesisViolated: return "HypothesisViolated";
  }
  return "?";
}

std::string_view to_string(QiqLabel label) noexcept {
  switch (label) {
    case QiqLabel::InC: return "InC";
    case QiqLabel::InCj: return "InCj";
    case QiqLabel::HypothesisViolated: return "HypothesisViolated";
  }
  return "?";
}

namespace {

template <class T>
void assign_label(BasicPairCase<T>& out, bool hypothesis) {
  if (!hypothesis) {
    out.label = PairLabel::HypothesisViolated;
  } else if (out.satisfied[0]) {
    out.label = PairLabel::CaseI;
  } else if (out.satisfied[1]) {
    out.label = PairLabel::CaseII;
  } else if (out.satisfied[2]) {
    out.label = PairLabel::CaseIII;
  } else {
    // Only reachable through rounding near a case boundary.
    out.label = PairLabel::HypothesisViolated;
  }
}

}  // namespace

PairCase pair_case(const Quat& a, const Quat& b, const Tolerance& tol) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na <= tol.abs_tol || nb <= tol.abs_tol) {
    throw Error(Errc::ZeroInput, "pair classification needs two nonzero quaternions");
  }
  PairCase out;
  const bool hypothesis = is_complex(a * b, tol) && is_complex(b * a, tol);

  out.satisfied[0] = is_complex(a, tol) && is_complex(b, tol);
  out.satisfied[1] = is_cj(a, tol) && is_cj(b, tol);
  const double r = (b * a).w() / a.norm2();
  out.satisfied[2] = std::abs(r) > tol.abs_tol && norm(b - r * conj(a)) <= tol.abs_tol * (1.0 + na + nb);

  if (out.satisfied[1]) {
    out.a_star = std::pair{a.y(), a.z()};
    out.b_star = std::pair{b.y(), b.z()};
  }
  if (out.satisfied[2]) out.r = r;
  assign_label(out, hypothesis);
  return out;
}

RationalPairCase pair_case_oracle(const RationalQuat& a, const RationalQuat& b) {
  if (a.norm2() == 0 || b.norm2() == 0) {
    throw Error(Errc::ZeroInput, "pair classification needs two nonzero quaternions");
  }
  const Rational &a0 = a.w(), &a1 = a.x(), &a2 = a.y(), &a3 = a.z();
  const Rational &b0 = b.w(), &b1 = b.x(), &b2 = b.y(), &b3 = b.z();
  // j- and k-parts of ab and ba vanish iff these four conditions hold.
  const bool hypothesis = a0 * b2 + a2 * b0 == 0 && a3 * b1 - a1 * b3 == 0 &&
                          a0 * b3 + a3 * b0 == 0 && a1 * b2 - a2 * b1 == 0;

  RationalPairCase out;
  out.satisfied[0] = is_complex(a) && is_complex(b);
  out.satisfied[1] = is_cj(a) && is_cj(b);
  const Rational r = (b * a).w() / a.norm2();
  out.satisfied[2] = r != 0 && b == r * conj(a);

  if (out.satisfied[1]) {
    out.a_star = std::pair{a.y(), a.z()};
    out.b_star = std::pair{b.y(), b.z()};
  }
  if (out.satisfied[2]) out.r = r;
  assign_label(out, hypothesis);
  return out;
}

QiqLabel qiq_case(const Quat& q, const Tolerance& tol) {
  const Quat i = Quat::unit_i();
  if (!is_complex(q * i * conj(q), tol) || !is_complex(conj(q) * i * q, tol)) {
    return QiqLabel::HypothesisViolated;
  }
  if (is_complex(q, tol)) return QiqLabel::InC;
  if (is_cj(q, tol)) return QiqLabel::InCj;
  return QiqLabel::HypothesisViolated;
}

QiqLabel qiq_case(const RationalQuat& q) {
  const RationalQuat i = RationalQuat::unit_i();
  if (!is_complex(q * i * conj(q)) || !is_complex(conj(q) * i * q)) {
    return QiqLabel::HypothesisViolated;
  }
  if (is_complex(q)) return QiqLabel::InC;
  if (is_cj(q)) return QiqLabel::InCj;
  return QiqLabel::HypothesisViolated;
}

}  // namespace sp21kit
