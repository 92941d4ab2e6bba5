#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "sp21kit/quat.hpp"

namespace sp21kit {

/// Outcome of classifying a nonzero quaternion pair (a, b) with ab, ba complex:
///   CaseI   a, b complex
///   CaseII  a = a_* j, b = b_* j with a_*, b_* complex
///   CaseIII b = r conj(a) with r real and nonzero
/// The cases overlap; the label follows the priority I > II > III and
/// `satisfied` reports every case that holds.
enum class PairLabel { CaseI, CaseII, CaseIII, HypothesisViolated };

std::string_view to_string(PairLabel label) noexcept;

template <class T>
struct BasicPairCase {
  PairLabel label = PairLabel::HypothesisViolated;
  std::optional<T> r;
  std::optional<std::pair<T, T>> a_star;  // (re, im)
  std::optional<std::pair<T, T>> b_star;
  std::array<bool, 3> satisfied{};
};

using PairCase = BasicPairCase<double>;
using RationalPairCase = BasicPairCase<Rational>;

/// Throws ZeroInput when |a| or |b| is at most abs_tol.
PairCase pair_case(const Quat& a, const Quat& b, const Tolerance& tol = {});

/// Exact oracle: decides the hypothesis through the four bilinear conditions
/// on the components and the cases by their definitions, with zero tolerance.
RationalPairCase pair_case_oracle(const RationalQuat& a, const RationalQuat& b);

enum class QiqLabel { InC, InCj, HypothesisViolated };

std::string_view to_string(QiqLabel label) noexcept;

/// Classifies q from the products q i conj(q) and conj(q) i q.
QiqLabel qiq_case(const Quat& q, const Tolerance& tol = {});
QiqLabel qiq_case(const RationalQuat& q);

/// Closed forms of q i conj(q) and conj(q) i q in the components of q.
template <class T>
std::pair<BasicQuat<T>, BasicQuat<T>> qiq_closed_forms(const BasicQuat<T>& q) {
  const T &q0 = q.w(), &q1 = q.x(), &q2 = q.y(), &q3 = q.z();
  const T middle = q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3;
  return {
      BasicQuat<T>(T(0), middle, T(2) * (q0 * q3 + q1 * q2), T(-2) * (q0 * q2 - q1 * q3)),
      BasicQuat<T>(T(0), middle, T(-2) * (q0 * q3 - q1 * q2), T(2) * (q0 * q2 + q1 * q3)),
  };
}

}  // namespace sp21kit
