#include "sp21kit/quat.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace sp21kit {

Quat inv(const Quat& q, const Tolerance& tol) {
  const double n2 = q.norm2();
  if (std::sqrt(n2) <= tol.abs_tol) {
    throw Error(Errc::DivisionByNearZero, "cannot invert quaternion " + to_string(q));
  }
  return conj(q) / n2;
}

RationalQuat inv(const RationalQuat& q) {
  const Rational n2 = q.norm2();
  if (n2 == 0) throw Error(Errc::DivisionByNearZero, "cannot invert the zero quaternion");
  return conj(q) / n2;
}

bool is_complex(const Quat& q, const Tolerance& tol) {
  return std::max(std::abs(q.y()), std::abs(q.z())) <= tol.bound(norm(q));
}

bool is_cj(const Quat& q, const Tolerance& tol) {
  return std::max(std::abs(q.w()), std::abs(q.x())) <= tol.bound(norm(q));
}

bool is_real(const Quat& q, const Tolerance& tol) {
  return std::max({std::abs(q.x()), std::abs(q.y()), std::abs(q.z())}) <= tol.bound(norm(q));
}

bool is_pure_imaginary(const Quat& q, const Tolerance& tol) {
  return std::abs(q.w()) <= tol.bound(norm(q));
}

RationalQuat to_rational(const Quat& q) {
  return {Rational(q.w()), Rational(q.x()), Rational(q.y()), Rational(q.z())};
}

Quat to_double(const RationalQuat& q) {
  return {q.w().convert_to<double>(), q.x().convert_to<double>(), q.y().convert_to<double>(),
          q.z().convert_to<double>()};
}

std::ostream& operator<<(std::ostream& os, const Quat& q) {
  return os << to_string(q);
}

std::string to_string(const Quat& q) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << '[' << q.w() << ", "
     << q.x() << ", " << q.y() << ", " << q.z() << ']';
  return os.str();
}

}  // namespace sp21kit
