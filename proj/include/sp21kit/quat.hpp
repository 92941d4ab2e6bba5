#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>
#include <string>
#include <type_traits>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "sp21kit/error.hpp"

namespace sp21kit {

/// Exact rational scalar used by the oracle backend.
using Rational = boost::multiprecision::cpp_rational;

/// A part is treated as zero when its magnitude is at most
/// abs_tol + rel_scale * |operand|.
struct Tolerance {
  double abs_tol = 1e-9;
  double rel_scale = 1e-12;

  Tolerance() = default;
  Tolerance(double abs, double rel = 1e-12) : abs_tol(abs), rel_scale(rel) {
    if (!(abs_tol > 0.0) || !(rel_scale >= 0.0) || !std::isfinite(abs_tol) ||
        !std::isfinite(rel_scale)) {
      throw Error(Errc::ConstraintViolated, "tolerance requires abs_tol > 0 and rel_scale >= 0");
    }
  }

  double bound(double magnitude) const noexcept { return abs_tol + rel_scale * magnitude; }
};

/// Quaternion w + x i + y j + z k over a real scalar type T (double or Rational).
template <class T>
class BasicQuat {
 public:
  using value_type = T;

  BasicQuat() : w_(0), x_(0), y_(0), z_(0) {}

  BasicQuat(T w, T x = T(0), T y = T(0), T z = T(0))
      : w_(std::move(w)), x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(w_) || !std::isfinite(x_) || !std::isfinite(y_) || !std::isfinite(z_)) {
        throw Error(Errc::NonFinite, "quaternion component is NaN or infinite");
      }
    }
  }

  static BasicQuat unit_i() { return {T(0), T(1), T(0), T(0)}; }
  static BasicQuat unit_j() { return {T(0), T(0), T(1), T(0)}; }
  static BasicQuat unit_k() { return {T(0), T(0), T(0), T(1)}; }

  const T& w() const noexcept { return w_; }
  const T& x() const noexcept { return x_; }
  const T& y() const noexcept { return y_; }
  const T& z() const noexcept { return z_; }

  T norm2() const { return w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_; }

  BasicQuat operator-() const { return {-w_, -x_, -y_, -z_}; }

  BasicQuat& operator+=(const BasicQuat& o) { return *this = *this + o; }
  BasicQuat& operator-=(const BasicQuat& o) { return *this = *this - o; }
  BasicQuat& operator*=(const BasicQuat& o) { return *this = *this * o; }

  friend BasicQuat operator+(const BasicQuat& a, const BasicQuat& b) {
    return {a.w_ + b.w_, a.x_ + b.x_, a.y_ + b.y_, a.z_ + b.z_};
  }
  friend BasicQuat operator-(const BasicQuat& a, const BasicQuat& b) {
    return {a.w_ - b.w_, a.x_ - b.x_, a.y_ - b.y_, a.z_ - b.z_};
  }
  // Hamilton product.
  friend BasicQuat operator*(const BasicQuat& a, const BasicQuat& b) {
    return {a.w_ * b.w_ - a.x_ * b.x_ - a.y_ * b.y_ - a.z_ * b.z_,
            a.w_ * b.x_ + a.x_ * b.w_ + a.y_ * b.z_ - a.z_ * b.y_,
            a.w_ * b.y_ - a.x_ * b.z_ + a.y_ * b.w_ + a.z_ * b.x_,
            a.w_ * b.z_ + a.x_ * b.y_ - a.y_ * b.x_ + a.z_ * b.w_};
  }
  friend BasicQuat operator*(const T& s, const BasicQuat& q) {
    return {s * q.w_, s * q.x_, s * q.y_, s * q.z_};
  }
  friend BasicQuat operator*(const BasicQuat& q, const T& s) { return s * q; }
  friend BasicQuat operator/(const BasicQuat& q, const T& s) {
    return {q.w_ / s, q.x_ / s, q.y_ / s, q.z_ / s};
  }

  friend bool operator==(const BasicQuat& a, const BasicQuat& b) {
    return a.w_ == b.w_ && a.x_ == b.x_ && a.y_ == b.y_ && a.z_ == b.z_;
  }

 private:
  T w_, x_, y_, z_;
};

using Quat = BasicQuat<double>;
using RationalQuat = BasicQuat<Rational>;

template <class T>
BasicQuat<T> conj(const BasicQuat<T>& q) {
  return {q.w(), -q.x(), -q.y(), -q.z()};
}

inline double norm(const Quat& q) { return std::sqrt(q.norm2()); }

/// Inverse; throws DivisionByNearZero when |q| <= abs_tol.
Quat inv(const Quat& q, const Tolerance& tol = {});
/// Exact inverse; throws DivisionByNearZero only for q == 0.
RationalQuat inv(const RationalQuat& q);

/// Complex part (w, x) and the coefficient pair (y, z) of the j/k part.
template <class T>
struct QuatParts {
  std::pair<T, T> complex_part;
  std::pair<T, T> jk_part;
};

template <class T>
QuatParts<T> parts(const BasicQuat<T>& q) {
  return {{q.w(), q.x()}, {q.y(), q.z()}};
}

template <class T>
BasicQuat<T> from_parts(const QuatParts<T>& p) {
  return {p.complex_part.first, p.complex_part.second, p.jk_part.first, p.jk_part.second};
}

// q = z1 + z2 j with z1 = w + x i and z2 = y + z i.
inline std::complex<double> complex_part(const Quat& q) { return {q.w(), q.x()}; }
inline std::complex<double> j_coefficient(const Quat& q) { return {q.y(), q.z()}; }
inline Quat from_complex(std::complex<double> z) { return {z.real(), z.imag(), 0.0, 0.0}; }
inline Quat from_complex_pair(std::complex<double> z1, std::complex<double> z2) {
  return {z1.real(), z1.imag(), z2.real(), z2.imag()};
}

/// Magnitude of the j/k part; the residual that "is complex" is measured by.
inline double jk_magnitude(const Quat& q) { return std::hypot(q.y(), q.z()); }

bool is_complex(const Quat& q, const Tolerance& tol = {});
bool is_cj(const Quat& q, const Tolerance& tol = {});
bool is_real(const Quat& q, const Tolerance& tol = {});
bool is_pure_imaginary(const Quat& q, const Tolerance& tol = {});

// Exact predicates (tolerance zero).
inline bool is_complex(const RationalQuat& q) { return q.y() == 0 && q.z() == 0; }
inline bool is_cj(const RationalQuat& q) { return q.w() == 0 && q.x() == 0; }
inline bool is_real(const RationalQuat& q) { return q.x() == 0 && q.y() == 0 && q.z() == 0; }
inline bool is_pure_imaginary(const RationalQuat& q) { return q.w() == 0; }

/// Exact conversion of a binary64 quaternion.
RationalQuat to_rational(const Quat& q);
Quat to_double(const RationalQuat& q);

std::ostream& operator<<(std::ostream& os, const Quat& q);
std::string to_string(const Quat& q);

}  // namespace sp21kit
