#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "sp21kit/quat.hpp"

namespace sp21kit {

/// Column vector (p1, p2, p3)^t of the right H-module H^{2,1}.
template <class T>
using BasicVec3 = std::array<BasicQuat<T>, 3>;

/// 3x3 quaternionic matrix, row-major; entries named
///   a b c
///   d e f
///   g h l
template <class T>
class BasicMat3 {
 public:
  using Scalar = BasicQuat<T>;

  BasicMat3() = default;
  BasicMat3(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d, const Scalar& e,
            const Scalar& f, const Scalar& g, const Scalar& h, const Scalar& l)
      : e_{a, b, c, d, e, f, g, h, l} {}

  static BasicMat3 identity() { return diagonal(T(1), T(1), T(1)); }
  /// The Hermitian form: antidiag(1, 1, 1).
  static BasicMat3 form_j() {
    BasicMat3 m;
    m(0, 2) = Scalar(T(1));
    m(1, 1) = Scalar(T(1));
    m(2, 0) = Scalar(T(1));
    return m;
  }
  static BasicMat3 diagonal(const Scalar& x, const Scalar& y, const Scalar& z) {
    BasicMat3 m;
    m(0, 0) = x;
    m(1, 1) = y;
    m(2, 2) = z;
    return m;
  }

  Scalar& operator()(int r, int c) { return e_[static_cast<std::size_t>(3 * r + c)]; }
  const Scalar& operator()(int r, int c) const { return e_[static_cast<std::size_t>(3 * r + c)]; }

  friend BasicMat3 operator*(const BasicMat3& x, const BasicMat3& y) {
    BasicMat3 out;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        out(r, c) = x(r, 0) * y(0, c) + x(r, 1) * y(1, c) + x(r, 2) * y(2, c);
      }
    }
    return out;
  }
  // Matrix entries act on the left of vector components.
  friend BasicVec3<T> operator*(const BasicMat3& x, const BasicVec3<T>& p) {
    BasicVec3<T> out;
    for (int r = 0; r < 3; ++r) out[r] = x(r, 0) * p[0] + x(r, 1) * p[1] + x(r, 2) * p[2];
    return out;
  }
  friend BasicMat3 operator+(const BasicMat3& x, const BasicMat3& y) {
    BasicMat3 out;
    for (std::size_t i = 0; i < 9; ++i) out.e_[i] = x.e_[i] + y.e_[i];
    return out;
  }
  friend BasicMat3 operator-(const BasicMat3& x, const BasicMat3& y) {
    BasicMat3 out;
    for (std::size_t i = 0; i < 9; ++i) out.e_[i] = x.e_[i] - y.e_[i];
    return out;
  }
  friend BasicMat3 operator*(const T& s, const BasicMat3& x) {
    BasicMat3 out;
    for (std::size_t i = 0; i < 9; ++i) out.e_[i] = s * x.e_[i];
    return out;
  }
  friend bool operator==(const BasicMat3& x, const BasicMat3& y) { return x.e_ == y.e_; }

 private:
  std::array<Scalar, 9> e_{};
};

using QVec3 = BasicVec3<double>;
using QMat3 = BasicMat3<double>;
using RationalVec3 = BasicVec3<Rational>;
using RationalMat3 = BasicMat3<Rational>;

/// <p, q> = conj(q1) p3 + conj(q2) p2 + conj(q3) p1.
template <class T>
BasicQuat<T> herm_inner(const BasicVec3<T>& p, const BasicVec3<T>& q) {
  return conj(q[0]) * p[2] + conj(q[1]) * p[1] + conj(q[2]) * p[0];
}

/// Sum of the diagonal entries. Quaternion valued and not a similarity invariant.
template <class T>
BasicQuat<T> trace(const BasicMat3<T>& m) {
  return m(0, 0) + m(1, 1) + m(2, 2);
}

template <class T>
BasicMat3<T> conjugate_transpose(const BasicMat3<T>& m) {
  BasicMat3<T> out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out(r, c) = conj(m(c, r));
  }
  return out;
}

/// J A* J: entrywise conjugate, transposed across the antidiagonal. Equals
/// A^{-1} exactly when A preserves the form.
template <class T>
BasicMat3<T> sp_inverse_unchecked(const BasicMat3<T>& m) {
  BasicMat3<T> out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out(r, c) = conj(m(2 - c, 2 - r));
  }
  return out;
}

/// A* J A, which equals J for members of Sp(2,1).
template <class T>
BasicMat3<T> form_pullback(const BasicMat3<T>& m) {
  return conjugate_transpose(m) * BasicMat3<T>::form_j() * m;
}

template <class T>
BasicMat3<T> conjugate_entries(const BasicMat3<T>& m) {
  BasicMat3<T> out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out(r, c) = conj(m(r, c));
  }
  return out;
}

/// Max entry magnitude.
double max_entry_norm(const QMat3& m);
double max_entry_norm(const QVec3& p);

enum class VectorSign { Negative, Null, Positive };

/// Sign of the real number <p,p>; throws NonRealSelfInner on corrupted input.
VectorSign vector_sign(const QVec3& p, const Tolerance& tol = {});

/// Horospherical coordinates (zeta, v, u) in H x Im(H) x R_{>=0}.
struct HoroCoords {
  Quat zeta;
  Quat v;
  double u = 0.0;

  HoroCoords() = default;
  HoroCoords(const Quat& zeta_, const Quat& v_, double u_);
};

QVec3 psi(const HoroCoords& h);
QVec3 psi_infinity();
/// Right-normalizes so p3 = 1 and reads off the coordinates. Throws AtInfinity
/// when |p3| <= abs_tol and OutsideDomain for positive vectors.
HoroCoords psi_inverse(const QVec3& p, const Tolerance& tol = {});

/// Representative scaled on the right by the inverse of its largest coordinate.
QVec3 normalize_projective(const QVec3& p, const Tolerance& tol = {});
bool projectively_equal(const QVec3& p, const QVec3& q, const Tolerance& tol = {});

struct Sp21Check {
  bool member = false;
  double residual = 0.0;  // max entry magnitude of A*JA - J
};

Sp21Check is_sp21(const QMat3& m, const Tolerance& tol = {});
Sp21Check is_sp21(const RationalMat3& m);  // exact: residual reported as double

/// Inverse via the conjugate-antidiagonal formula; throws NotSymplectic when A
/// fails is_sp21.
QMat3 sp_inverse(const QMat3& m, const Tolerance& tol = {});

/// Residuals of the 18 entry identities that follow from A A^{-1} = A^{-1} A = I
/// with the explicit inverse, in their conventional order (1)..(18).
template <class T>
std::array<BasicQuat<T>, 18> structure_identity_defects(const BasicMat3<T>& m) {
  using Q = BasicQuat<T>;
  const Q &a = m(0, 0), &b = m(0, 1), &c = m(0, 2);
  const Q &d = m(1, 0), &e = m(1, 1), &f = m(1, 2);
  const Q &g = m(2, 0), &h = m(2, 1), &l = m(2, 2);
  const Q one(T(1));
  const Q zero;
  auto sq = [](const Q& q) { return Q(q.norm2()); };
  return {
      a * conj(l) + b * conj(h) + c * conj(g) - one,   // (1)
      a * conj(f) + b * conj(e) + c * conj(d) - zero,  // (2)
      a * conj(c) + sq(b) + c * conj(a) - zero,        // (3)
      d * conj(l) + e * conj(h) + f * conj(g) - zero,  // (4)
      d * conj(f) + sq(e) + f * conj(d) - one,         // (5)
      d * conj(c) + e * conj(b) + f * conj(a) - zero,  // (6)
      g * conj(l) + sq(h) + l * conj(g) - zero,        // (7)
      g * conj(f) + h * conj(e) + l * conj(d) - zero,  // (8)
      g * conj(c) + h * conj(b) + l * conj(a) - one,   // (9)
      conj(l) * a + conj(f) * d + conj(c) * g - one,   // (10)
      conj(l) * b + conj(f) * e + conj(c) * h - zero,  // (11)
      conj(l) * c + sq(f) + conj(c) * l - zero,        // (12)
      conj(h) * a + conj(e) * d + conj(b) * g - zero,  // (13)
      conj(h) * b + sq(e) + conj(b) * h - one,         // (14)
      conj(h) * c + conj(e) * f + conj(b) * l - zero,  // (15)
      conj(g) * a + sq(d) + conj(a) * g - zero,        // (16)
      conj(g) * b + conj(d) * e + conj(a) * h - zero,  // (17)
      conj(g) * c + conj(d) * f + conj(a) * l - one,   // (18)
  };
}

std::array<double, 18> structure_identities(const QMat3& m);

/// Gauss-Jordan inverse over H with partial pivoting. Throws IllConditioned
/// when the infinity-norm condition estimate reaches 1e12.
QMat3 numeric_inverse(const QMat3& m);

/// Scalar field the entries of a random draw are restricted to.
enum class Field { Real, Complex, Quaternion };

using Rng = std::mt19937_64;

/// Pseudo-random element of Sp(2,1) (or of its real / complex subgroup) built by
/// Gram-Schmidt against the indefinite form: two null columns pairing to 1 and
/// one positive unit column. Throws DegenerateDraw after repeated near-null draws.
QMat3 random_sp21(Rng& rng, Field field = Field::Quaternion);
QMat3 random_sp21(std::uint64_t seed, Field field = Field::Quaternion);

/// Equality up to the center {+I, -I}.
bool equal_up_to_sign(const QMat3& x, const QMat3& y, double tol);

}  // namespace sp21kit
