#include "sp21kit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace sp21kit {

double max_entry_norm(const QMat3& m) {
  double out = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out = std::max(out, norm(m(r, c)));
  }
  return out;
}

double max_entry_norm(const QVec3& p) {
  return std::max({norm(p[0]), norm(p[1]), norm(p[2])});
}

namespace {

double squared_length(const QVec3& p) { return p[0].norm2() + p[1].norm2() + p[2].norm2(); }

}  // namespace

VectorSign vector_sign(const QVec3& p, const Tolerance& tol) {
  const Quat s = herm_inner(p, p);
  // <p,p> is real up to rounding; the threshold is homogeneous in |p|^2 so the
  // result does not depend on the representative.
  const double threshold = tol.bound(1.0) * squared_length(p);
  if (std::hypot(s.x(), s.y(), s.z()) > threshold) {
    throw Error(Errc::NonRealSelfInner, "<p,p> = " + to_string(s) + " is not real");
  }
  if (std::abs(s.w()) <= threshold) return VectorSign::Null;
  return s.w() < 0.0 ? VectorSign::Negative : VectorSign::Positive;
}

HoroCoords::HoroCoords(const Quat& zeta_, const Quat& v_, double u_) : zeta(zeta_), v(v_), u(u_) {
  if (v.w() != 0.0) throw Error(Errc::ConstraintViolated, "v must be purely imaginary");
  if (!(u >= 0.0)) throw Error(Errc::ConstraintViolated, "height u must be non-negative");
}

QVec3 psi(const HoroCoords& h) {
  const Quat first = Quat(-h.zeta.norm2() - h.u) + h.v;
  return {first, std::numbers::sqrt2 * h.zeta, Quat(1.0)};
}

QVec3 psi_infinity() { return {Quat(1.0), Quat(), Quat()}; }

HoroCoords psi_inverse(const QVec3& p, const Tolerance& tol) {
  if (norm(p[2]) <= tol.abs_tol) {
    throw Error(Errc::AtInfinity, "third coordinate vanishes; the point is infinity");
  }
  const Quat scale = inv(p[2], tol);
  const Quat first = p[0] * scale;
  const Quat zeta = (p[1] * scale) / std::numbers::sqrt2;
  double u = -first.w() - zeta.norm2();
  if (u < -tol.bound(first.norm2())) {
    throw Error(Errc::OutsideDomain, "positive vector lies outside the closed Siegel domain");
  }
  u = std::max(u, 0.0);
  return HoroCoords(zeta, Quat(0.0, first.x(), first.y(), first.z()), u);
}

QVec3 normalize_projective(const QVec3& p, const Tolerance& tol) {
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (norm(p[i]) >= norm(p[pivot])) pivot = i;
  }
  if (norm(p[pivot]) <= tol.abs_tol) {
    throw Error(Errc::DivisionByNearZero, "zero vector has no projective class");
  }
  const Quat s = inv(p[pivot], tol);
  return {p[0] * s, p[1] * s, p[2] * s};
}

bool projectively_equal(const QVec3& p, const QVec3& q, const Tolerance& tol) {
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (norm(p[i]) >= norm(p[pivot])) pivot = i;
  }
  if (norm(p[pivot]) <= tol.abs_tol || norm(q[pivot]) <= tol.abs_tol) return false;
  const Quat sp = inv(p[pivot], tol);
  const Quat sq = inv(q[pivot], tol);
  for (std::size_t i = 0; i < 3; ++i) {
    if (norm(p[i] * sp - q[i] * sq) > tol.bound(1.0)) return false;
  }
  return true;
}

Sp21Check is_sp21(const QMat3& m, const Tolerance& tol) {
  const double residual = max_entry_norm(form_pullback(m) - QMat3::form_j());
  const double n = max_entry_norm(m);
  return {residual <= tol.bound(n * n), residual};
}

Sp21Check is_sp21(const RationalMat3& m) {
  const RationalMat3 defect = form_pullback(m) - RationalMat3::form_j();
  double residual = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      residual = std::max(residual, std::sqrt(defect(r, c).norm2().convert_to<double>()));
    }
  }
  return {residual == 0.0, residual};
}

QMat3 sp_inverse(const QMat3& m, const Tolerance& tol) {
  const Sp21Check check = is_sp21(m, tol);
  if (!check.member) {
    throw Error(Errc::NotSymplectic,
                "matrix does not preserve the form (residual " + std::to_string(check.residual) + ")");
  }
  return sp_inverse_unchecked(m);
}

std::array<double, 18> structure_identities(const QMat3& m) {
  const auto defects = structure_identity_defects(m);
  std::array<double, 18> out{};
  for (std::size_t i = 0; i < 18; ++i) out[i] = norm(defects[i]);
  return out;
}

namespace {

double infinity_norm(const QMat3& m) {
  double out = 0.0;
  for (int r = 0; r < 3; ++r) {
    out = std::max(out, norm(m(r, 0)) + norm(m(r, 1)) + norm(m(r, 2)));
  }
  return out;
}

}  // namespace

QMat3 numeric_inverse(const QMat3& m) {
  constexpr double kMaxCondition = 1e12;
  QMat3 work = m;
  QMat3 result = QMat3::identity();
  const double scale = infinity_norm(m);
  if (scale == 0.0) throw Error(Errc::IllConditioned, "zero matrix");

  for (int k = 0; k < 3; ++k) {
    int pivot = k;
    for (int r = k + 1; r < 3; ++r) {
      if (norm(work(r, k)) > norm(work(pivot, k))) pivot = r;
    }
    if (norm(work(pivot, k)) <= scale / kMaxCondition) {
      throw Error(Errc::IllConditioned, "pivot vanishes at column " + std::to_string(k));
    }
    if (pivot != k) {
      for (int c = 0; c < 3; ++c) {
        std::swap(work(k, c), work(pivot, c));
        std::swap(result(k, c), result(pivot, c));
      }
    }
    const Quat pinv = inv(work(k, k), Tolerance(1e-300, 0.0));
    for (int c = 0; c < 3; ++c) {
      work(k, c) = pinv * work(k, c);
      result(k, c) = pinv * result(k, c);
    }
    for (int r = 0; r < 3; ++r) {
      if (r == k) continue;
      const Quat factor = work(r, k);
      for (int c = 0; c < 3; ++c) {
        work(r, c) -= factor * work(k, c);
        result(r, c) -= factor * result(k, c);
      }
    }
  }
  const double condition = scale * infinity_norm(result);
  if (!(condition < kMaxCondition)) {
    throw Error(Errc::IllConditioned, "condition estimate " + std::to_string(condition));
  }
  return result;
}

namespace {

Quat draw_entry(Rng& rng, Field field) {
  std::normal_distribution<double> normal(0.0, 1.0);
  switch (field) {
    case Field::Real: return Quat(normal(rng));
    case Field::Complex: {
      const double w = normal(rng);
      return Quat(w, normal(rng));
    }
    case Field::Quaternion: {
      const double w = normal(rng);
      const double x = normal(rng);
      const double y = normal(rng);
      return Quat(w, x, y, normal(rng));
    }
  }
  return Quat();
}

QVec3 scaled(const QVec3& p, const Quat& s) { return {p[0] * s, p[1] * s, p[2] * s}; }

QVec3 add(const QVec3& p, const QVec3& q, double sign) {
  return {p[0] + sign * q[0], p[1] + sign * q[1], p[2] + sign * q[2]};
}

}  // namespace

QMat3 random_sp21(Rng& rng, Field field) {
  constexpr int kMaxAttempts = 64;
  // Reject draws whose self-product is small against the Euclidean length.
  constexpr double kMinRatio = 0.05;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::array<QVec3, 3> basis;
    std::array<double, 3> signs{};
    bool degenerate = false;
    for (std::size_t i = 0; i < 3 && !degenerate; ++i) {
      QVec3 v{draw_entry(rng, field), draw_entry(rng, field), draw_entry(rng, field)};
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < i; ++j) {
          v = add(v, scaled(basis[j], signs[j] * herm_inner(v, basis[j])), -1.0);
        }
      }
      const double n = herm_inner(v, v).w();
      if (std::abs(n) < kMinRatio * squared_length(v)) {
        degenerate = true;
        break;
      }
      basis[i] = scaled(v, Quat(1.0 / std::sqrt(std::abs(n))));
      signs[i] = n < 0.0 ? -1.0 : 1.0;
    }
    if (degenerate) continue;

    const auto negatives = std::count(signs.begin(), signs.end(), -1.0);
    if (negatives != 1) continue;
    std::size_t neg = 0;
    std::array<std::size_t, 2> pos{};
    std::size_t np = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (signs[i] < 0.0) {
        neg = i;
      } else {
        pos[np++] = i;
      }
    }
    const double s = 1.0 / std::numbers::sqrt2;
    const QVec3 col1 = scaled(add(basis[pos[0]], basis[neg], 1.0), Quat(s));
    const QVec3 col3 = scaled(add(basis[pos[0]], basis[neg], -1.0), Quat(s));
    const QVec3& col2 = basis[pos[1]];

    QMat3 m;
    for (int r = 0; r < 3; ++r) {
      m(r, 0) = col1[r];
      m(r, 1) = col2[r];
      m(r, 2) = col3[r];
    }
    if (is_sp21(m).residual <= 1e-11) return m;
  }
  throw Error(Errc::DegenerateDraw, "no well-conditioned draw after repeated attempts");
}

QMat3 random_sp21(std::uint64_t seed, Field field) {
  Rng rng(seed);
  return random_sp21(rng, field);
}

bool equal_up_to_sign(const QMat3& x, const QMat3& y, double tol) {
  return max_entry_norm(x - y) <= tol || max_entry_norm(x + y) <= tol;
}

}  // namespace sp21kit
