#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace sp21kit;
using namespace sp21kit::testing;

namespace {

const Quat I = Quat::unit_i();
const Quat J = Quat::unit_j();
const Quat K = Quat::unit_k();

QVec3 vec(const Quat& a, const Quat& b, const Quat& c) { return {a, b, c}; }

QMat3 diag_example() { return QMat3::diagonal(Quat(0, 2, 0, 0), Quat(-1.0), Quat(0, 0.5, 0, 0)); }

}  // namespace

TEST(HermInner, Examples) {
  EXPECT_EQ(herm_inner(vec(0.0, 0.0, 1.0), vec(0.0, 0.0, 1.0)), Quat(0.0));
  EXPECT_EQ(herm_inner(vec(-1.0, 0.0, 1.0), vec(-1.0, 0.0, 1.0)), Quat(-2.0));
  EXPECT_EQ(herm_inner(vec(0.0, 1.0, 0.0), vec(0.0, 1.0, 0.0)), Quat(1.0));
}

TEST(HermInner, HermitianSymmetryIsExact) {
  Rng rng(1);
  for (int n = 0; n < 300; ++n) {
    const RationalVec3 p{random_rational(rng), random_rational(rng), random_rational(rng)};
    const RationalVec3 q{random_rational(rng), random_rational(rng), random_rational(rng)};
    EXPECT_EQ(herm_inner(p, q), conj(herm_inner(q, p)));
  }
}

TEST(HermInner, RightScalingCovariance) {
  Rng rng(2);
  for (int n = 0; n < 300; ++n) {
    const RationalVec3 p{random_rational(rng), random_rational(rng), random_rational(rng)};
    const RationalQuat s = random_rational(rng);
    const RationalVec3 ps{p[0] * s, p[1] * s, p[2] * s};
    EXPECT_EQ(herm_inner(ps, ps), conj(s) * herm_inner(p, p) * s);
  }
}

TEST(VectorSign, Examples) {
  EXPECT_EQ(vector_sign(psi(HoroCoords(Quat(), Quat(), 1.0))), VectorSign::Negative);
  EXPECT_EQ(vector_sign(vec(0.0, 0.0, 1.0)), VectorSign::Null);
  EXPECT_EQ(vector_sign(vec(0.0, 1.0, 0.0)), VectorSign::Positive);
}

TEST(VectorSign, InvariantUnderRightScaling) {
  Rng rng(3);
  for (int n = 0; n < 300; ++n) {
    const QVec3 p{random_quat(rng), random_quat(rng), random_quat(rng)};
    const Quat s = random_quat(rng);
    EXPECT_EQ(vector_sign(p), vector_sign(QVec3{p[0] * s, p[1] * s, p[2] * s}));
  }
}

TEST(Siegel, PsiExamples) {
  const QVec3 p = psi(HoroCoords(Quat(), Quat(), 1.0));
  EXPECT_EQ(p[0], Quat(-1.0));
  EXPECT_EQ(p[1], Quat(0.0));
  EXPECT_EQ(p[2], Quat(1.0));
  const QVec3 inf = psi_infinity();
  EXPECT_EQ(inf[0], Quat(1.0));
  EXPECT_EQ(inf[2], Quat(0.0));
}

TEST(Siegel, InverseRoundTrip) {
  const HoroCoords h = psi_inverse(psi(HoroCoords(J, K, 2.0)));
  EXPECT_LE(distance(h.zeta, J), 1e-12);
  EXPECT_LE(distance(h.v, K), 1e-12);
  EXPECT_NEAR(h.u, 2.0, 1e-12);

  Rng rng(4);
  std::uniform_real_distribution<double> height(0.01, 5.0);
  for (int n = 0; n < 300; ++n) {
    const Quat zeta = random_quat(rng);
    Quat v = random_quat(rng);
    v = Quat(0.0, v.x(), v.y(), v.z());
    const double u = height(rng);
    const QVec3 p = psi(HoroCoords(zeta, v, u));
    const Quat s = random_unit(rng) * 3.0;
    const HoroCoords back = psi_inverse(QVec3{p[0] * s, p[1] * s, p[2] * s});
    EXPECT_LE(distance(back.zeta, zeta), 1e-9);
    EXPECT_LE(distance(back.v, v), 1e-9);
    EXPECT_NEAR(back.u, u, 1e-9);
  }
}

TEST(Siegel, InfinityHasNoCoordinates) {
  try {
    psi_inverse(psi_infinity());
    FAIL() << "expected AtInfinity";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AtInfinity);
  }
}

TEST(Membership, Examples) {
  const Sp21Check form = is_sp21(QMat3::form_j());
  EXPECT_TRUE(form.member);
  EXPECT_EQ(form.residual, 0.0);
  const Sp21Check d = is_sp21(diag_example());
  EXPECT_TRUE(d.member);
  EXPECT_EQ(d.residual, 0.0);
  const Sp21Check twice = is_sp21(2.0 * QMat3::identity());
  EXPECT_FALSE(twice.member);
  EXPECT_DOUBLE_EQ(twice.residual, 3.0);
}

TEST(Membership, InverseFormulaExamples) {
  const QMat3 expected = QMat3::diagonal(Quat(0, -0.5, 0, 0), Quat(-1.0), Quat(0, -2, 0, 0));
  EXPECT_EQ(sp_inverse(diag_example()), expected);
  EXPECT_EQ(sp_inverse(QMat3::form_j()), QMat3::form_j());
  EXPECT_EQ(sp_inverse(QMat3::identity()), QMat3::identity());
  EXPECT_LE(distance(numeric_inverse(diag_example()), expected), 1e-15);
  EXPECT_EQ(diag_example() * expected, QMat3::identity());
}

TEST(Membership, InverseOfNonMemberThrows) {
  try {
    sp_inverse(2.0 * QMat3::identity());
    FAIL() << "expected NotSymplectic";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotSymplectic);
  }
}

TEST(Membership, NumericInverseRejectsSingular) {
  QMat3 m = QMat3::identity();
  m(2, 2) = Quat();
  EXPECT_THROW(numeric_inverse(m), Error);
}

TEST(Trace, Examples) {
  const QMat3 a = QMat3::diagonal(Quat(0, 2, 0, 0), Quat(-1.0), Quat(0, 0.5, 0, 0));
  EXPECT_EQ(trace(a), Quat(-1.0, 2.5, 0, 0));
  EXPECT_EQ(trace(QMat3::identity()), Quat(3.0));
  EXPECT_EQ(trace(QMat3::form_j()), Quat(1.0));
}

TEST(Trace, RealPartIsCyclicButTraceIsNot) {
  Rng rng(5);
  for (int n = 0; n < 300; ++n) {
    const QMat3 a = random_matrix(rng), b = random_matrix(rng);
    EXPECT_NEAR(trace(a * b).w(), trace(b * a).w(), 1e-12 * 100);
  }
  const QMat3 a = QMat3::diagonal(I, Quat(), Quat());
  const QMat3 b = QMat3::diagonal(J, Quat(), Quat());
  EXPECT_EQ(trace(a * b), K);
  EXPECT_EQ(trace(b * a), -K);
}

TEST(MatrixProducts, Examples) {
  EXPECT_EQ(QMat3::form_j() * QMat3::form_j(), QMat3::identity());
  const QVec3 image = QMat3::form_j() * vec(1.0, 0.0, 0.0);
  EXPECT_EQ(image[0], Quat(0.0));
  EXPECT_EQ(image[2], Quat(1.0));
}

TEST(MatrixProducts, EntriesActOnTheLeft) {
  const QMat3 m = QMat3::diagonal(I, Quat(1.0), Quat(1.0));
  const QVec3 image = m * vec(J, 0.0, 0.0);
  EXPECT_EQ(image[0], K);
}

TEST(StructureIdentities, Examples) {
  for (double r : structure_identities(QMat3::identity())) EXPECT_EQ(r, 0.0);
  EXPECT_DOUBLE_EQ(structure_identities(2.0 * QMat3::identity())[0], 3.0);
}

TEST(RandomSp21, DeterministicPerSeed) {
  EXPECT_EQ(random_sp21(42), random_sp21(42));
  EXPECT_NE(random_sp21(42), random_sp21(43));
}

TEST(RandomSp21, FieldsAreRespected) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const QMat3 c = random_sp21(seed, Field::Complex);
    const QMat3 r = random_sp21(seed, Field::Real);
    EXPECT_EQ(max_jk(c), 0.0);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) EXPECT_TRUE(is_real(r(a, b), Tolerance(1e-15, 0.0)));
    }
    EXPECT_LE(form_defect(c), 1e-10);
    EXPECT_LE(form_defect(r), 1e-10);
  }
}

TEST(Sp21Property, RandomSamplesPreserveTheForm) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const QMat3 m = random_sp21(seed);
    const Sp21Check check = is_sp21(m);
    ASSERT_TRUE(check.member) << seed;
    EXPECT_LE(check.residual, 1e-10);
    EXPECT_LE(form_defect(m), 1e-10);
    EXPECT_LE(distance(sp_inverse(m), numeric_inverse(m)), 1e-9);
    for (double r : structure_identities(m)) EXPECT_LE(r, 1e-9);
  }
}

TEST(Sp21Property, FormIsPreservedOnVectors) {
  Rng rng(6);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const QMat3 m = random_sp21(seed);
    QVec3 p{random_unit(rng), random_unit(rng), random_unit(rng)};
    QVec3 q{random_unit(rng), random_unit(rng), random_unit(rng)};
    const double scale = 1.0 + max_entry_norm(m) * max_entry_norm(m);
    EXPECT_LE(distance(herm_inner(m * p, m * q), herm_inner(p, q)), 1e-12 * scale * 10);
  }
}

TEST(Sp21Property, InverseFormulaIsAnInvolution) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const QMat3 m = random_sp21(seed);
    EXPECT_LE(distance(sp_inverse(sp_inverse(m)), m), 1e-12 * (1 + max_entry_norm(m)));
    EXPECT_LE(distance(m * sp_inverse(m), QMat3::identity()), 1e-9);
  }
}

TEST(Sp21Property, IdentitiesHoldIffMember) {
  Rng rng(7);
  std::uniform_int_distribution<int> position(0, 8);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    QMat3 m = random_sp21(seed);
    const double n = max_entry_norm(m);
    const Tolerance tol;
    auto identities_hold = [&](const QMat3& x) {
      for (double r : structure_identities(x)) {
        if (r > tol.bound(n * n) * 10) return false;
      }
      return true;
    };
    EXPECT_EQ(is_sp21(m).member, identities_hold(m));
    const int p = position(rng);
    m(p / 3, p % 3) = m(p / 3, p % 3) + Quat(1e-3, 0, 0, 0);
    EXPECT_FALSE(is_sp21(m).member);
    EXPECT_FALSE(identities_hold(m));
  }
}

TEST(Sp21Property, IdentitiesAreExactOnRationalMembers) {
  // diag(q, u, conj(q)^-1) with u a unit and q a nonzero rational quaternion.
  Rng rng(8);
  for (int n = 0; n < 200; ++n) {
    RationalQuat q = random_rational(rng);
    if (q.norm2() == 0) continue;
    const RationalQuat u(Rational(3, 5), Rational(4, 5));
    RationalMat3 m = RationalMat3::diagonal(q, u, inv(conj(q)));
    EXPECT_TRUE(is_sp21(m).member);
    for (const RationalQuat& d : structure_identity_defects(m)) EXPECT_EQ(d.norm2(), 0);
  }
}

TEST(Sp21, EqualUpToSign) {
  const QMat3 m = random_sp21(3);
  EXPECT_TRUE(equal_up_to_sign(m, -1.0 * m, 1e-12));
  EXPECT_FALSE(equal_up_to_sign(m, random_sp21(4), 1e-6));
}
