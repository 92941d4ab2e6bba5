#include <gtest/gtest.h>

#include <numbers>

#include "sp21kit/io.hpp"
#include "test_support.hpp"

using namespace sp21kit;
using namespace sp21kit::testing;

namespace {

constexpr FixtureCase kFamilies[] = {FixtureCase::C1,    FixtureCase::C2,    FixtureCase::C31,
                                     FixtureCase::BD0_C, FixtureCase::BD0_J, FixtureCase::BD0_IM};

Errc code_of(const FixtureSpec& spec) {
  try {
    make_fixture(spec);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Parse;
}

bool sparse(const QMat3& m) {
  return m(0, 1) == Quat() && m(1, 0) == Quat() && m(1, 2) == Quat() && m(2, 1) == Quat();
}

}  // namespace

TEST(Fixtures, ParseCaseNames) {
  EXPECT_EQ(parse_fixture_case("c31"), FixtureCase::C31);
  EXPECT_EQ(parse_fixture_case("BD0_IM"), FixtureCase::BD0_IM);
  EXPECT_EQ(parse_fixture_case("bd0_j"), FixtureCase::BD0_J);
  EXPECT_FALSE(parse_fixture_case("c4"));
  for (FixtureCase c : kFamilies) EXPECT_EQ(parse_fixture_case(to_string(c)), c);
}

TEST(Fixtures, EveryFamilyPassesTheEmissionGates) {
  for (FixtureCase c : kFamilies) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const GeneratorSet gens = make_fixture({c, seed});
      ASSERT_EQ(gens.others.size(), 2u);
      for (std::size_t i = 0; i < gens.size(); ++i) {
        const QMat3& m = gens.generator(i);
        EXPECT_LE(form_defect(m), 1e-10) << to_string(c) << " " << seed;
        const double n = max_entry_norm(m);
        for (double r : structure_identities(m)) EXPECT_LE(r, 1e-10 * (1 + n * n));
      }
      EXPECT_TRUE(trace_audit(gens, 4).passed) << to_string(c) << " " << seed;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        for (std::size_t k = i + 1; k < gens.size(); ++k) {
          EXPECT_LE(std::abs(trace(gens.generator(i) * gens.generator(k)).y()) +
                        std::abs(trace(gens.generator(i) * gens.generator(k)).z()),
                    1e-9);
        }
      }
    }
  }
}

TEST(Fixtures, ShapesMatchTheirFamily) {
  const Quat j = Quat::unit_j();
  const QMat3 t = QMat3::diagonal(Quat(1.0), j, Quat(1.0));
  const QMat3 tinv = QMat3::diagonal(Quat(1.0), -j, Quat(1.0));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (const QMat3& m : make_fixture({FixtureCase::C1, seed}).others) EXPECT_EQ(max_jk(m), 0.0);
    for (const QMat3& m : make_fixture({FixtureCase::C2, seed}).others) EXPECT_LE(max_jk(t * m * tinv), 1e-15);
    for (const QMat3& m : make_fixture({FixtureCase::C31, seed}).others) {
      EXPECT_FALSE(is_complex(m(0, 1)));
      EXPECT_TRUE(is_real(m(0, 0)) && is_real(m(0, 2)) && is_real(m(1, 1)));
    }
    for (const QMat3& m : make_fixture({FixtureCase::BD0_C, seed}).others) {
      EXPECT_TRUE(sparse(m));
      EXPECT_EQ(max_jk(m), 0.0);
      EXPECT_NEAR(norm(m(1, 1)), 1.0, 1e-12);
    }
    for (const QMat3& m : make_fixture({FixtureCase::BD0_J, seed}).others) {
      EXPECT_TRUE(sparse(m));
      EXPECT_TRUE(is_cj(m(0, 2)) && is_cj(m(2, 0)));
      EXPECT_TRUE(is_complex(m(0, 0)) && is_complex(m(2, 2)));
    }
    for (const QMat3& m : make_fixture({FixtureCase::BD0_IM, seed}).others) {
      EXPECT_TRUE(sparse(m));
      EXPECT_TRUE(is_real(m(0, 0)) && is_real(m(2, 2)));
      EXPECT_TRUE(is_pure_imaginary(m(0, 2)) && !is_complex(m(0, 2)));
      const double r = (m(2, 0) * m(0, 2)).w() / m(0, 2).norm2();
      EXPECT_LE(distance(m(2, 0), r * conj(m(0, 2))), 1e-12);
    }
  }
}

TEST(Fixtures, GeneratorCountAndDilation) {
  const GeneratorSet gens = make_fixture({FixtureCase::C2, 3, 4, 3.5});
  EXPECT_EQ(gens.others.size(), 4u);
  EXPECT_NEAR(loxodromic_extract(gens.loxodromic).lambda, 3.5, 1e-12);
  EXPECT_EQ(gens.labels.size(), 5u);
}

TEST(Fixtures, DeterministicPerSpec) {
  for (FixtureCase c : kFamilies) {
    const FixtureSpec spec{c, 42};
    EXPECT_EQ(io::serialize_group(make_fixture(spec)), io::serialize_group(make_fixture(spec)));
  }
  EXPECT_NE(io::serialize_group(make_fixture({FixtureCase::C1, 1})),
            io::serialize_group(make_fixture({FixtureCase::C1, 2})));
}

TEST(Fixtures, InfeasibleSpecs) {
  EXPECT_EQ(code_of({FixtureCase::C31, 1, 2, 2.0, std::numbers::pi / 5}), Errc::InfeasibleSpec);
  EXPECT_EQ(code_of({FixtureCase::BD0_IM, 1, 2, 2.0, std::numbers::pi / 3}), Errc::InfeasibleSpec);
  EXPECT_EQ(code_of({FixtureCase::C1, 1, 2, 1.0}), Errc::InfeasibleSpec);
  EXPECT_EQ(code_of({FixtureCase::C1, 1, 0}), Errc::InfeasibleSpec);
  EXPECT_NO_THROW(make_fixture({FixtureCase::BD0_IM, 1, 2, 2.0, std::numbers::pi}));
}

TEST(Fixtures, SparseConstraintSolutions) {
  const Quat gstar = bd0_j_gstar(Quat(2.0), Quat(1.0), Quat(1.0));
  EXPECT_EQ(gstar, Quat(-1.0));
  const Quat j = Quat::unit_j();
  const QMat3 m(Quat(2.0), Quat(), j, Quat(), Quat(1.0), Quat(), gstar * j, Quat(), Quat(1.0));
  EXPECT_EQ(form_defect(m), 0.0);

  EXPECT_THROW(bd0_im_ratio(1.0, 1.0, j), Error);
  EXPECT_DOUBLE_EQ(bd0_im_ratio(1.0, 2.0, j), 1.0);
  const QMat3 im(Quat(1.0), Quat(), j, Quat(), Quat(1.0), Quat(), 1.0 * conj(j), Quat(), Quat(2.0));
  EXPECT_EQ(form_defect(im), 0.0);
}

TEST(Fixtures, PipelineExample) {
  EXPECT_EQ(decide(make_fixture({FixtureCase::C2, 7})).label, CaseLabel::MiddleJTwist);
}

TEST(Witness, HasTheImaginaryCShape) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const QMat3 w = imaginary_c_witness(seed);
    EXPECT_LE(form_defect(w), 1e-10);
    const Quat &b = w(0, 1), &c = w(0, 2);
    EXPECT_TRUE(is_pure_imaginary(c));
    EXPECT_FALSE(is_complex(c));
    EXPECT_LE(distance(w(1, 2), -1.0 * conj(b)), 1e-12);
    EXPECT_LE(distance(w(2, 2), w(0, 0)), 1e-12);
    const double r1 = (w(1, 0) * b).w() / b.norm2();
    EXPECT_LE(distance(w(1, 0), r1 * conj(b)), 1e-12);
    EXPECT_LE(distance(w(2, 0), r1 * r1 * c), 1e-12);
    EXPECT_LE(distance(w(2, 1), -r1 * b), 1e-12);
  }
}

TEST(Falsifier, NoCounterexamples) {
  const FalsifierReport r = falsify_loxodromic_unitarity(1000, 1);
  EXPECT_EQ(r.trials, 1000u);
  EXPECT_TRUE(r.counterexamples.empty());
  EXPECT_EQ(r.converged + r.not_converged, r.trials);
  EXPECT_GT(r.converged, 900u);
  EXPECT_LE(r.max_converged_residual, 1e-12);
}

TEST(Falsifier, InjectedSamplesExerciseReporting) {
  const double t = 0.3;
  const std::vector<FalsifierSample> injected{
      {2.0, Quat(std::cos(t), std::sin(t), 0, 0), Quat(std::cos(2 * t), -std::sin(2 * t), 0, 0), 0.0, true},
      {2.0, Quat(std::sqrt(1 - 1e-6), 0, 1e-3, 0), Quat(1.0), 0.0, true},
  };
  const FalsifierReport r = falsify_loxodromic_unitarity(10, 3, {}, injected);
  ASSERT_EQ(r.counterexamples.size(), 1u);
  EXPECT_TRUE(r.counterexamples[0].injected);
  EXPECT_NEAR(r.counterexamples[0].mu.y(), 1e-3, 1e-15);
}

TEST(Falsifier, DeterministicPerSeed) {
  const FalsifierReport a = falsify_loxodromic_unitarity(200, 5);
  const FalsifierReport b = falsify_loxodromic_unitarity(200, 5);
  EXPECT_EQ(a.converged, b.converged);
  EXPECT_EQ(a.max_converged_residual, b.max_converged_residual);
}
