#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sp21kit/kleinian.hpp"

namespace sp21kit {

/// Generator-set families, one per branch of the case split.
///   C1     complex generators, complex loxodromic
///   C2     C1 conjugated by diag(1, j, 1)
///   C31    real generators conjugated by diag(1, q, 1), q a generic unit
///   BD0_C  sparse [a 0 c; 0 e 0; g 0 l] with complex entries
///   BD0_J  sparse shape with c, g in Cj
///   BD0_IM sparse shape with a, l real and c, g on one purely imaginary axis
enum class FixtureCase { C1, C2, C31, BD0_C, BD0_J, BD0_IM };

std::string_view to_string(FixtureCase c) noexcept;
/// Accepts "C1", "c1", "BD0_IM", "bd0_im", ...
std::optional<FixtureCase> parse_fixture_case(std::string_view text);

struct FixtureSpec {
  FixtureCase case_tag = FixtureCase::C1;
  std::uint64_t seed = 0;
  std::size_t num_generators = 2;  // generators besides the loxodromic
  double lambda = 2.0;
  std::optional<double> theta;  // default: pi/5 for complex families, 0 otherwise
};

/// Builds a generator set for the requested family. Every emitted set passes
/// is_sp21 to 1e-10, the structure identities, and the trace audit at length 4.
/// Throws InfeasibleSpec when the family cannot realise the parameters.
GeneratorSet make_fixture(const FixtureSpec& spec);

/// Sparse membership constraint solved for g_* when c = c_* j, g = g_* j:
/// c_* conj(g_*) + conj(l) a = 1.
Quat bd0_j_gstar(const Quat& a, const Quat& l, const Quat& cstar);

/// Real coefficient r with g = r conj(c) for the purely imaginary sparse shape:
/// -r |c|^2 + l a = 1. Throws InfeasibleSpec when r would vanish.
double bd0_im_ratio(double a, double l, const Quat& c);

/// A matrix of the shape
///   [ a        b        c ]
///   [ r1 b^*   e       -b^* ]
///   [ r1^2 c  -r1 b     a ]
/// with c purely imaginary and not complex, preserving the form. Such a matrix
/// passes every local check of the decision procedure; paired with any
/// loxodromic it leads to the modulus contradiction.
QMat3 imaginary_c_witness(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Randomised search for a loxodromic with complex traces of A..A^4 but mu or
// nu outside C.

struct FalsifierSample {
  double lambda = 0.0;
  Quat mu;
  Quat nu;
  double residual = 0.0;  // largest scaled constraint residual
  bool injected = false;
};

struct FalsifierReport {
  std::size_t trials = 0;
  std::size_t converged = 0;
  std::size_t not_converged = 0;
  double max_converged_residual = 0.0;
  std::vector<FalsifierSample> counterexamples;
};

struct FalsifierOptions {
  double converged_tol = 1e-12;  // scaled residual accepted as on the constraint set
  double report_tol = 1e-6;      // jk part of mu or nu flagged as a counterexample
  int max_iterations = 200;
};

/// Each trial draws lambda in (1, 10] and unit mu, nu, then projects onto
/// the constraint set by damped Gauss-Newton. Samples in `injected` skip the
/// projection and the convergence gate; they test the reporting path.
FalsifierReport falsify_loxodromic_unitarity(std::size_t trials, std::uint64_t seed,
                                             const FalsifierOptions& options = {},
                                             std::span<const FalsifierSample> injected = {});

}  // namespace sp21kit
