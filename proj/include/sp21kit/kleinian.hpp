#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sp21kit/linalg.hpp"

namespace sp21kit {

/// Generators of a group: the loxodromic A fixing 0 and infinity (index 0)
/// followed by B_1..B_m. labels[i] names generator i.
struct GeneratorSet {
  QMat3 loxodromic;
  std::vector<QMat3> others;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return 1 + others.size(); }
  const QMat3& generator(std::size_t i) const { return i == 0 ? loxodromic : others.at(i - 1); }
  std::string label(std::size_t i) const;
};

/// Validating constructor: every matrix must pass is_sp21 and the loxodromic
/// must be diagonal. Missing labels default to "A", "B1", "B2", ...
GeneratorSet make_generator_set(QMat3 loxodromic, std::vector<QMat3> others,
                                std::vector<std::string> labels = {}, const Tolerance& tol = {});

/// A = diag(lambda mu, nu, mu / lambda) with |mu| = |nu| = 1 and lambda > 1.
struct LoxodromicData {
  double lambda = 1.0;
  Quat mu;
  Quat nu;
  std::optional<double> theta;  // arg mu in [0, 2pi) when mu is complex
  std::optional<double> phi;    // arg nu in [0, 2pi) when nu is complex
  bool normalized = false;      // nu == mu^{-2}
};

LoxodromicData loxodromic_extract(const QMat3& a, const Tolerance& tol = {});

/// diag(lambda mu, nu, mu / lambda).
QMat3 loxodromic_matrix(double lambda, const Quat& mu, const Quat& nu);

/// Whether complex traces of A..A^4 force mu and nu to be complex.
struct LoxodromicUnitarity {
  bool holds_hypothesis = false;  // tr(A^n) complex for n = 1..4
  bool conclusion = false;        // mu and nu complex
  int failing_power = 0;          // first n with tr(A^n) not complex, 0 if none
  std::array<double, 4> trace_jk{};
  double mu_jk = 0.0;
  double nu_jk = 0.0;
};

LoxodromicUnitarity check_loxodromic_unitarity(const QMat3& a, const Tolerance& tol = {});

/// Closed form of the j-part of tr(A^4) for A = diag(lambda mu, nu, mu/lambda),
/// valid once tr(A) and tr(A^2) are complex with mu not complex, i.e. when
///   nu = (lambda^4+1)/(lambda(lambda^2+1)) mu_0 + nu_1 i - (lambda+1/lambda)(mu_2 j + mu_3 k).
/// Throws ConstraintViolated when lambda, mu or nu violate that rewriting.
double jpart_tr_power4(double lambda, const Quat& mu, const Quat& nu, const Tolerance& tol = {});

struct Letter {
  std::uint32_t generator = 0;
  int exponent = 1;  // +1 or -1

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Freely reduced word in the generators and their inverses.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// "A B^-1 A" style rendering; labels index generators.
std::string to_string(const Word& w, std::span<const std::string> labels);
Word parse_word(std::string_view text, std::span<const std::string> labels);

struct WordLimits {
  std::size_t max_len_cap = 6;
  std::size_t budget = 100000;
};

/// All freely reduced words of length 1..max_len in shortlex order, letters
/// ordered g0, g0^-1, g1, g1^-1, ... Throws CapExceeded past the limits.
std::vector<Word> enumerate_words(std::size_t num_gens, std::size_t max_len,
                                  const WordLimits& limits = {});

/// Number of freely reduced words of length 1..max_len.
std::size_t count_words(std::size_t num_gens, std::size_t max_len);

/// Left-to-right product; inverse letters use the conjugate-antidiagonal inverse.
QMat3 word_eval(const GeneratorSet& gens, const Word& w);

/// Finite check of the complex-trace hypothesis over enumerated words. A pass
/// certifies complexness for the tested words only.
struct TraceAuditReport {
  double max_jk_residual = 0.0;
  Word worst_word;
  std::size_t words_checked = 0;
  std::size_t max_len = 0;
  double tolerance = 0.0;
  bool passed = true;
};

/// Residuals are |jk(tr W)| divided by the product of max(1, |G|) over the
/// letters of W. Evaluation is split over `threads` workers (0 = hardware
/// concurrency); the report does not depend on the split.
TraceAuditReport trace_audit(const GeneratorSet& gens, std::size_t max_len,
                             const Tolerance& tol = {}, const WordLimits& limits = {},
                             unsigned threads = 0);

}  // namespace sp21kit
