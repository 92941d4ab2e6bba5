#include "sp21kit/kleinian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace sp21kit {

std::string GeneratorSet::label(std::size_t i) const {
  if (i < labels.size() && !labels[i].empty()) return labels[i];
  return i == 0 ? std::string("A") : "B" + std::to_string(i);
}

GeneratorSet make_generator_set(QMat3 loxodromic, std::vector<QMat3> others,
                                std::vector<std::string> labels, const Tolerance& tol) {
  GeneratorSet gens{std::move(loxodromic), std::move(others), std::move(labels)};
  if (gens.labels.size() > gens.size()) {
    throw Error(Errc::ConstraintViolated, "more labels than generators");
  }
  for (std::size_t i = gens.labels.size(); i < gens.size(); ++i) gens.labels.push_back(gens.label(i));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Sp21Check check = is_sp21(gens.generator(i), tol);
    if (!check.member) {
      throw Error(Errc::NotSymplectic, "generator " + gens.label(i) +
                                           " fails A*JA = J (residual " +
                                           std::to_string(check.residual) + ")");
    }
  }
  const QMat3& a = gens.loxodromic;
  const double n = max_entry_norm(a);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (r != c && norm(a(r, c)) > tol.bound(n)) {
        throw Error(Errc::NotDiagonal, "loxodromic generator must be diagonal");
      }
    }
  }
  return gens;
}

namespace {

double positive_angle(double x, double y) {
  double t = std::atan2(y, x);
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  return t;
}

}  // namespace

QMat3 loxodromic_matrix(double lambda, const Quat& mu, const Quat& nu) {
  return QMat3::diagonal(lambda * mu, nu, mu / lambda);
}

LoxodromicData loxodromic_extract(const QMat3& a, const Tolerance& tol) {
  const double n = max_entry_norm(a);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (r != c && norm(a(r, c)) > tol.bound(n)) {
        throw Error(Errc::NotDiagonal, "off-diagonal entry " + to_string(a(r, c)));
      }
    }
  }
  const Sp21Check check = is_sp21(a, tol);
  if (!check.member) {
    throw Error(Errc::NotSymplectic, "residual " + std::to_string(check.residual));
  }
  LoxodromicData out;
  out.lambda = norm(a(0, 0));
  if (out.lambda <= 1.0 + tol.abs_tol) {
    throw Error(Errc::NotLoxodromic, "|a| = " + std::to_string(out.lambda) + " is not above 1");
  }
  out.mu = a(0, 0) / out.lambda;
  out.nu = a(1, 1);
  // A*JA = J forces conj(a) l = 1 and |e| = 1.
  if (norm(conj(a(0, 0)) * a(2, 2) - Quat(1.0)) > tol.bound(n) ||
      std::abs(norm(out.nu) - 1.0) > tol.bound(1.0)) {
    throw Error(Errc::NotSymplectic, "diagonal entries violate conj(a) l = 1, |e| = 1");
  }
  if (is_complex(out.mu, tol)) out.theta = positive_angle(out.mu.w(), out.mu.x());
  if (is_complex(out.nu, tol)) out.phi = positive_angle(out.nu.w(), out.nu.x());
  out.normalized = norm(out.nu - inv(out.mu * out.mu)) <= tol.bound(1.0);
  return out;
}

LoxodromicUnitarity check_loxodromic_unitarity(const QMat3& a, const Tolerance& tol) {
  const LoxodromicData lox = loxodromic_extract(a, tol);
  LoxodromicUnitarity out;
  out.holds_hypothesis = true;
  QMat3 power = a;
  for (int k = 0; k < 4; ++k) {
    if (k > 0) power = power * a;
    const Quat tr = trace(power);
    out.trace_jk[static_cast<std::size_t>(k)] = jk_magnitude(tr);
    if (!is_complex(tr, tol) && out.holds_hypothesis) {
      out.holds_hypothesis = false;
      out.failing_power = k + 1;
    }
  }
  out.mu_jk = jk_magnitude(lox.mu);
  out.nu_jk = jk_magnitude(lox.nu);
  out.conclusion = is_complex(lox.mu, tol) && is_complex(lox.nu, tol);
  return out;
}

double jpart_tr_power4(double lambda, const Quat& mu, const Quat& nu, const Tolerance& tol) {
  if (!(lambda > 1.0)) throw Error(Errc::ConstraintViolated, "lambda must exceed 1");
  if (std::abs(norm(mu) - 1.0) > tol.abs_tol || std::abs(norm(nu) - 1.0) > tol.abs_tol) {
    throw Error(Errc::ConstraintViolated, "mu and nu must be unit quaternions");
  }
  const double l2 = lambda * lambda;
  const double s = lambda + 1.0 / lambda;
  const double c = (l2 * l2 + 1.0) / (lambda * (l2 + 1.0));
  const double defect = std::max({std::abs(nu.w() - c * mu.w()), std::abs(nu.y() + s * mu.y()),
                                  std::abs(nu.z() + s * mu.z())});
  if (defect > tol.abs_tol) {
    throw Error(Errc::ConstraintViolated,
                "nu does not satisfy the rewriting forced by complex tr(A), tr(A^2)");
  }
  const double m0 = mu.w();
  const double m2 = mu.y();
  return 4.0 * m0 * m2 * (l2 - 1.0) * (l2 * l2 * l2 - 1.0) * (4.0 * l2 * m0 * m0 - (l2 + 1.0) * (l2 + 1.0)) /
         (l2 * l2 * (l2 + 1.0) * (l2 + 1.0));
}

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i].exponent != 1 && letters_[i].exponent != -1) {
      throw Error(Errc::ConstraintViolated, "letter exponents must be +1 or -1");
    }
    if (i > 0 && letters_[i].generator == letters_[i - 1].generator &&
        letters_[i].exponent == -letters_[i - 1].exponent) {
      throw Error(Errc::ConstraintViolated, "word is not freely reduced");
    }
  }
}

std::string to_string(const Word& w, std::span<const std::string> labels) {
  std::string out;
  for (const Letter& letter : w.letters()) {
    if (!out.empty()) out += ' ';
    out += letter.generator < labels.size() ? labels[letter.generator]
                                            : "g" + std::to_string(letter.generator);
    if (letter.exponent < 0) out += "^-1";
  }
  return out;
}

Word parse_word(std::string_view text, std::span<const std::string> labels) {
  std::istringstream in{std::string(text)};
  std::vector<Letter> letters;
  std::string token;
  while (in >> token) {
    int exponent = 1;
    if (token.size() > 3 && token.ends_with("^-1")) {
      exponent = -1;
      token.resize(token.size() - 3);
    }
    const auto it = std::find(labels.begin(), labels.end(), token);
    if (it == labels.end()) throw Error(Errc::Parse, "unknown generator '" + token + "'");
    letters.push_back({static_cast<std::uint32_t>(it - labels.begin()), exponent});
  }
  return Word(std::move(letters));
}

std::size_t count_words(std::size_t num_gens, std::size_t max_len) {
  if (num_gens == 0) return 0;
  std::size_t total = 0;
  std::size_t layer = 2 * num_gens;
  for (std::size_t n = 1; n <= max_len; ++n) {
    total += layer;
    layer *= 2 * num_gens - 1;
  }
  return total;
}

std::vector<Word> enumerate_words(std::size_t num_gens, std::size_t max_len, const WordLimits& limits) {
  if (max_len > limits.max_len_cap) {
    throw Error(Errc::CapExceeded, "word length " + std::to_string(max_len) + " exceeds cap " +
                                       std::to_string(limits.max_len_cap));
  }
  const std::size_t total = count_words(num_gens, max_len);
  if (total > limits.budget) {
    throw Error(Errc::CapExceeded, std::to_string(total) + " words exceed the budget of " +
                                       std::to_string(limits.budget));
  }
  std::vector<Letter> alphabet;
  for (std::uint32_t g = 0; g < num_gens; ++g) {
    alphabet.push_back({g, 1});
    alphabet.push_back({g, -1});
  }
  std::vector<Word> out;
  out.reserve(total);
  std::vector<std::vector<Letter>> layer{{}};
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::vector<std::vector<Letter>> next;
    for (const auto& prefix : layer) {
      for (const Letter& letter : alphabet) {
        if (!prefix.empty() && prefix.back().generator == letter.generator &&
            prefix.back().exponent == -letter.exponent) {
          continue;
        }
        auto word = prefix;
        word.push_back(letter);
        next.push_back(std::move(word));
      }
    }
    for (const auto& letters : next) out.emplace_back(letters);
    layer = std::move(next);
  }
  return out;
}

QMat3 word_eval(const GeneratorSet& gens, const Word& w) {
  QMat3 out = QMat3::identity();
  for (const Letter& letter : w.letters()) {
    if (letter.generator >= gens.size()) {
      throw Error(Errc::ConstraintViolated, "letter refers to a missing generator");
    }
    const QMat3& g = gens.generator(letter.generator);
    out = out * (letter.exponent > 0 ? g : sp_inverse_unchecked(g));
  }
  return out;
}

TraceAuditReport trace_audit(const GeneratorSet& gens, std::size_t max_len, const Tolerance& tol,
                             const WordLimits& limits, unsigned threads) {
  const std::vector<Word> words = enumerate_words(gens.size(), max_len, limits);

  std::vector<QMat3> forward;
  std::vector<QMat3> backward;
  std::vector<double> weight;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    forward.push_back(gens.generator(i));
    backward.push_back(sp_inverse_unchecked(gens.generator(i)));
    weight.push_back(std::max(1.0, max_entry_norm(gens.generator(i))));
  }

  struct Best {
    double residual = -1.0;
    std::size_t index = 0;
  };
  auto scan = [&](std::size_t begin, std::size_t end) {
    Best best;
    for (std::size_t k = begin; k < end; ++k) {
      QMat3 m = QMat3::identity();
      double scale = 1.0;
      for (const Letter& letter : words[k].letters()) {
        m = m * (letter.exponent > 0 ? forward[letter.generator] : backward[letter.generator]);
        scale *= weight[letter.generator];
      }
      const double residual = jk_magnitude(trace(m)) / scale;
      if (residual > best.residual) best = {residual, k};
    }
    return best;
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, words.size() / 256)));
  std::vector<Best> partial(workers);
  const std::size_t chunk = (words.size() + workers - 1) / std::max(1u, workers);
  if (workers <= 1) {
    partial[0] = scan(0, words.size());
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      const std::size_t begin = std::min(words.size(), t * chunk);
      const std::size_t end = std::min(words.size(), begin + chunk);
      pool.emplace_back([&, t, begin, end] { partial[t] = scan(begin, end); });
    }
  }
  // Chunks are merged in index order with a strict comparison, so ties keep
  // the shortlex-first word.
  Best best;
  for (const Best& p : partial) {
    if (p.residual > best.residual) best = p;
  }

  TraceAuditReport report;
  report.words_checked = words.size();
  report.max_len = max_len;
  report.tolerance = tol.abs_tol;
  if (!words.empty()) {
    report.max_jk_residual = best.residual;
    report.worst_word = words[best.index];
  }
  report.passed = report.max_jk_residual <= tol.abs_tol;
  return report;
}

}  // namespace sp21kit
