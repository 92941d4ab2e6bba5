#include "sp21kit/fixtures.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace sp21kit {

std::string_view to_string(FixtureCase c) noexcept {
  switch (c) {
    case FixtureCase::C1: return "C1";
    case FixtureCase::C2: return "C2";
    case FixtureCase::C31: return "C31";
    case FixtureCase::BD0_C: return "BD0_C";
    case FixtureCase::BD0_J: return "BD0_J";
    case FixtureCase::BD0_IM: return "BD0_IM";
  }
  return "?";
}

std::optional<FixtureCase> parse_fixture_case(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
  for (FixtureCase c : {FixtureCase::C1, FixtureCase::C2, FixtureCase::C31, FixtureCase::BD0_C, FixtureCase::BD0_J,
                        FixtureCase::BD0_IM}) {
    if (upper == to_string(c)) return c;
  }
  return std::nullopt;
}

Quat bd0_j_gstar(const Quat& a, const Quat& l, const Quat& cstar) {
  return conj((Quat(1.0) - conj(l) * a) * inv(cstar));
}

double bd0_im_ratio(double a, double l, const Quat& c) {
  const double r = (l * a - 1.0) / c.norm2();
  if (r == 0.0) throw Error(Errc::InfeasibleSpec, "l a = 1 forces g = 0");
  return r;
}

namespace {

constexpr int kMaxAttempts = 200;

double normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

Quat random_complex(Rng& rng) {
  const double w = normal(rng);
  return Quat(w, normal(rng));
}

Quat unit_complex(Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double t = angle(rng);
  return Quat(std::cos(t), std::sin(t));
}

// Unit quaternion with every component at least 0.2 in magnitude.
Quat generic_unit(Rng& rng) {
  for (;;) {
    const double w = normal(rng);
    const double x = normal(rng);
    const double y = normal(rng);
    const Quat q(w, x, y, normal(rng));
    const Quat u = q / norm(q);
    if (std::min({std::abs(u.w()), std::abs(u.x()), std::abs(u.y()), std::abs(u.z())}) >= 0.2) return u;
  }
}

QMat3 conjugate_by_diagonal(const QMat3& m, const Quat& q) {
  const QMat3 t = QMat3::diagonal(Quat(1.0), q, Quat(1.0));
  const QMat3 t_inv = QMat3::diagonal(Quat(1.0), conj(q), Quat(1.0));
  return t * m * t_inv;
}

QMat3 complex_loxodromic(double lambda, double theta) {
  const Quat mu(std::cos(theta), std::sin(theta));
  const Quat nu(std::cos(2.0 * theta), -std::sin(2.0 * theta));
  return loxodromic_matrix(lambda, mu, nu);
}

QMat3 real_loxodromic(double lambda, double theta) {
  const double sign = std::cos(theta) > 0.0 ? 1.0 : -1.0;
  return loxodromic_matrix(lambda, Quat(sign), Quat(1.0));
}

bool is_multiple_of_pi(double theta) { return std::abs(std::sin(theta)) <= 1e-12; }

bool generic_entries(const QMat3& m, bool need_bd) {
  constexpr double kMin = 0.1;
  if (norm(m(0, 2)) < kMin || norm(m(2, 0)) < kMin) return false;
  if (need_bd && (norm(m(0, 1)) < kMin || norm(m(1, 0)) < kMin || norm(m(1, 2)) < kMin || norm(m(2, 1)) < kMin)) {
    return false;
  }
  return max_entry_norm(m) <= 20.0;
}

// Columns 1 and 3 of a sparse element: two null vectors of the form
// restricted to coordinates (1, 3) pairing to 1.
std::optional<QMat3> sparse_complex(Rng& rng) {
  auto inner = [](const std::array<Quat, 2>& p, const std::array<Quat, 2>& q) {
    return conj(q[0]) * p[1] + conj(q[1]) * p[0];
  };
  std::array<Quat, 2> x{random_complex(rng), random_complex(rng)};
  const double sx = inner(x, x).w();
  if (std::abs(sx) < 0.05 * (x[0].norm2() + x[1].norm2())) return std::nullopt;
  const Quat kx(1.0 / std::sqrt(std::abs(sx)));
  x = {x[0] * kx, x[1] * kx};
  const double sign_x = sx < 0.0 ? -1.0 : 1.0;

  std::array<Quat, 2> y{random_complex(rng), random_complex(rng)};
  const Quat proj = sign_x * inner(y, x);
  y = {y[0] - x[0] * proj, y[1] - x[1] * proj};
  const double sy = inner(y, y).w();
  if (std::abs(sy) < 0.05 * (y[0].norm2() + y[1].norm2()) || sy * sx > 0.0) return std::nullopt;
  const Quat ky(1.0 / std::sqrt(std::abs(sy)));
  y = {y[0] * ky, y[1] * ky};

  const auto& pos = sx > 0.0 ? x : y;
  const auto& neg = sx > 0.0 ? y : x;
  const double s = 1.0 / std::numbers::sqrt2;
  const Quat col1_top = s * (pos[0] + neg[0]);
  const Quat col1_bottom = s * (pos[1] + neg[1]);
  const Quat col3_top = s * (pos[0] - neg[0]);
  const Quat col3_bottom = s * (pos[1] - neg[1]);
  return QMat3(col1_top, Quat(), col3_top, Quat(), unit_complex(rng), Quat(), col1_bottom, Quat(), col3_bottom);
}

std::optional<QMat3> sparse_j(Rng& rng) {
  const Quat a = random_complex(rng);
  const Quat l = random_complex(rng);
  const Quat cstar = random_complex(rng);
  if (norm(cstar) < 0.3) return std::nullopt;
  const Quat gstar = bd0_j_gstar(a, l, cstar);
  const Quat j = Quat::unit_j();
  return QMat3(a, Quat(), cstar * j, Quat(), unit_complex(rng), Quat(), gstar * j, Quat(), l);
}

std::optional<QMat3> sparse_imaginary(Rng& rng, const Quat& axis) {
  const double a = normal(rng);
  const double l = normal(rng);
  const double s = normal(rng);
  if (std::abs(a) < 0.2 || std::abs(l) < 0.2 || std::abs(s) < 0.3) return std::nullopt;
  const Quat c = s * axis;
  const double r = (l * a - 1.0) / c.norm2();
  if (std::abs(r) < 0.05) return std::nullopt;
  return QMat3(Quat(a), Quat(), c, Quat(), unit_complex(rng), Quat(), r * conj(c), Quat(), Quat(l));
}

bool passes_gates(const GeneratorSet& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const QMat3& m = gens.generator(i);
    if (is_sp21(m).residual > 1e-10) return false;
    const double n = max_entry_norm(m);
    const auto identities = structure_identities(m);
    if (*std::max_element(identities.begin(), identities.end()) > 1e-10 * (1.0 + n * n)) return false;
  }
  return trace_audit(gens, 4).passed;
}

}  // namespace

GeneratorSet make_fixture(const FixtureSpec& spec) {
  if (!(spec.lambda > 1.0) || !std::isfinite(spec.lambda)) {
    throw Error(Errc::InfeasibleSpec, "lambda must exceed 1");
  }
  if (spec.num_generators == 0) throw Error(Errc::InfeasibleSpec, "at least one generator besides A is needed");
  const bool real_family = spec.case_tag == FixtureCase::C31 || spec.case_tag == FixtureCase::BD0_IM;
  const double theta = spec.theta.value_or(real_family ? 0.0 : std::numbers::pi / 5.0);
  if (!std::isfinite(theta)) throw Error(Errc::InfeasibleSpec, "theta must be finite");
  if (real_family && !is_multiple_of_pi(theta)) {
    // With theta = pi/2 mod pi the loxodromic carries i on the outer entries,
    // so the middle entries of words pick up non-real values that the
    // diag(1, q, 1) conjugation (or the imaginary axis) pushes out of C.
    throw Error(Errc::InfeasibleSpec, std::string(to_string(spec.case_tag)) + " needs theta = 0 mod pi");
  }

  Rng rng(spec.seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    GeneratorSet gens;
    gens.labels.push_back("A");
    for (std::size_t i = 1; i <= spec.num_generators; ++i) gens.labels.push_back("B" + std::to_string(i));

    bool ok = true;
    switch (spec.case_tag) {
      case FixtureCase::C1:
      case FixtureCase::C2: {
        gens.loxodromic = complex_loxodromic(spec.lambda, theta);
        for (std::size_t i = 0; i < spec.num_generators && ok; ++i) {
          QMat3 m;
          try {
            m = random_sp21(rng, Field::Complex);
          } catch (const Error&) {
            ok = false;
            break;
          }
          ok = generic_entries(m, true);
          gens.others.push_back(m);
        }
        if (ok && spec.case_tag == FixtureCase::C2) {
          gens.loxodromic = conjugate_by_diagonal(gens.loxodromic, Quat::unit_j());
          for (QMat3& m : gens.others) m = conjugate_by_diagonal(m, Quat::unit_j());
        }
        break;
      }
      case FixtureCase::C31: {
        gens.loxodromic = real_loxodromic(spec.lambda, theta);
        for (std::size_t i = 0; i < spec.num_generators && ok; ++i) {
          QMat3 m;
          try {
            m = random_sp21(rng, Field::Real);
          } catch (const Error&) {
            ok = false;
            break;
          }
          ok = generic_entries(m, true);
          gens.others.push_back(m);
        }
        if (ok) {
          const Quat q = generic_unit(rng);
          gens.loxodromic = conjugate_by_diagonal(gens.loxodromic, q);
          for (QMat3& m : gens.others) m = conjugate_by_diagonal(m, q);
        }
        break;
      }
      case FixtureCase::BD0_C:
      case FixtureCase::BD0_J: {
        gens.loxodromic = complex_loxodromic(spec.lambda, theta);
        for (std::size_t i = 0; i < spec.num_generators && ok; ++i) {
          const auto m = spec.case_tag == FixtureCase::BD0_C ? sparse_complex(rng) : sparse_j(rng);
          ok = m && generic_entries(*m, false);
          if (ok) gens.others.push_back(*m);
        }
        break;
      }
      case FixtureCase::BD0_IM: {
        gens.loxodromic = real_loxodromic(spec.lambda, theta);
        const double ci = normal(rng);
        const double cj = normal(rng);
        const Quat raw(0.0, ci, cj, normal(rng));
        const Quat axis = raw / norm(raw);
        if (std::abs(axis.x()) < 0.2 || jk_magnitude(axis) < 0.2) {
          ok = false;
          break;
        }
        for (std::size_t i = 0; i < spec.num_generators && ok; ++i) {
          const auto m = sparse_imaginary(rng, axis);
          ok = m && generic_entries(*m, false);
          if (ok) gens.others.push_back(*m);
        }
        break;
      }
    }
    if (ok && passes_gates(gens)) return gens;
  }
  throw Error(Errc::InfeasibleSpec, "no draw passed the fixture gates");
}

QMat3 imaginary_c_witness(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Quat a(normal(rng), normal(rng));
    double c1 = normal(rng);
    const double r1 = normal(rng);
    if (std::abs(r1) < 0.3 || std::abs(a.x()) < 0.2 || std::abs(c1) < 0.2) continue;
    // Structure identity 3 needs |b|^2 = -2 a_1 c_1 > 0.
    if (a.x() * c1 > 0.0) c1 = -c1;
    const double nb2 = -2.0 * a.x() * c1;
    // Structure identity 1 fixes |c|: |a|^2 - r1 |b|^2 + r1^2 |c|^2 = 1.
    const double c_rest = (1.0 - a.norm2() + r1 * nb2) / (r1 * r1) - c1 * c1;
    if (c_rest < 0.04) continue;
    const double t = angle(rng);
    const Quat c(0.0, c1, std::sqrt(c_rest) * std::cos(t), std::sqrt(c_rest) * std::sin(t));

    // e = b^-1 (conj(a) + r1 c) b must be complex: rotate Im(x) onto i.
    const Quat x = conj(a) + r1 * c;
    const Quat im(0.0, x.x(), x.y(), x.z());
    if (norm(im) < 0.1) continue;
    const Quat v = im / norm(im);
    Quat u = Quat(1.0) - v * Quat::unit_i();
    u = norm(u) < 1e-6 ? Quat::unit_j() : u / norm(u);
    const Quat b = std::sqrt(nb2) * u;
    const Quat e_full = inv(b) * x * b;
    const Quat e(e_full.w(), e_full.x());

    const QMat3 m(a, b, c, r1 * conj(b), e, -conj(b), r1 * r1 * c, -r1 * b, a);
    if (is_sp21(m).residual <= 1e-10 && max_entry_norm(m) <= 20.0) return m;
  }
  throw Error(Errc::InfeasibleSpec, "no admissible witness found");
}

namespace {

Quat qpow(const Quat& q, int n) {
  Quat out(1.0);
  for (int k = 0; k < n; ++k) out = out * q;
  return out;
}

using Residual = Eigen::Matrix<double, 10, 1>;
using Jacobian = Eigen::Matrix<double, 10, 8>;

Quat basis(int c) {
  switch (c) {
    case 0: return Quat(1.0);
    case 1: return Quat::unit_i();
    case 2: return Quat::unit_j();
    default: return Quat::unit_k();
  }
}

// jk parts of tr(A^n) = (lambda^n + lambda^-n) mu^n + nu^n, each divided by
// lambda^n + lambda^-n + 1, then the two unit constraints.
Residual residuals(double lambda, const Quat& mu, const Quat& nu) {
  Residual r;
  for (int n = 1; n <= 4; ++n) {
    const double s = std::pow(lambda, n) + std::pow(lambda, -n);
    const double w = 1.0 / (s + 1.0);
    const Quat pm = qpow(mu, n);
    const Quat pn = qpow(nu, n);
    r(2 * (n - 1)) = w * (s * pm.y() + pn.y());
    r(2 * (n - 1) + 1) = w * (s * pm.z() + pn.z());
  }
  r(8) = mu.norm2() - 1.0;
  r(9) = nu.norm2() - 1.0;
  return r;
}

// d(q^n) = sum_k q^k dq q^(n-1-k).
Quat power_derivative(const Quat& q, int n, const Quat& dq) {
  Quat out;
  for (int k = 0; k < n; ++k) out += qpow(q, k) * dq * qpow(q, n - 1 - k);
  return out;
}

Jacobian jacobian(double lambda, const Quat& mu, const Quat& nu) {
  Jacobian jac = Jacobian::Zero();
  const std::array<double, 4> mc{mu.w(), mu.x(), mu.y(), mu.z()};
  const std::array<double, 4> nc{nu.w(), nu.x(), nu.y(), nu.z()};
  for (int c = 0; c < 4; ++c) {
    const Quat dq = basis(c);
    for (int n = 1; n <= 4; ++n) {
      const double s = std::pow(lambda, n) + std::pow(lambda, -n);
      const double w = 1.0 / (s + 1.0);
      const Quat dm = power_derivative(mu, n, dq);
      const Quat dn = power_derivative(nu, n, dq);
      jac(2 * (n - 1), c) = w * s * dm.y();
      jac(2 * (n - 1) + 1, c) = w * s * dm.z();
      jac(2 * (n - 1), 4 + c) = w * dn.y();
      jac(2 * (n - 1) + 1, 4 + c) = w * dn.z();
    }
    jac(8, c) = 2.0 * mc[static_cast<std::size_t>(c)];
    jac(9, 4 + c) = 2.0 * nc[static_cast<std::size_t>(c)];
  }
  return jac;
}

Quat random_unit(Rng& rng) {
  for (;;) {
    const double w = normal(rng);
    const double x = normal(rng);
    const double y = normal(rng);
    const Quat q(w, x, y, normal(rng));
    if (norm(q) > 1e-3) return q / norm(q);
  }
}

bool is_counterexample(const Quat& mu, const Quat& nu, double tol) {
  return jk_magnitude(mu) > tol || jk_magnitude(nu) > tol;
}

}  // namespace

FalsifierReport falsify_loxodromic_unitarity(std::size_t trials, std::uint64_t seed,
                                             const FalsifierOptions& options,
                                             std::span<const FalsifierSample> injected) {
  if (trials > 10'000'000) throw Error(Errc::ConstraintViolated, "at most 10^7 trials");
  Rng rng(seed);
  std::uniform_real_distribution<double> lambda_dist(1.0, 10.0);
  FalsifierReport report;
  report.trials = trials;

  for (std::size_t t = 0; t < trials; ++t) {
    double lambda = lambda_dist(rng);
    while (lambda <= 1.0) lambda = lambda_dist(rng);
    Quat mu = random_unit(rng);
    Quat nu = random_unit(rng);

    Residual r = residuals(lambda, mu, nu);
    double cost = r.squaredNorm();
    double damping = 1e-3;
    bool converged = false;
    for (int it = 0; it < options.max_iterations; ++it) {
      if (r.cwiseAbs().maxCoeff() <= options.converged_tol) {
        converged = true;
        break;
      }
      const Jacobian jac = jacobian(lambda, mu, nu);
      const Eigen::Matrix<double, 8, 8> h = jac.transpose() * jac;
      const Eigen::Matrix<double, 8, 1> g = jac.transpose() * r;
      bool improved = false;
      for (int tries = 0; tries < 30 && !improved; ++tries) {
        Eigen::Matrix<double, 8, 8> damped = h;
        damped.diagonal().array() += damping * (1.0 + h.diagonal().array());
        const Eigen::Matrix<double, 8, 1> step = damped.ldlt().solve(-g);
        const Quat mu_next = mu + Quat(step(0), step(1), step(2), step(3));
        const Quat nu_next = nu + Quat(step(4), step(5), step(6), step(7));
        const Residual r_next = residuals(lambda, mu_next, nu_next);
        const double cost_next = r_next.squaredNorm();
        if (cost_next < cost) {
          mu = mu_next;
          nu = nu_next;
          r = r_next;
          cost = cost_next;
          damping = std::max(damping / 3.0, 1e-12);
          improved = true;
        } else {
          damping *= 4.0;
        }
      }
      if (!improved) break;
    }
    if (!converged && r.cwiseAbs().maxCoeff() <= options.converged_tol) converged = true;
    if (!converged) {
      ++report.not_converged;
      continue;
    }
    ++report.converged;
    const double residual = r.cwiseAbs().maxCoeff();
    report.max_converged_residual = std::max(report.max_converged_residual, residual);
    if (is_counterexample(mu, nu, options.report_tol)) {
      report.counterexamples.push_back({lambda, mu, nu, residual, false});
    }
  }

  for (const FalsifierSample& sample : injected) {
    if (is_counterexample(sample.mu, sample.nu, options.report_tol)) {
      FalsifierSample flagged = sample;
      flagged.residual = residuals(sample.lambda, sample.mu, sample.nu).cwiseAbs().maxCoeff();
      flagged.injected = true;
      report.counterexamples.push_back(flagged);
    }
  }
  return report;
}

}  // namespace sp21kit
