#include "modprime/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "modprime/errors.hpp"
#include "modprime/series.hpp"

namespace modprime {

namespace {

using cd = std::complex<double>;

constexpr double kStopRelative = 1e-18;
constexpr int kMaxTerms = 400;

void check_envelope(cd z) {
  if (std::abs(z) > kBesselEnvelope) {
    throw RangeError("|z| = " + std::to_string(std::abs(z)) + " exceeds the Bessel envelope " +
                     std::to_string(kBesselEnvelope));
  }
}

cd leading_term(int k, cd half) {
  cd t = 1.0;
  for (int j = 1; j <= k; ++j) t *= half / static_cast<double>(j);
  return t;
}

BesselEval finish(int k_signed, cd z, cd value, double bound) {
  if (k_signed < 0 && (-k_signed) % 2 == 1) value = -value;
  // Real argument gives an exactly real series; drop any -0.0 imaginary noise.
  if (z.imag() == 0.0) value = {value.real(), 0.0};
  return {k_signed, z, value, bound};
}

// Coefficients of log J_0 as a series in q = z^2/4, computed exactly once.
const std::vector<double>& log_j0_coefficients() {
  static const std::vector<double> coeffs = [] {
    constexpr int kDegree = 30;
    RationalSeries j0(kDegree);
    mpz_class fact = 1;
    for (int n = 0; n <= kDegree; ++n) {
      if (n > 0) fact *= n;
      mpq_class c(1, 1);
      c /= mpq_class(fact * fact);
      j0[n] = (n % 2 == 0) ? c : mpq_class(-c);
    }
    const RationalSeries lg = series_log(j0);
    std::vector<double> out(kDegree + 1);
    for (int n = 0; n <= kDegree; ++n) out[n] = lg[n].get_d();
    return out;
  }();
  return coeffs;
}

}  // namespace

std::span<const double> log_bessel_j0_coefficients() { return log_j0_coefficients(); }

BesselEval bessel_j(int k_signed, cd z) {
  check_envelope(z);
  const int k = std::abs(k_signed);
  const cd half = z / 2.0;
  const cd q = -half * half;
  const double qa = std::abs(q);
  cd term = leading_term(k, half);
  cd sum = term;
  double bound = 0.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const cd next = term * q / (static_cast<double>(n + 1) * (n + 1 + k));
    const double rho = qa / (static_cast<double>(n + 2) * (n + 2 + k));
    if (rho < 0.5 && std::abs(next) < kStopRelative * std::max(1.0, std::abs(sum))) {
      bound = std::abs(next) / (1.0 - rho);
      break;
    }
    sum += next;
    term = next;
  }
  return finish(k_signed, z, sum, bound);
}

BesselEval bessel_j_terms(int k_signed, cd z, int n_terms) {
  check_envelope(z);
  if (n_terms < 1) throw ContractError("bessel_j_terms needs at least one term");
  const int k = std::abs(k_signed);
  const cd half = z / 2.0;
  const cd q = -half * half;
  cd term = leading_term(k, half);
  cd sum = term;
  for (int n = 0; n + 1 < n_terms; ++n) {
    term *= q / (static_cast<double>(n + 1) * (n + 1 + k));
    sum += term;
  }
  const cd next = term * q / (static_cast<double>(n_terms) * (n_terms + k));
  const double rho = std::abs(q) / (static_cast<double>(n_terms + 1) * (n_terms + 1 + k));
  const double bound = rho < 1.0 ? std::abs(next) / (1.0 - rho) : INFINITY;
  return finish(k_signed, z, sum, bound);
}

cd bessel_j0_minus_one(cd z) {
  check_envelope(z);
  const cd q = -(z * z) / 4.0;
  cd term = q;
  cd sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= q / (static_cast<double>(n + 1) * (n + 1));
    const double rho = std::abs(q) / (static_cast<double>(n + 2) * (n + 2));
    sum += term;
    if (rho < 0.5 && std::abs(term) < kStopRelative * std::max(1e-300, std::abs(sum))) break;
  }
  return sum;
}

cd log_bessel_j0_tail(cd z) {
  if (std::abs(z) > 1.0) throw RangeError("log_bessel_j0_tail needs |z| <= 1");
  const auto& c = log_j0_coefficients();
  const cd q = z * z / 4.0;
  // Horner from the top; coefficients decay like (1/1.446)^n in q.
  cd acc = 0.0;
  for (std::size_t n = c.size() - 1; n >= 2; --n) acc = acc * q + c[n];
  return acc * q * q;
}

cd log_bessel_j0(cd z) {
  if (std::abs(z) <= 0.5) return -z * z / 4.0 + log_bessel_j0_tail(z);
  const cd d = bessel_j0_minus_one(z);
  const double re = 0.5 * std::log1p(2.0 * d.real() + std::norm(d));
  const double im = std::atan2(d.imag(), 1.0 + d.real());
  return {re, im};
}

double weight_f(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("weight_f needs u in [0, 1], got " + std::to_string(u));
  if (u == 1.0) return 0.0;
  const double x = std::numbers::pi * u / 2.0;
  if (u < 1e-2) {
    // x cot x = 1 - x^2/3 - x^4/45 - 2x^6/945 - x^8/4725 - 2x^10/93555
    const double x2 = x * x;
    return 1.0 - x2 * (1.0 / 3 + x2 * (1.0 / 45 + x2 * (2.0 / 945 + x2 * (1.0 / 4725 + x2 * (2.0 / 93555)))));
  }
  return x / std::tan(x);
}

double weight_g(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("weight_g needs u in [0, 1], got " + std::to_string(u));
  return std::exp(-2.0 * u) * std::min(1.0, 2.0 * (1.0 - u));
}

double apply_weight(Weight w, double u) {
  switch (w) {
    case Weight::one:
      if (!(u >= 0.0 && u <= 1.0)) throw DomainError("weight argument outside [0, 1]");
      return 1.0;
    case Weight::f:
      return weight_f(u);
    case Weight::g:
      return weight_g(u);
  }
  return 1.0;
}

std::string_view weight_name(Weight w) {
  switch (w) {
    case Weight::one:
      return "one";
    case Weight::f:
      return "f";
    case Weight::g:
      return "g";
  }
  return "one";
}

Weight parse_weight(std::string_view name) {
  if (name == "one" || name == "1") return Weight::one;
  if (name == "f") return Weight::f;
  if (name == "g") return Weight::g;
  throw ContractError("unknown weight '" + std::string(name) + "' (expected one, f, g)");
}

// Both literals are recomputed independently by the test suite.
double euler_gamma() { return 0.57721566490153286061; }
double mertens_constant() { return 0.26149721284764278376; }

}  // namespace modprime
