#include "modprime/phi.hpp"

#include <cmath>
#include <string>

#include "modprime/errors.hpp"
#include "modprime/summation.hpp"

namespace modprime {

namespace {

using cd = std::complex<double>;

void check_phi_args(cd z, double x, const PrimeTable& table) {
  if (std::abs(z) > kPhiEnvelope) {
    throw RangeError("|z| = " + std::to_string(std::abs(z)) + " exceeds the Phi envelope " +
                     std::to_string(kPhiEnvelope));
  }
  if (!(x >= 2.0) || x > static_cast<double>(table.limit())) {
    throw DomainError("cutoff x = " + std::to_string(x) + " outside [2, " + std::to_string(table.limit()) + "]");
  }
}

// -log(1 - q) - q for 0 <= q < 1.
double neg_log1m_minus_identity(double q) {
  if (q < 1e-2) {
    double acc = 0.0, qn = q * q;
    for (int n = 2; n <= 12; ++n, qn *= q) acc += qn / n;
    return acc;
  }
  return -std::log1p(-q) - q;
}

// -(z^2/4) log(1 - q) + log J_0(z sqrt q).
cd log_factor(cd z, double q) {
  const cd w = z * std::sqrt(q);
  const cd z2 = z * z;
  if (std::abs(w) <= 0.5) {
    // Both leading terms z^2 q / 4 cancel; keep only what remains.
    return z2 / 4.0 * neg_log1m_minus_identity(q) + log_bessel_j0_tail(w);
  }
  const cd d = bessel_j0_minus_one(w);
  if (std::abs(1.0 + d) < 1e-12) {
    throw NearSingularError("J_0(" + std::to_string(w.real()) + (w.imag() < 0 ? "" : "+") +
                            std::to_string(w.imag()) + "i) is within 1e-12 of zero");
  }
  return -z2 / 4.0 * std::log1p(-q) + log_bessel_j0(w);
}

// Sum_{p>x} p^{-2} ~ 1 / (x log x); the per-prime log factor is at most
// (|z|^2/8 + |z|^4/64) p^{-2} in magnitude, so the bound below has slack.
double tail_bound(cd z, double x) {
  const double r2 = std::norm(z);
  return (r2 + r2 * r2) / (x * std::log(x));
}

PhiEvaluation evaluate(cd z, double x, const PrimeTable& table, Weight w) {
  check_phi_args(z, x, table);
  const std::size_t n = table.count_upto(x);
  const auto p = table.primes();
  const auto lp = table.log_primes();
  const double log_x = std::log(x);
  std::vector<cd> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = w == Weight::one ? 1.0 : apply_weight(w, std::min(1.0, lp[i] / log_x));
    terms[i] = log_factor(z, a * a / p[i]);
  }
  PhiEvaluation out;
  out.argument = z;
  out.cutoff = x;
  out.log_value = pairwise_sum<cd>(terms);
  if (z.imag() == 0.0) out.log_value.imag(0.0);
  out.value = std::exp(out.log_value);
  out.tail_estimate = tail_bound(z, x);
  return out;
}

}  // namespace

PhiEvaluation phi_partial(cd z, double x, const PrimeTable& table) { return evaluate(z, x, table, Weight::one); }

PhiEvaluation phi_weighted_partial(cd z, double x, const PrimeTable& table, Weight w) {
  return evaluate(z, x, table, w);
}

PhiEvaluation phi_reference(cd z, const PrimeTable& table) {
  const double X = static_cast<double>(table.limit());
  PhiEvaluation out = evaluate(z, X, table, Weight::one);
  // Leading tail: (z^2/8 - z^4/64) sum_{p>X} p^{-2}.
  const cd z2 = z * z;
  const cd correction = (z2 / 8.0 - z2 * z2 / 64.0) / (X * std::log(X));
  out.log_value += correction;
  if (z.imag() == 0.0) out.log_value.imag(0.0);
  out.value = std::exp(out.log_value);
  out.tail_estimate = std::abs(correction) / std::log(X) + tail_bound(z, X * X);
  return out;
}

LogPhiCoefficients log_phi_coefficients(int K, double x, const PrimeTable& table) {
  if (K < 1 || K > 12) throw ContractError("log_phi_coefficients needs 1 <= K <= 12");
  if (!(x >= 2.0) || x > static_cast<double>(table.limit())) {
    throw DomainError("cutoff x = " + std::to_string(x) + " outside [2, " + std::to_string(table.limit()) + "]");
  }
  const auto lambda = log_bessel_j0_coefficients();
  const std::size_t n_primes = table.count_upto(x);
  const auto p = table.primes();
  const double log_x = std::log(x);

  LogPhiCoefficients out;
  out.c.assign(K, 0.0);
  out.tail.assign(K, 0.0);
  double fact = 1.0;
  for (int m = 1; m <= K; ++m) {
    fact *= m;
    if (m % 2 == 1) continue;
    const int n = m / 2;
    // Coefficient of z^{2n}: (-1)^n lambda_n 4^{-n} sum_p p^{-n}, plus the
    // Mertens term sum_p log(1 - 1/p) / 4 at n = 1.
    double series_sum, tail;
    if (n == 1) {
      CompensatedSum acc;
      for (std::size_t i = 0; i < n_primes; ++i) acc += std::log1p(-1.0 / p[i]) + 1.0 / p[i];
      series_sum = acc.value();
      tail = -1.0 / (2.0 * x * log_x);
      series_sum += tail;
      series_sum /= 4.0;
      tail /= 4.0;
    } else {
      CompensatedSum acc;
      for (std::size_t i = 0; i < n_primes; ++i) acc += std::pow(double(p[i]), -n);
      const double scale = ((n % 2 == 0) ? 1.0 : -1.0) * lambda[n] * std::ldexp(1.0, -2 * n);
      tail = scale * std::pow(x, 1.0 - n) / ((n - 1) * log_x);
      series_sum = scale * acc.value() + tail;
    }
    out.c[m - 1] = fact * series_sum;
    out.tail[m - 1] = fact * std::abs(tail);
  }
  return out;
}

double gamma_estimate(double x, const PrimeTable& table, Weight w) {
  if (!(x > 2.0) || x > static_cast<double>(table.limit())) {
    throw DomainError("cutoff x = " + std::to_string(x) + " outside (2, " + std::to_string(table.limit()) + "]");
  }
  const std::size_t n = table.count_upto(x);
  const auto p = table.primes();
  const auto lp = table.log_primes();
  const double log_x = std::log(x);
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = w == Weight::one ? 1.0 : apply_weight(w, std::min(1.0, lp[i] / log_x));
    acc += std::log1p(-a * a / p[i]);
  }
  return -(std::log(log_x) + acc.value());
}

GammaFResult gamma_f(const std::vector<double>& x_grid, const PrimeTable& table, Weight w, ExtrapolationBasis basis) {
  if (x_grid.size() < 3) throw ContractError("gamma_f extrapolation needs at least 3 grid points");
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > x_grid[i - 1])) throw ContractError("gamma_f grid must be strictly ascending");
  }
  GammaFResult out;
  out.x = x_grid;
  out.basis = basis;
  std::vector<double> b(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    out.estimates.push_back(gamma_estimate(x_grid[i], table, w));
    const double il = 1.0 / std::log(x_grid[i]);
    b[i] = basis == ExtrapolationBasis::inv_log ? il : il * il;
  }
  // Ordinary least squares for estimate = g + slope * b.
  const double n = static_cast<double>(b.size());
  double sb = 0, se = 0, sbb = 0, sbe = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    sb += b[i];
    se += out.estimates[i];
    sbb += b[i] * b[i];
    sbe += b[i] * out.estimates[i];
  }
  out.slope = (n * sbe - sb * se) / (n * sbb - sb * sb);
  out.extrapolated = (se - out.slope * sb) / n;
  return out;
}

}  // namespace modprime
