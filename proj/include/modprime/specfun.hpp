#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>

namespace modprime {

struct BesselEval {
  int order;
  std::complex<double> argument;
  std::complex<double> value;
  // Bound on the absolute error from truncating the power series.
  double truncation_bound;
};

// Largest |z| accepted by bessel_j.
inline constexpr double kBesselEnvelope = 50.0;

// J_k(z) = sum_n (-1)^n (z/2)^{k+2n} / (n! (k+n)!), J_{-k} = (-1)^k J_k.
// Throws RangeError for |z| > kBesselEnvelope.
BesselEval bessel_j(int k, std::complex<double> z);
// Same series with a fixed number of terms (no adaptive stopping).
BesselEval bessel_j_terms(int k, std::complex<double> z, int n_terms);

// J_0(z) - 1 without cancellation for small |z|.
std::complex<double> bessel_j0_minus_one(std::complex<double> z);
// Principal log J_0(z): power series in z^2 for |z| <= 0.5, log1p of J_0 - 1 otherwise.
std::complex<double> log_bessel_j0(std::complex<double> z);
// lambda_0..lambda_30 with log J_0(z) = sum_n lambda_n (z^2/4)^n.
std::span<const double> log_bessel_j0_coefficients();
// log J_0(z) + z^2/4, i.e. the series from the z^4 term on. Requires |z| <= 1.
std::complex<double> log_bessel_j0_tail(std::complex<double> z);

// f(u) = (pi u/2) cot(pi u/2) on [0, 1]; removable singularity at 0, f(1) = 0.
double weight_f(double u);
// Selberg's weight g(u) = e^{-2u} min(1, 2(1-u)) on [0, 1].
double weight_g(double u);

enum class Weight { one, f, g };

double apply_weight(Weight w, double u);
std::string_view weight_name(Weight w);
Weight parse_weight(std::string_view name);

// Euler's constant.
double euler_gamma();
// Mertens' constant M = lim (sum_{p<=x} 1/p - log log x).
double mertens_constant();

}  // namespace modprime
