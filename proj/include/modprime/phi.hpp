#pragma once

// The limit function Phi(z) = prod_p (1 - 1/p)^{-z^2/4} J_0(z / sqrt p), its
// weighted variant, the Taylor coefficients of log Phi(-iz), and gamma_f.

#include <complex>
#include <vector>

#include "modprime/primes.hpp"
#include "modprime/specfun.hpp"

namespace modprime {

struct PhiEvaluation {
  std::complex<double> argument;
  double cutoff = 0.0;
  std::complex<double> value;
  std::complex<double> log_value;
  // Bound on |log(partial / limit)| from the decay of the per-prime log factor.
  double tail_estimate = 0.0;
};

// Largest |z| accepted by the Phi evaluators.
inline constexpr double kPhiEnvelope = 3.0;

// prod_{p<=x} (1 - 1/p)^{-z^2/4} J_0(z / sqrt p).
PhiEvaluation phi_partial(std::complex<double> z, double x, const PrimeTable& table);
// prod_{p<=x} (1 - a_p^2/p)^{-z^2/4} J_0(z a_p / sqrt p), a_p = w(log p / log x).
// Weight::one runs the same code as phi_partial.
PhiEvaluation phi_weighted_partial(std::complex<double> z, double x, const PrimeTable& table, Weight w);
// Partial product at table.limit() with the leading tail term added back.
PhiEvaluation phi_reference(std::complex<double> z, const PrimeTable& table);

struct LogPhiCoefficients {
  // c[m-1] = c_m with log Phi(-iz) = sum_m c_m z^m / m!.
  std::vector<double> c;
  // Magnitude of the tail extrapolation added to each c_m.
  std::vector<double> tail;
};

// Sums over p <= x plus an integral estimate of the p > x tail. K <= 12.
LogPhiCoefficients log_phi_coefficients(int K, double x, const PrimeTable& table);

enum class ExtrapolationBasis { inv_log, inv_log_squared };

struct GammaFResult {
  std::vector<double> x;
  std::vector<double> estimates;  // -log(log x prod_{p<=x} (1 - w^2/p))
  double extrapolated = 0.0;
  double slope = 0.0;  // b in estimate = extrapolated + b * basis(x)
  ExtrapolationBasis basis = ExtrapolationBasis::inv_log_squared;
};

double gamma_estimate(double x, const PrimeTable& table, Weight w);
// Least-squares fit over an ascending grid of at least 3 points.
GammaFResult gamma_f(const std::vector<double>& x_grid, const PrimeTable& table, Weight w = Weight::f,
                     ExtrapolationBasis basis = ExtrapolationBasis::inv_log_squared);

}  // namespace modprime
