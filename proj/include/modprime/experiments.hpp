#pragma once

// Convergence experiments assembled from the model, phi and timeavg layers.
// Every driver returns a ConvergenceTable; trend assertions go in its checks.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "modprime/primes.hpp"
#include "modprime/table.hpp"
#include "modprime/timeavg.hpp"

namespace modprime {

// Links the window start T to the cutoff: x = exp(log T / N), N = (log log T)^alpha.
struct TRule {
  double alpha = 1.5;
  double N(double T) const;
  double x_for(double T) const;
};

// Rows per (T, u): measured e^{u^2 (log log x + gamma)/4} times the time-averaged
// characteristic function of the prime sum; reference Phi(u).
ConvergenceTable theorem1_experiment(const PrimeTable& table, std::span<const double> T_grid,
                                     std::span<const double> u_grid, TRule rule = {},
                                     const QuadratureConfig& cfg = {});

// Same with weight f and gamma_f in the renormalizer; z may be complex.
ConvergenceTable theorem2_experiment(const PrimeTable& table, std::span<const double> T_grid,
                                     std::span<const std::complex<double>> z_grid, double gamma_f_value,
                                     TRule rule = {}, const QuadratureConfig& cfg = {});

// Taylor reconstruction of the model characteristic function from moments of
// order < 2N versus the exact product. Budget = u^{2N}/(2N)! times the moment bound.
ConvergenceTable truncation_experiment(const PrimeTable& table, double x, std::span<const double> u_grid, int N);

// Model cumulants kappa_1..kappa_K against c_m (kappa_2 renormalized by (log log x + gamma)/2).
ConvergenceTable cumulant_experiment(const PrimeTable& table, std::span<const double> x_grid, int K);

enum class CltSource { monte_carlo, time_average, normal_control };

struct CltOptions {
  CltSource source = CltSource::monte_carlo;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double T = 1e5;  // window start for the time_average source
};

struct CdfDiscrepancy {
  double kolmogorov = 0.0;  // sup |F_n - G|
  double interval = 0.0;    // sup over intervals, D+ + D-
};

// Discrepancy of the empirical CDF of the samples against the standard normal.
CdfDiscrepancy normal_discrepancy(std::vector<double> samples);

// (2/pi) int_{-U}^{U} |psi(u/sigma) - e^{-u^2/2}| / |u| du with psi the model
// characteristic function at cutoff x and sigma^2 = (log log x + gamma)/2.
double smoothing_budget(const PrimeTable& table, double x, double U = 6.0);

ConvergenceTable clt_error_experiment(const PrimeTable& table, std::span<const double> x_grid,
                                      const CltOptions& opts = {});

}  // namespace modprime
