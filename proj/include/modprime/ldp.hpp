#pragma once

// Large-deviation scaffolding at speed eps = 1 / ((log log x) / 2).

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "modprime/primes.hpp"
#include "modprime/table.hpp"
#include "modprime/timeavg.hpp"

namespace modprime {

struct RateFunctionGrid {
  std::vector<double> lambda;
  std::vector<double> Lambda;
  std::vector<double> h;
  std::vector<double> I;  // +inf where the supremum runs off the grid
  // Smallest discrete second divided difference of Lambda.
  double min_second_difference = 0.0;
  bool convex = true;
};

inline constexpr double kConvexityTolerance = 1e-10;

// I(h) = sup_lambda (lambda h - Lambda(lambda)) over the grid, with three-point
// parabolic refinement at an interior argmax. Non-convex input is flagged.
RateFunctionGrid legendre_transform(std::span<const double> lambda, std::span<const double> Lambda,
                                    std::span<const double> h);

// eps * sum_{p<=x} log I_0(lambda / sqrt p), the model's scaled cumulant generating function.
double model_scaled_cgf(const PrimeTable& table, double x, double lambda);
double ldp_speed(double x);

enum class LdpMode { exact_cgf, monte_carlo, time_average };

struct LdpOptions {
  LdpMode mode = LdpMode::exact_cgf;
  double lambda_max = 2.0;
  int lambda_points = 81;
  std::size_t samples = 100000;  // monte_carlo
  std::uint64_t seed = 1;
  double T = 1e5;  // time_average
  QuadratureConfig cfg{};
};

// exact_cgf: sup_{|lambda| <= lambda_max} |Lambda_x - lambda^2/2| per x, the
// transform I_x(h) against h^2/2, and the Varadhan row eps log E[e^{hS}] vs h^2/2.
// monte_carlo / time_average: eps log P(S >= h/eps) vs -h^2/2 and the Varadhan row.
ConvergenceTable ldp_experiment(const PrimeTable& table, std::span<const double> x_grid,
                                std::span<const double> h_grid, const LdpOptions& opts = {});

// eps log (1/T)|{t : |S(t) - S*(t)| > delta}| for the prime sum and the
// prime-power sum with the same cutoff; -inf when the measured mass is zero.
ConvergenceTable exponential_equivalence_experiment(const PrimeTable& table, std::span<const double> x_grid,
                                                    double T, double delta, const QuadratureConfig& cfg = {});

}  // namespace modprime
