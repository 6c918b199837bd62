#pragma once

// Empirical checks of the standard 2k-th mean value bounds for prime sums.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "modprime/primes.hpp"
#include "modprime/specfun.hpp"
#include "modprime/timeavg.hpp"

namespace modprime {

// extremal: a_p = 1, b_p = log p / log x. random: unit-modulus a_p with Philox phases.
enum class CoefficientMode { extremal, random };

CoefficientMode parse_coefficient_mode(std::string_view name);
std::string_view coefficient_mode_name(CoefficientMode mode);

struct MeanValueRow {
  std::string family;
  double empirical = 0.0;   // (1/T) int |sum|^{2k} dt
  double main_bound = 0.0;  // k! (sum ...)^k
  double slack = 0.0;       // empirical - main_bound
  double allowance_per_d = 0.0;  // 2 k! N^k / T, the remainder with D = 1
  double d_est = 0.0;            // slack / allowance_per_d
  double quadrature_error = 0.0;
};

struct AppendixBResult {
  std::vector<MeanValueRow> rows;  // sum p^{-1-2it}, sum_{y<p<=x}, log-weighted sum
};

// Requires k >= 0, y < x, and x <= T^{1/k}.
AppendixBResult appendix_b_suite(const PrimeTable& table, double x, double y, int k, double T, CoefficientMode mode,
                                 std::uint64_t seed = 0, const QuadratureConfig& cfg = {});

struct CombinedBoundRow {
  int V = 0;
  double X = 0.0;           // T^{1/V}
  double empirical = 0.0;   // 2V-th mean of (1/log X) sum_{n<=X} Lambda(n) g(log n/log X) n^{-1/2-it}
  double fitted_a = 0.0;    // A with empirical = 9^V * 2 (A V)^V
  double quadrature_error = 0.0;
};

struct CombinedBoundResult {
  std::vector<CombinedBoundRow> rows;
  double a_min = 0.0;
  double a_max = 0.0;
  bool stable = false;  // a_max / a_min <= 2
};

CombinedBoundResult appendix_b_combined(const PrimeTable& table, double T, std::span<const int> V_grid,
                                        Weight g = Weight::g, const QuadratureConfig& cfg = {});

}  // namespace modprime
