#pragma once

// Random model: independent uniform angles theta_p, one per prime, and the
// sum sum_p s_p sin(theta_p) with s_p = a_p / sqrt(p).

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "modprime/primes.hpp"
#include "modprime/specfun.hpp"

namespace modprime {

struct WeightedPrimeSystem {
  double x = 0.0;
  Weight weight = Weight::one;
  std::vector<std::uint32_t> primes;
  std::vector<double> amplitudes;  // a_p in [0, 1]
  std::vector<double> scales;      // s_p = a_p / sqrt(p)

  // Primes p <= x with a_p = w(log p / log x).
  static WeightedPrimeSystem from_table(const PrimeTable& table, double x, Weight w = Weight::one);
  // Arbitrary prime set with unit amplitudes (x is set to the largest prime).
  static WeightedPrimeSystem from_primes(std::vector<std::uint32_t> primes);

  std::size_t size() const { return primes.size(); }
  bool unit_weights() const { return weight == Weight::one; }
};

struct ModelCharfun {
  std::complex<double> value;
  // Some factor J_0(z s_p) lies within 1e-12 of zero; value is the direct product.
  bool near_singular = false;
};

// E[exp(i z sum_p s_p sin theta_p)] = prod_p J_0(z s_p).
ModelCharfun model_charfun(const WeightedPrimeSystem& sys, std::complex<double> z);

enum class MomentMode { automatic, rational, real };

struct ModelMoment {
  std::optional<mpq_class> exact;  // present in rational mode
  double value = 0.0;
  std::string to_string() const;
};

// Largest pi(x) for which automatic mode stays rational.
inline constexpr std::size_t kRationalPrimeBudget = 1200;

// E[(sum_p s_p sin theta_p)^k]. Odd k gives 0; k = 2m gives
// C(2m,m) (m!)^2 / 4^m times [z^m] prod_p sum_j (s_p^2 z)^j / (j!)^2.
// Rational mode needs unit weights.
ModelMoment model_moment_exact(const WeightedPrimeSystem& sys, int k, MomentMode mode = MomentMode::automatic);
// Raw moments m_1..m_K (index j holds m_{j+1}).
std::vector<double> model_moments(const WeightedPrimeSystem& sys, int K);
std::vector<mpq_class> model_moments_rational(const WeightedPrimeSystem& sys, int K);

// ((2m)! / (4^m m!)) (sum_p s_p^2)^m for k = 2m; odd k is a ContractError.
double model_moment_bound(const WeightedPrimeSystem& sys, int k);

struct SampleBatch {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<double> values;
  // -sum_p Im log(1 - e^{i theta_p} / sqrt(p)) for the same angles, if requested.
  std::vector<double> log_values;

  void write_csv(std::ostream& out) const;
};

// Angles come from Philox keyed by seed with counter (sample, prime index), so
// the batch is a pure function of (seed, count, sys) for any thread count.
SampleBatch sample_model(const WeightedPrimeSystem& sys, std::uint64_t seed, std::size_t count,
                         bool with_log_terms = false);

struct LogCorrelation {
  std::complex<double> value;
  double tail_bound = 0.0;  // bound on the omitted odd orders k > k_max
};

// sum_{p} sum_{k odd <= k_max} (i / (k p^{k/2})) J_k(u/sqrt p) prod_{q != p} J_0(u/sqrt q).
// Requires unit weights and odd k_max >= 1.
LogCorrelation model_log_correlation(const WeightedPrimeSystem& sys, double u, int k_max);

struct LogSecondMoment {
  double value = 0.0;
  double tail_bound = 0.0;
};

// sum_p sum_{k <= k_max} 1 / (2 k^2 p^k). Requires unit weights.
LogSecondMoment model_log_second_moment(const WeightedPrimeSystem& sys, int k_max);

}  // namespace modprime
