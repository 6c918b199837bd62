#pragma once

// Averages (1/T) int_T^{2T} F(t) dt of functionals of Dirichlet polynomials
// S(t) = sum_n beta_n sin(t omega_n), by composite quadrature whose step is
// tied to the fastest phase rate of the integrand.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "modprime/primes.hpp"
#include "modprime/specfun.hpp"

namespace modprime {

enum class PolyKind { prime_sum, prime_power_sum, custom };

class DirichletPolynomial {
 public:
  // beta_p = w(log p / log y) / sqrt(p) for p <= y.
  static DirichletPolynomial prime_sum(const PrimeTable& table, double y, Weight w = Weight::one);
  // beta_n = (1/k) w(log n / log y) / sqrt(n) for n = p^k <= y.
  static DirichletPolynomial prime_power_sum(const PrimeTable& table, double y, Weight w = Weight::one);
  // Frequencies must be strictly increasing and nonnegative.
  static DirichletPolynomial from_terms(std::vector<double> omega, std::vector<double> beta);

  std::span<const double> omegas() const { return omega_; }
  std::span<const double> betas() const { return beta_; }
  std::size_t size() const { return omega_.size(); }
  PolyKind kind() const { return kind_; }
  Weight weight() const { return weight_; }
  double cutoff() const { return cutoff_; }

  double max_frequency() const { return omega_.empty() ? 0.0 : omega_.back(); }
  // sum |beta_n| omega_n, a bound on |S'(t)|.
  double phase_rate() const;
  // sum |beta_n|, a bound on |S(t)|.
  double amplitude_bound() const;

 private:
  std::vector<double> omega_;
  std::vector<double> beta_;
  PolyKind kind_ = PolyKind::custom;
  Weight weight_ = Weight::one;
  double cutoff_ = 0.0;
};

// sum_n beta_n sin(t omega_n).
double eval_imag_sum(const DirichletPolynomial& poly, double t);
void eval_imag_sum_batch(const DirichletPolynomial& poly, std::span<const double> t, std::span<double> out);

enum class QuadratureRule { midpoint, gauss_legendre };

struct QuadratureConfig {
  int nodes_per_period = 8;
  QuadratureRule rule = QuadratureRule::midpoint;
  int gauss_points = 8;  // nodes per Gauss-Legendre panel
  std::size_t max_nodes = std::size_t{1} << 28;
};

struct QuadratureResult {
  std::complex<double> value;
  // |I(h) - I(2h)|: the change when the step is doubled.
  double error = 0.0;
  std::size_t nodes = 0;
};

// Nodes needed on [T, 2T] so that step * omega <= 2 pi / nodes_per_period.
std::size_t required_nodes(double T, double omega, const QuadratureConfig& cfg);

// Fills out[j] = F(t[j]) for a batch of nodes.
using BatchIntegrand = std::function<void(std::span<const double> t, std::span<std::complex<double>> out)>;

// (1/T) int_T^{2T} F(t) dt where omega bounds the phase rate of F.
// Throws ResourceError naming the node count when cfg.max_nodes is too small.
QuadratureResult average_over_window(double T, double omega, const QuadratureConfig& cfg, const BatchIntegrand& f);

// (1/T) int e^{i z S(t)} dt.
QuadratureResult time_average_charfun(const DirichletPolynomial& poly, double T, std::complex<double> z,
                                      const QuadratureConfig& cfg = {});
// (1/T) int S(t)^k dt.
QuadratureResult time_average_moment(const DirichletPolynomial& poly, double T, int k,
                                     const QuadratureConfig& cfg = {});
// (1/T) int e^{h S(t)} dt.
QuadratureResult time_average_expmoment(const DirichletPolynomial& poly, double T, double h,
                                        const QuadratureConfig& cfg = {});

struct TailMeasure {
  double fraction = 0.0;  // (1/T) |{t in [T, 2T] : S(t) >= threshold}|
  double error = 0.0;     // change when the grid step is doubled
  std::size_t crossings = 0;
};

// Crossings of S - threshold are located by bisection to 1e-6 / omega.
TailMeasure empirical_tail(const DirichletPolynomial& poly, double T, double threshold,
                           const QuadratureConfig& cfg = {});
// Same, for |S_a(t) - S_b(t)| > threshold.
TailMeasure empirical_difference_tail(const DirichletPolynomial& a, const DirichletPolynomial& b, double T,
                                      double threshold, const QuadratureConfig& cfg = {});

// S at the midpoints of n equal cells of [T, 2T], as equally weighted samples.
std::vector<double> sample_imag_sum(const DirichletPolynomial& poly, double T, std::size_t n);

struct MvCheck {
  std::complex<double> empirical;
  std::complex<double> main_term;
  std::complex<double> remainder;
  double bound_form = 0.0;  // (2/T) sqrt(sum m |a_m|^2) sqrt(sum m |b_m|^2)
  double quadrature_error = 0.0;
};

// a[m-1], b[m-1] are the coefficients of m^{-it}, m = 1..M.
MvCheck mv_check(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b, double T,
                 const QuadratureConfig& cfg = {});
// Coefficients with real and imaginary parts uniform in [-1/2, 1/2), from Philox.
std::vector<std::complex<double>> random_coefficients(std::uint64_t seed, std::size_t M);

struct SigmaStarDifference {
  double max_difference = 0.0;
  double loglog_half = 0.0;  // (log log x) / 2
  double slack = 0.0;        // max_difference - loglog_half
};

// Compares the prime sum and prime-power sum with weight w on a grid of t.
SigmaStarDifference sigma_star_difference(const PrimeTable& table, double x, Weight w,
                                          std::span<const double> t_grid);

}  // namespace modprime
