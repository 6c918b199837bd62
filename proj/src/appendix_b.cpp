#include "modprime/appendix_b.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "modprime/errors.hpp"
#include "modprime/kernels.hpp"
#include "modprime/summation.hpp"

namespace modprime {

namespace {

using cd = std::complex<double>;

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

// (1/T) int |sum_n c_n e^{-i t freq_n}|^{2k} dt.
QuadratureResult power_mean(std::span<const double> freq, std::span<const cd> coef, int k, double T,
                            const QuadratureConfig& cfg) {
  if (k == 0 || freq.empty()) return {cd(k == 0 ? 1.0 : 0.0), 0.0, 0};
  const BatchIntegrand f = [&](std::span<const double> t, std::span<cd> out) {
    std::vector<cd> v(t.size());
    kernels::exp_sum_batch(freq, coef, t, v);
    for (std::size_t j = 0; j < t.size(); ++j) out[j] = std::pow(std::norm(v[j]), k);
  };
  return average_over_window(T, 2.0 * k * freq.back(), cfg, f);
}

MeanValueRow make_row(std::string family, const QuadratureResult& q, double main_bound, int k, double count,
                      double T) {
  MeanValueRow r;
  r.family = std::move(family);
  r.empirical = q.value.real();
  r.quadrature_error = q.error;
  r.main_bound = main_bound;
  r.slack = r.empirical - main_bound;
  r.allowance_per_d = 2.0 * factorial(k) * std::pow(count, k) / T;
  r.d_est = r.slack / r.allowance_per_d;
  return r;
}

}  // namespace

CoefficientMode parse_coefficient_mode(std::string_view name) {
  if (name == "extremal" || name == "one") return CoefficientMode::extremal;
  if (name == "random") return CoefficientMode::random;
  throw ContractError("unknown coefficient mode '" + std::string(name) + "' (expected extremal, random)");
}

std::string_view coefficient_mode_name(CoefficientMode mode) {
  return mode == CoefficientMode::random ? "random" : "extremal";
}

AppendixBResult appendix_b_suite(const PrimeTable& table, double x, double y, int k, double T, CoefficientMode mode,
                                 std::uint64_t seed, const QuadratureConfig& cfg) {
  if (k < 0) throw ContractError("appendix_b_suite needs k >= 0");
  if (!(y >= 1.0) || !(y < x)) throw ContractError("appendix_b_suite needs 1 <= y < x");
  if (!(x >= 2.0) || x > static_cast<double>(table.limit())) throw DomainError("cutoff x outside the prime table");
  if (k >= 1 && x > std::pow(T, 1.0 / k) * (1.0 + 1e-12)) {
    throw ContractError("regime violated: x = " + std::to_string(x) + " exceeds T^{1/k} = " +
                        std::to_string(std::pow(T, 1.0 / k)));
  }
  const std::size_t n = table.count_upto(x);
  const std::size_t n_y = table.count_upto(y);
  const auto p = table.primes().first(n);
  const auto lp = table.log_primes().first(n);
  const double log_x = std::log(x);

  std::vector<cd> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = mode == CoefficientMode::extremal ? cd(1.0)
                                             : std::polar(1.0, kernels::uniform_angle(seed, 0, static_cast<std::uint32_t>(i)));
  }

  std::vector<double> f1(n), f2, f3(lp.begin(), lp.end());
  std::vector<cd> c1(n), c2, c3(n);
  CompensatedSum s1, s2, s3;
  for (std::size_t i = 0; i < n; ++i) {
    const double pd = p[i];
    f1[i] = 2.0 * lp[i];
    c1[i] = a[i] / pd;
    s1 += 1.0 / (pd * pd);
    if (i >= n_y) {
      f2.push_back(lp[i]);
      c2.push_back(a[i] / std::sqrt(pd));
      s2 += 1.0 / pd;
    }
    c3[i] = a[i] * (lp[i] / log_x) / std::sqrt(pd);
    s3 += (lp[i] / log_x) * (lp[i] / log_x) / pd;
  }
  const double kf = factorial(k);
  AppendixBResult out;
  out.rows.push_back(make_row("p^{-1-2it}", power_mean(f1, c1, k, T, cfg), kf * std::pow(s1.value(), k), k,
                              double(n), T));
  out.rows.push_back(make_row("y<p<=x", power_mean(f2, c2, k, T, cfg), kf * std::pow(s2.value(), k), k,
                              double(n - n_y), T));
  out.rows.push_back(make_row("log-weighted", power_mean(f3, c3, k, T, cfg),
                              kf * std::pow(s3.value(), k), k, double(n), T));
  return out;
}

CombinedBoundResult appendix_b_combined(const PrimeTable& table, double T, std::span<const int> V_grid, Weight g,
                                        const QuadratureConfig& cfg) {
  if (V_grid.empty()) throw ContractError("appendix_b_combined needs at least one V");
  CombinedBoundResult out;
  for (int V : V_grid) {
    if (V < 1) throw ContractError("V must be >= 1");
    const double X = std::pow(T, 1.0 / V);
    if (X > static_cast<double>(table.limit())) throw DomainError("T^{1/V} exceeds the prime table");
    const double log_X = std::log(X);
    const auto pp = table.prime_powers().first(table.powers_upto(X));
    std::vector<double> freq(pp.size());
    std::vector<cd> coef(pp.size());
    for (std::size_t i = 0; i < pp.size(); ++i) {
      const double lam = pp[i].log_n / pp[i].k;  // Lambda(n) = log p
      freq[i] = pp[i].log_n;
      coef[i] = lam * apply_weight(g, std::min(1.0, pp[i].log_n / log_X)) * pp[i].inv_sqrt_n / log_X;
    }
    const QuadratureResult q = power_mean(freq, coef, V, T, cfg);
    CombinedBoundRow row;
    row.V = V;
    row.X = X;
    row.empirical = q.value.real();
    row.quadrature_error = q.error;
    row.fitted_a = std::pow(row.empirical / (2.0 * std::pow(9.0, V)), 1.0 / V) / V;
    out.rows.push_back(row);
  }
  out.a_min = out.rows.front().fitted_a;
  out.a_max = out.a_min;
  for (const auto& r : out.rows) {
    out.a_min = std::min(out.a_min, r.fitted_a);
    out.a_max = std::max(out.a_max, r.fitted_a);
  }
  out.stable = out.a_min > 0.0 && out.a_max / out.a_min <= 2.0;
  return out;
}

}  // namespace modprime
