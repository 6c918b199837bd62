#include "modprime/experiments.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "modprime/errors.hpp"
#include "modprime/format.hpp"
#include "modprime/kernels.hpp"
#include "modprime/model.hpp"
#include "modprime/phi.hpp"
#include "modprime/series.hpp"
#include "modprime/specfun.hpp"
#include "modprime/summation.hpp"

namespace modprime {

namespace {

using cd = std::complex<double>;

std::string z_text(cd z) {
  if (z.imag() == 0.0) return format_real(z.real());
  return format_real(z.real()) + (z.imag() < 0 ? "" : "+") + format_real(z.imag()) + "i";
}

double loglog(double x) { return std::log(std::log(x)); }

// Largest index-ordered drop check: last < first and each step no worse than tol.
bool trend_down(const std::vector<double>& v, double tol) {
  if (v.size() < 2) return false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + tol) return false;
  }
  return v.back() < v.front();
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_real(v[i]);
  return s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

double TRule::N(double T) const {
  if (!(T > std::numbers::e)) throw DomainError("T must exceed e for the cutoff rule");
  return std::pow(loglog(T), alpha);
}

double TRule::x_for(double T) const {
  const double n = N(T);
  return std::exp(std::log(T) / n);
}

ConvergenceTable theorem1_experiment(const PrimeTable& table, std::span<const double> T_grid,
                                     std::span<const double> u_grid, TRule rule, const QuadratureConfig& cfg) {
  ConvergenceTable tab;
  std::vector<std::vector<double>> diffs(u_grid.size());
  for (double T : T_grid) {
    const double x = rule.x_for(T);
    if (x < 2.0) throw DomainError("cutoff rule gives x < 2 at T = " + format_real(T));
    const auto poly = DirichletPolynomial::prime_sum(table, x);
    const auto sys = WeightedPrimeSystem::from_table(table, x);
    const double L = loglog(x) + euler_gamma();
    for (std::size_t j = 0; j < u_grid.size(); ++j) {
      const double u = u_grid[j];
      const QuadratureResult ta = time_average_charfun(poly, T, u, cfg);
      const double renorm = std::exp(u * u * L / 4.0);
      const cd measured = renorm * ta.value;
      const cd reference = phi_reference(u, table).value;
      const cd model_side = renorm * model_charfun(sys, u).value;
      const double diff = std::abs(measured - reference);
      tab.add_row({"T=" + format_real(T) + ";x=" + format_real(x) + ";u=" + format_real(u), measured.real(),
                   reference.real(), diff, renorm * ta.error + std::abs(model_side - reference)});
      diffs[j].push_back(diff);
    }
  }
  for (std::size_t j = 0; j < u_grid.size(); ++j) {
    if (u_grid[j] == 0.0) continue;
    tab.check("theorem1 difference decreases in T at u=" + format_real(u_grid[j]),
              T_grid.size() >= 3 && trend_down(diffs[j], 0.0), "diffs " + join(diffs[j]));
  }
  return tab;
}

ConvergenceTable theorem2_experiment(const PrimeTable& table, std::span<const double> T_grid,
                                     std::span<const cd> z_grid, double gamma_f_value, TRule rule,
                                     const QuadratureConfig& cfg) {
  ConvergenceTable tab;
  std::vector<std::vector<double>> ratio_gap(z_grid.size());
  std::vector<bool> in_band(z_grid.size(), true);
  for (double T : T_grid) {
    const double x = rule.x_for(T);
    if (x < 2.0) throw DomainError("cutoff rule gives x < 2 at T = " + format_real(T));
    const auto poly = DirichletPolynomial::prime_sum(table, x, Weight::f);
    const auto sys = WeightedPrimeSystem::from_table(table, x, Weight::f);
    const double L = loglog(x) + gamma_f_value;
    for (std::size_t j = 0; j < z_grid.size(); ++j) {
      const cd z = z_grid[j];
      const QuadratureResult ta = time_average_charfun(poly, T, z, cfg);
      const cd renorm = std::exp(z * z * L / 4.0);
      const cd measured = renorm * ta.value;
      const cd reference = phi_reference(z, table).value;
      const cd model_side = renorm * model_charfun(sys, z).value;
      tab.add_row({"T=" + format_real(T) + ";x=" + format_real(x) + ";z=" + z_text(z), measured.real(),
                   reference.real(), std::abs(measured - reference),
                   std::abs(renorm) * ta.error + std::abs(model_side - reference)});
      const double ratio = std::abs(measured) / std::abs(reference);
      if (!(ratio >= 0.5 && ratio <= 2.0)) in_band[j] = false;
      ratio_gap[j].push_back(std::abs(ratio - 1.0));
    }
  }
  for (std::size_t j = 0; j < z_grid.size(); ++j) {
    if (z_grid[j] == cd(0.0)) continue;
    const std::string tag = "z=" + z_text(z_grid[j]);
    tab.check("theorem2 ratio within [0.5, 2] at " + tag, in_band[j]);
    tab.check("theorem2 ratio trends to 1 at " + tag,
              ratio_gap[j].size() >= 2 && ratio_gap[j].back() < ratio_gap[j].front(),
              "|ratio-1| " + join(ratio_gap[j]));
  }
  return tab;
}

ConvergenceTable truncation_experiment(const PrimeTable& table, double x, std::span<const double> u_grid, int N) {
  if (N < 1) throw ContractError("truncation order N must be >= 1");
  const auto sys = WeightedPrimeSystem::from_table(table, x);
  const auto moments = model_moments(sys, 2 * N);
  const double moment_bound = model_moment_bound(sys, 2 * N);
  ConvergenceTable tab;
  bool all_within = true;
  for (double u : u_grid) {
    // sum_{k <= 2N-1} (iu)^k m_k / k!; odd moments vanish.
    double recon = 1.0, abs_sum = 1.0;
    for (int j = 1; j < N; ++j) {
      const double m = moments[2 * j - 1];
      double term = 0.0;
      if (m > 0.0 && u != 0.0) term = std::exp(std::log(m) + 2 * j * std::log(std::abs(u)) - std::lgamma(2 * j + 1.0));
      recon += (j % 2 == 0) ? term : -term;
      abs_sum += term;
    }
    const double exact = model_charfun(sys, u).value.real();
    const double err = std::abs(recon - exact);
    double bound = 0.0;
    if (u != 0.0) bound = std::exp(2 * N * std::log(std::abs(u)) - std::lgamma(2 * N + 1.0) + std::log(moment_bound));
    // Floating-point evaluation of the alternating sum.
    const double rounding = 8.0 * DBL_EPSILON * (abs_sum + 1.0);
    const double budget = bound + rounding;
    tab.add_row({"x=" + format_real(x) + ";u=" + format_real(u) + ";N=" + std::to_string(N), recon, exact, err, budget});
    if (!(err <= budget)) all_within = false;
  }
  tab.check("truncation error within bound at N=" + std::to_string(N), all_within);
  return tab;
}

ConvergenceTable cumulant_experiment(const PrimeTable& table, std::span<const double> x_grid, int K) {
  if (K < 1 || K > 8) throw ContractError("cumulant_experiment needs 1 <= K <= 8");
  const auto limit = log_phi_coefficients(K, static_cast<double>(table.limit()), table);
  ConvergenceTable tab;
  double last_c2_gap = INFINITY, last_c4_gap = INFINITY;
  for (double x : x_grid) {
    const auto sys = WeightedPrimeSystem::from_table(table, x);
    std::vector<double> kappa(K);
    if (sys.size() <= kRationalPrimeBudget) {
      const auto mq = model_moments_rational(sys, K);
      const auto kq = moments_to_cumulants<mpq_class>(mq, K);
      for (int m = 0; m < K; ++m) kappa[m] = kq[m].get_d();
    } else {
      const auto md = model_moments(sys, K);
      kappa = moments_to_cumulants<double>(md, K);
    }
    const auto at_x = log_phi_coefficients(K, x, table);
    const double log_x = std::log(x);
    for (int m = 1; m <= K; ++m) {
      double measured = kappa[m - 1];
      double budget = 0.0;
      if (m == 2) {
        measured -= (loglog(x) + euler_gamma()) / 2.0;
        budget = 1.0 / (4.0 * log_x * log_x);
      } else if (m % 2 == 0) {
        budget = 2.0 * at_x.tail[m - 1] + limit.tail[m - 1];
      }
      const double ref = limit.c[m - 1];
      tab.add("x=" + format_real(x) + ";m=" + std::to_string(m), measured, ref, budget);
      if (m == 2) last_c2_gap = std::abs(measured - ref);
      if (m == 4) last_c4_gap = std::abs(measured - ref);
    }
  }
  const double route_gap = std::abs(limit.c.size() >= 2 ? limit.c[1] - (mertens_constant() - euler_gamma()) / 2.0 : 0.0);
  tab.check("c_2 agrees with (M - gamma)/2 within 1e-6", K >= 2 && route_gap < 1e-6, "gap " + format_real(route_gap));
  if (K >= 2) tab.check("renormalized kappa_2 within 1e-2 of c_2 at largest x", last_c2_gap < 1e-2, format_real(last_c2_gap));
  if (K >= 4) tab.check("kappa_4 within 1e-3 of c_4 at largest x", last_c4_gap < 1e-3, format_real(last_c4_gap));
  return tab;
}

CdfDiscrepancy normal_discrepancy(std::vector<double> samples) {
  if (samples.empty()) throw ContractError("need at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d_plus = 0.0, d_minus = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double g = normal_cdf(samples[i]);
    d_plus = std::max(d_plus, (i + 1) / n - g);
    d_minus = std::max(d_minus, g - i / n);
  }
  return {std::max(d_plus, d_minus), d_plus + d_minus};
}

double smoothing_budget(const PrimeTable& table, double x, double U) {
  const auto sys = WeightedPrimeSystem::from_table(table, x);
  const double sigma = std::sqrt((loglog(x) + euler_gamma()) / 2.0);
  // Composite 16-point Gauss-Legendre on [0, U]; the integrand is even in u.
  static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
                               0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
  static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                               0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
  constexpr int kPanels = 24;
  const double H = U / kPanels;
  CompensatedSum acc;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = (p + 0.5) * H;
    for (int i = 0; i < 8; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double u = mid + sgn * 0.5 * H * gx[i];
        const double psi = model_charfun(sys, u / sigma).value.real();
        acc += 0.5 * H * gw[i] * std::abs(psi - std::exp(-u * u / 2.0)) / u;
      }
    }
  }
  return 2.0 / std::numbers::pi * 2.0 * acc.value();
}

ConvergenceTable clt_error_experiment(const PrimeTable& table, std::span<const double> x_grid, const CltOptions& opts) {
  if (opts.samples < 1) throw ContractError("need at least one sample");
  ConvergenceTable tab;
  std::vector<double> kol;
  bool dominated = true;
  for (double x : x_grid) {
    std::vector<double> s;
    double scale = 1.0;
    switch (opts.source) {
      case CltSource::monte_carlo:
        s = sample_model(WeightedPrimeSystem::from_table(table, x), opts.seed, opts.samples).values;
        break;
      case CltSource::time_average:
        s = sample_imag_sum(DirichletPolynomial::prime_sum(table, x), opts.T, opts.samples);
        break;
      case CltSource::normal_control:
        s.resize(opts.samples);
        for (std::size_t i = 0; i < opts.samples; ++i) {
          const auto b = kernels::philox4x32(opts.seed, i, 0);
          const double u1 = (b.w[0] + 0.5) * 0x1p-32, u2 = (b.w[1] + 0.5) * 0x1p-32;
          s[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        }
        break;
    }
    if (opts.source != CltSource::normal_control) scale = std::sqrt((loglog(x) + euler_gamma()) / 2.0);
    for (double& v : s) v /= scale;
    const CdfDiscrepancy d = normal_discrepancy(std::move(s));
    const double budget = opts.source == CltSource::normal_control ? 3.0 / std::sqrt(double(opts.samples))
                                                                   : smoothing_budget(table, x);
    tab.add("x=" + format_real(x) + ";stat=kolmogorov", d.kolmogorov, 0.0, budget);
    tab.add("x=" + format_real(x) + ";stat=interval", d.interval, 0.0, budget);
    kol.push_back(d.kolmogorov);
    if (!(d.kolmogorov <= budget)) dominated = false;
  }
  tab.check("budget dominates the sup discrepancy at every x", dominated);
  if (opts.source != CltSource::normal_control && !kol.empty()) {
    tab.check("sup discrepancy < 0.02 at largest x", kol.back() < 0.02, format_real(kol.back()));
    tab.check("sup discrepancy decreases along x", trend_down(kol, 0.0) && kol.size() >= 2, join(kol));
  }
  return tab;
}

}  // namespace modprime
