#include "modprime/timeavg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "modprime/errors.hpp"
#include "modprime/kernels.hpp"
#include "modprime/parallel.hpp"
#include "modprime/summation.hpp"

namespace modprime {

namespace {

using cd = std::complex<double>;

constexpr std::size_t kChunk = 4096;
constexpr std::size_t kMinNodes = 32;

std::vector<double> weighted_betas(std::span<const double> log_n, std::span<const double> inv_sqrt_n,
                                   std::span<const int> k, double y, Weight w) {
  const double log_y = std::log(y);
  std::vector<double> beta(log_n.size());
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    const double a = w == Weight::one ? 1.0 : apply_weight(w, std::min(1.0, log_n[i] / log_y));
    beta[i] = a * inv_sqrt_n[i] / (k.empty() ? 1 : k[i]);
  }
  return beta;
}

void check_cutoff(const PrimeTable& table, double y) {
  if (!(y >= 2.0) || y > static_cast<double>(table.limit())) {
    throw DomainError("cutoff y = " + std::to_string(y) + " outside [2, " + std::to_string(table.limit()) + "]");
  }
}

void check_window(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("window start T must be positive and finite");
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton's method on P_n.
struct GaussRule {
  std::vector<double> x, w;
};

GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

cd reduce_chunks(const std::vector<cd>& partial) {
  CompensatedComplexSum acc;
  for (const cd& v : partial) acc += v;
  return acc.value();
}

cd midpoint_average(double T, std::size_t n, const BatchIntegrand& f) {
  const double h = T / static_cast<double>(n);
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<cd> partial(n_chunks);
  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t j0 = c * kChunk, len = std::min(kChunk, n - j0);
    std::vector<double> t(len);
    std::vector<cd> v(len);
    for (std::size_t j = 0; j < len; ++j) t[j] = T + (static_cast<double>(j0 + j) + 0.5) * h;
    f(t, v);
    CompensatedComplexSum acc;
    for (const cd& e : v) acc += e;
    partial[c] = acc.value();
  });
  return reduce_chunks(partial) / static_cast<double>(n);
}

cd gauss_average(double T, std::size_t panels, const GaussRule& rule, const BatchIntegrand& f) {
  const std::size_t g = rule.x.size();
  const double H = T / static_cast<double>(panels);
  const std::size_t per_chunk = std::max<std::size_t>(1, kChunk / g);
  const std::size_t n_chunks = (panels + per_chunk - 1) / per_chunk;
  std::vector<cd> partial(n_chunks);
  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t p0 = c * per_chunk, np = std::min(per_chunk, panels - p0);
    std::vector<double> t(np * g);
    std::vector<cd> v(np * g);
    for (std::size_t p = 0; p < np; ++p) {
      const double left = T + static_cast<double>(p0 + p) * H;
      for (std::size_t i = 0; i < g; ++i) t[p * g + i] = left + 0.5 * H * (1.0 + rule.x[i]);
    }
    f(t, v);
    CompensatedComplexSum acc;
    for (std::size_t j = 0; j < v.size(); ++j) acc += v[j] * rule.w[j % g];
    partial[c] = acc.value();
  });
  return reduce_chunks(partial) * (0.5 / static_cast<double>(panels));
}

void check_budget(std::size_t n, const QuadratureConfig& cfg) {
  if (n > cfg.max_nodes) {
    throw ResourceError("quadrature needs " + std::to_string(n) + " nodes but the budget is " +
                        std::to_string(cfg.max_nodes));
  }
}

// Integrand built from S(t): evaluates S on the batch and maps it pointwise.
template <class Map>
BatchIntegrand from_sum(const DirichletPolynomial& poly, Map map) {
  return [&poly, map](std::span<const double> t, std::span<cd> out) {
    std::vector<double> s(t.size());
    eval_imag_sum_batch(poly, t, s);
    for (std::size_t j = 0; j < t.size(); ++j) out[j] = map(s[j]);
  };
}

using ScalarFn = std::function<double(double)>;
using BatchFn = std::function<void(std::span<const double>, std::span<double>)>;

struct TailPass {
  double measure = 0.0;
  std::size_t crossings = 0;
};

// Measure of {t in [T, 2T] : g(t) >= 0} on n cells with crossing bisection.
TailPass tail_pass(double T, std::size_t n, double tol, const BatchFn& g_batch, const ScalarFn& g) {
  const double h = T / static_cast<double>(n);
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> measure(n_chunks);
  std::vector<std::size_t> crossings(n_chunks);
  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t j0 = c * kChunk, len = std::min(kChunk, n - j0);
    std::vector<double> t(len + 1), v(len + 1);
    for (std::size_t j = 0; j <= len; ++j) t[j] = T + static_cast<double>(j0 + j) * h;
    g_batch(t, v);
    CompensatedSum acc;
    std::size_t cross = 0;
    for (std::size_t j = 0; j < len; ++j) {
      const bool in0 = v[j] >= 0.0, in1 = v[j + 1] >= 0.0;
      if (in0 && in1) {
        acc += t[j + 1] - t[j];
      } else if (in0 != in1) {
        ++cross;
        double a = t[j], b = t[j + 1];
        while (b - a > tol) {
          const double mid = 0.5 * (a + b);
          if ((g(mid) >= 0.0) == in0) a = mid; else b = mid;
        }
        const double r = 0.5 * (a + b);
        acc += in0 ? r - t[j] : t[j + 1] - r;
      }
    }
    measure[c] = acc.value();
    crossings[c] = cross;
  });
  TailPass out;
  CompensatedSum total;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    total += measure[c];
    out.crossings += crossings[c];
  }
  out.measure = total.value();
  return out;
}

TailMeasure tail_fraction(double T, double omega, const QuadratureConfig& cfg, const BatchFn& g_batch,
                          const ScalarFn& g) {
  check_window(T);
  const std::size_t n = required_nodes(T, omega, cfg);
  check_budget(n, cfg);
  const double tol = 1e-6 / std::max(omega, 1e-300);
  const TailPass fine = tail_pass(T, n, tol, g_batch, g);
  const TailPass coarse = tail_pass(T, std::max<std::size_t>(1, n / 2), tol, g_batch, g);
  TailMeasure out;
  out.fraction = fine.measure / T;
  out.error = std::abs(fine.measure - coarse.measure) / T;
  out.crossings = fine.crossings;
  return out;
}

}  // namespace

DirichletPolynomial DirichletPolynomial::prime_sum(const PrimeTable& table, double y, Weight w) {
  check_cutoff(table, y);
  const std::size_t n = table.count_upto(y);
  DirichletPolynomial poly;
  poly.kind_ = PolyKind::prime_sum;
  poly.weight_ = w;
  poly.cutoff_ = y;
  const auto lp = table.log_primes().first(n);
  poly.omega_.assign(lp.begin(), lp.end());
  poly.beta_ = weighted_betas(lp, table.inv_sqrt_primes().first(n), {}, y, w);
  return poly;
}

DirichletPolynomial DirichletPolynomial::prime_power_sum(const PrimeTable& table, double y, Weight w) {
  check_cutoff(table, y);
  const std::size_t n = table.powers_upto(y);
  const auto pp = table.prime_powers().first(n);
  std::vector<double> log_n(n), inv_sqrt(n);
  std::vector<int> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_n[i] = pp[i].log_n;
    inv_sqrt[i] = pp[i].inv_sqrt_n;
    k[i] = pp[i].k;
  }
  DirichletPolynomial poly;
  poly.kind_ = PolyKind::prime_power_sum;
  poly.weight_ = w;
  poly.cutoff_ = y;
  poly.beta_ = weighted_betas(log_n, inv_sqrt, k, y, w);
  poly.omega_ = std::move(log_n);
  return poly;
}

DirichletPolynomial DirichletPolynomial::from_terms(std::vector<double> omega, std::vector<double> beta) {
  if (omega.size() != beta.size()) throw ContractError("frequency and amplitude counts differ");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] >= 0.0) || (i > 0 && !(omega[i] > omega[i - 1]))) {
      throw ContractError("frequencies must be nonnegative and strictly increasing");
    }
  }
  DirichletPolynomial poly;
  poly.omega_ = std::move(omega);
  poly.beta_ = std::move(beta);
  poly.cutoff_ = poly.omega_.empty() ? 0.0 : std::exp(poly.omega_.back());
  return poly;
}

double DirichletPolynomial::phase_rate() const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < omega_.size(); ++i) acc += std::abs(beta_[i]) * omega_[i];
  return acc.value();
}

double DirichletPolynomial::amplitude_bound() const {
  CompensatedSum acc;
  for (double b : beta_) acc += std::abs(b);
  return acc.value();
}

double eval_imag_sum(const DirichletPolynomial& poly, double t) {
  double out = 0.0;
  eval_imag_sum_batch(poly, std::span<const double>(&t, 1), std::span<double>(&out, 1));
  return out;
}

void eval_imag_sum_batch(const DirichletPolynomial& poly, std::span<const double> t, std::span<double> out) {
  kernels::sin_sum_batch(poly.omegas(), poly.betas(), t, out);
}

std::size_t required_nodes(double T, double omega, const QuadratureConfig& cfg) {
  if (cfg.nodes_per_period < 1) throw ContractError("nodes_per_period must be >= 1");
  const double n = std::ceil(T * std::max(omega, 0.0) * cfg.nodes_per_period / (2.0 * std::numbers::pi));
  if (!(n < 1e18)) throw ResourceError("quadrature node count overflows");
  return std::max(kMinNodes, static_cast<std::size_t>(n));
}

QuadratureResult average_over_window(double T, double omega, const QuadratureConfig& cfg, const BatchIntegrand& f) {
  check_window(T);
  const std::size_t n = required_nodes(T, omega, cfg);
  check_budget(n, cfg);
  QuadratureResult out;
  out.nodes = n;
  if (cfg.rule == QuadratureRule::midpoint) {
    out.value = midpoint_average(T, n, f);
    out.error = std::abs(out.value - midpoint_average(T, std::max<std::size_t>(1, n / 2), f));
  } else {
    if (cfg.gauss_points < 1 || cfg.gauss_points > 64) throw ContractError("gauss_points must be in [1, 64]");
    const GaussRule rule = gauss_legendre(cfg.gauss_points);
    const std::size_t panels = (n + rule.x.size() - 1) / rule.x.size();
    out.nodes = panels * rule.x.size();
    out.value = gauss_average(T, panels, rule, f);
    out.error = std::abs(out.value - gauss_average(T, std::max<std::size_t>(1, panels / 2), rule, f));
  }
  return out;
}

QuadratureResult time_average_charfun(const DirichletPolynomial& poly, double T, cd z, const QuadratureConfig& cfg) {
  if (z == cd(0.0)) return {cd(1.0), 0.0, 0};
  const double omega = std::abs(z) * poly.phase_rate() + poly.max_frequency();
  if (z.imag() == 0.0) {
    const double u = z.real();
    return average_over_window(T, omega, cfg,
                               from_sum(poly, [u](double s) { return cd(std::cos(u * s), std::sin(u * s)); }));
  }
  const cd iz = cd(0.0, 1.0) * z;
  return average_over_window(T, omega, cfg, from_sum(poly, [iz](double s) { return std::exp(iz * s); }));
}

QuadratureResult time_average_moment(const DirichletPolynomial& poly, double T, int k, const QuadratureConfig& cfg) {
  if (k < 0) throw ContractError("moment order must be >= 0");
  if (k == 0) return {cd(1.0), 0.0, 0};
  const double omega = k * poly.max_frequency();
  return average_over_window(T, omega, cfg, from_sum(poly, [k](double s) {
                               double v = 1.0;
                               for (int i = 0; i < k; ++i) v *= s;
                               return cd(v);
                             }));
}

QuadratureResult time_average_expmoment(const DirichletPolynomial& poly, double T, double h,
                                        const QuadratureConfig& cfg) {
  if (h == 0.0) return {cd(1.0), 0.0, 0};
  const double omega = std::abs(h) * poly.phase_rate() + poly.max_frequency();
  return average_over_window(T, omega, cfg, from_sum(poly, [h](double s) { return cd(std::exp(h * s)); }));
}

TailMeasure empirical_tail(const DirichletPolynomial& poly, double T, double threshold, const QuadratureConfig& cfg) {
  const double omega = poly.phase_rate() + poly.max_frequency();
  const BatchFn batch = [&](std::span<const double> t, std::span<double> out) {
    eval_imag_sum_batch(poly, t, out);
    for (double& v : out) v -= threshold;
  };
  const ScalarFn scalar = [&](double t) { return eval_imag_sum(poly, t) - threshold; };
  return tail_fraction(T, omega, cfg, batch, scalar);
}

TailMeasure empirical_difference_tail(const DirichletPolynomial& a, const DirichletPolynomial& b, double T,
                                      double threshold, const QuadratureConfig& cfg) {
  const double omega = a.phase_rate() + b.phase_rate() + std::max(a.max_frequency(), b.max_frequency());
  const BatchFn batch = [&](std::span<const double> t, std::span<double> out) {
    std::vector<double> sb(t.size());
    eval_imag_sum_batch(a, t, out);
    eval_imag_sum_batch(b, t, sb);
    // A strict inequality |d| > threshold is measured as |d| - threshold >= 0.
    for (std::size_t j = 0; j < t.size(); ++j) out[j] = std::abs(out[j] - sb[j]) - threshold;
  };
  const ScalarFn scalar = [&](double t) { return std::abs(eval_imag_sum(a, t) - eval_imag_sum(b, t)) - threshold; };
  return tail_fraction(T, omega, cfg, batch, scalar);
}

std::vector<double> sample_imag_sum(const DirichletPolynomial& poly, double T, std::size_t n) {
  check_window(T);
  if (n < 1) throw ContractError("need at least one sample");
  std::vector<double> out(n);
  const double h = T / static_cast<double>(n);
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t j0 = c * kChunk, len = std::min(kChunk, n - j0);
    std::vector<double> t(len);
    for (std::size_t j = 0; j < len; ++j) t[j] = T + (static_cast<double>(j0 + j) + 0.5) * h;
    eval_imag_sum_batch(poly, t, std::span<double>(out).subspan(j0, len));
  });
  return out;
}

MvCheck mv_check(std::span<const cd> a, std::span<const cd> b, double T, const QuadratureConfig& cfg) {
  if (a.size() != b.size() || a.empty()) throw ContractError("mv_check needs two equal nonempty coefficient lists");
  const std::size_t M = a.size();
  std::vector<double> freq(M);
  for (std::size_t m = 1; m <= M; ++m) freq[m - 1] = std::log(static_cast<double>(m));
  const BatchIntegrand f = [&](std::span<const double> t, std::span<cd> out) {
    std::vector<cd> va(t.size()), vb(t.size());
    kernels::exp_sum_batch(freq, a, t, va);
    kernels::exp_sum_batch(freq, b, t, vb);
    for (std::size_t j = 0; j < t.size(); ++j) out[j] = va[j] * std::conj(vb[j]);
  };
  const QuadratureResult q = average_over_window(T, 2.0 * freq.back(), cfg, f);
  MvCheck out;
  out.empirical = q.value;
  out.quadrature_error = q.error;
  CompensatedComplexSum main;
  CompensatedSum na, nb;
  for (std::size_t m = 1; m <= M; ++m) {
    main += a[m - 1] * std::conj(b[m - 1]);
    na += static_cast<double>(m) * std::norm(a[m - 1]);
    nb += static_cast<double>(m) * std::norm(b[m - 1]);
  }
  out.main_term = main.value();
  out.remainder = out.empirical - out.main_term;
  out.bound_form = 2.0 / T * std::sqrt(na.value()) * std::sqrt(nb.value());
  return out;
}

std::vector<cd> random_coefficients(std::uint64_t seed, std::size_t M) {
  std::vector<cd> out(M);
  for (std::size_t m = 0; m < M; ++m) {
    const auto block = kernels::philox4x32(seed, m, 0);
    out[m] = {std::ldexp(double(block.w[0]), -32) - 0.5, std::ldexp(double(block.w[1]), -32) - 0.5};
  }
  return out;
}

SigmaStarDifference sigma_star_difference(const PrimeTable& table, double x, Weight w,
                                          std::span<const double> t_grid) {
  if (!(x >= 2.0)) throw DomainError("sigma_star_difference needs x >= 2");
  const auto primes = DirichletPolynomial::prime_sum(table, x, w);
  const auto powers = DirichletPolynomial::prime_power_sum(table, x, w);
  std::vector<double> a(t_grid.size()), b(t_grid.size());
  eval_imag_sum_batch(primes, t_grid, a);
  eval_imag_sum_batch(powers, t_grid, b);
  SigmaStarDifference out;
  for (std::size_t j = 0; j < t_grid.size(); ++j) out.max_difference = std::max(out.max_difference, std::abs(a[j] - b[j]));
  out.loglog_half = x > std::numbers::e ? std::log(std::log(x)) / 2.0 : 0.0;
  out.slack = out.max_difference - out.loglog_half;
  return out;
}

}  // namespace modprime
