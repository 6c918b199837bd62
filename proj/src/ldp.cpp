#include "modprime/ldp.hpp"

#include <algorithm>
#include <cmath>

#include "modprime/errors.hpp"
#include "modprime/format.hpp"
#include "modprime/model.hpp"
#include "modprime/specfun.hpp"
#include "modprime/summation.hpp"

namespace modprime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_real(v[i]);
  return s;
}

bool strictly_decreasing(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

// eps * log of the mean of e^{h s}, shifted by the maximum for stability.
double scaled_log_mean_exp(const std::vector<double>& s, double h, double eps) {
  double m = -kInf;
  for (double v : s) m = std::max(m, h * v);
  std::vector<double> e(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) e[i] = std::exp(h * s[i] - m);
  return eps * (m + std::log(pairwise_sum<double>(e) / static_cast<double>(s.size())));
}

}  // namespace

RateFunctionGrid legendre_transform(std::span<const double> lambda, std::span<const double> Lambda,
                                    std::span<const double> h) {
  if (lambda.size() != Lambda.size() || lambda.size() < 3) {
    throw ContractError("legendre_transform needs matching grids with at least 3 points");
  }
  for (std::size_t i = 1; i < lambda.size(); ++i) {
    if (!(lambda[i] > lambda[i - 1])) throw ContractError("lambda grid must be strictly increasing");
  }
  for (double v : Lambda) {
    if (!std::isfinite(v)) throw ContractError("Lambda must be finite on the grid");
  }
  RateFunctionGrid out;
  out.lambda.assign(lambda.begin(), lambda.end());
  out.Lambda.assign(Lambda.begin(), Lambda.end());
  out.h.assign(h.begin(), h.end());

  out.min_second_difference = kInf;
  std::vector<double> second(lambda.size(), 0.0);
  for (std::size_t i = 1; i + 1 < lambda.size(); ++i) {
    const double s1 = (Lambda[i] - Lambda[i - 1]) / (lambda[i] - lambda[i - 1]);
    const double s2 = (Lambda[i + 1] - Lambda[i]) / (lambda[i + 1] - lambda[i]);
    second[i] = 2.0 * (s2 - s1) / (lambda[i + 1] - lambda[i - 1]);
    out.min_second_difference = std::min(out.min_second_difference, second[i]);
  }
  // A parabola only models the argmax neighbourhood when the curvature there is
  // locally steady; at a kink the vertex overshoots.
  auto smooth_at = [&](std::size_t i) {
    for (std::size_t j : {i - 1, i + 1}) {
      if (j == 0 || j + 1 == lambda.size()) continue;
      if (!(second[j] > 0.5 * second[i] && second[j] < 2.0 * second[i])) return false;
    }
    return true;
  };
  out.convex = out.min_second_difference >= -kConvexityTolerance;

  const std::size_t n = lambda.size();
  for (double hv : h) {
    std::size_t best = 0;
    double best_val = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = lambda[i] * hv - Lambda[i];
      if (g > best_val) {
        best_val = g;
        best = i;
      }
    }
    auto g_at = [&](std::size_t i) { return lambda[i] * hv - Lambda[i]; };
    const double edge_tol = 1e-12 * std::max(1.0, std::abs(best_val));
    if ((best == 0 && g_at(0) > g_at(1) + edge_tol) || (best == n - 1 && g_at(n - 1) > g_at(n - 2) + edge_tol)) {
      // Still increasing at the edge: the supremum lies beyond the grid.
      out.I.push_back(kInf);
      continue;
    }
    double value = best_val;
    if (best > 0 && best + 1 < n && smooth_at(best)) {
      // Vertex of the parabola through the three points around the argmax.
      const double x0 = lambda[best - 1], x1 = lambda[best], x2 = lambda[best + 1];
      const double y0 = g_at(best - 1), y1 = best_val, y2 = g_at(best + 1);
      const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
      const double a = (d12 - d01) / (x2 - x0);
      if (a < 0.0) {
        const double b = d01 - a * (x0 + x1);
        const double xv = std::clamp(-b / (2.0 * a), x0, x2);
        value = std::max(best_val, y1 + (xv - x1) * (d01 + a * (xv - x0)));
      }
    }
    out.I.push_back(value);
  }
  return out;
}

double ldp_speed(double x) {
  if (!(x > std::exp(1.0))) throw DomainError("the LDP speed needs x > e");
  return 2.0 / std::log(std::log(x));
}

double model_scaled_cgf(const PrimeTable& table, double x, double lambda) {
  const double eps = ldp_speed(x);
  const std::size_t n = table.count_upto(x);
  const auto isp = table.inv_sqrt_primes();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    // J_0(-i y) = I_0(y) is real and >= 1.
    terms[i] = log_bessel_j0(std::complex<double>(0.0, -lambda * isp[i])).real();
  }
  return eps * pairwise_sum<double>(terms);
}

ConvergenceTable ldp_experiment(const PrimeTable& table, std::span<const double> x_grid, std::span<const double> h_grid,
                                const LdpOptions& opts) {
  if (opts.lambda_points < 3) throw ContractError("need at least 3 lambda points");
  std::vector<double> lambda(opts.lambda_points);
  for (int i = 0; i < opts.lambda_points; ++i) {
    lambda[i] = -opts.lambda_max + 2.0 * opts.lambda_max * i / (opts.lambda_points - 1);
  }
  ConvergenceTable tab;
  std::vector<double> gaps;
  std::vector<std::vector<double>> varadhan(h_grid.size());
  bool convex = true;

  for (double x : x_grid) {
    const double eps = ldp_speed(x);
    const std::string xs = "x=" + format_real(x);
    std::vector<double> samples;
    DirichletPolynomial poly;
    if (opts.mode == LdpMode::monte_carlo) {
      samples = sample_model(WeightedPrimeSystem::from_table(table, x), opts.seed, opts.samples).values;
    } else if (opts.mode == LdpMode::time_average) {
      poly = DirichletPolynomial::prime_sum(table, x);
    }

    if (opts.mode == LdpMode::exact_cgf) {
      std::vector<double> Lambda(lambda.size());
      double gap = 0.0;
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        Lambda[i] = model_scaled_cgf(table, x, lambda[i]);
        gap = std::max(gap, std::abs(Lambda[i] - lambda[i] * lambda[i] / 2.0));
      }
      gaps.push_back(gap);
      tab.add(xs + ";stat=cgf_gap", gap, 0.0, 0.1);
      const RateFunctionGrid rf = legendre_transform(lambda, Lambda, h_grid);
      convex = convex && rf.convex;
      for (std::size_t j = 0; j < h_grid.size(); ++j) {
        tab.add(xs + ";h=" + format_real(h_grid[j]) + ";stat=rate", rf.I[j], h_grid[j] * h_grid[j] / 2.0, 0.0);
      }
    } else {
      for (double hv : h_grid) {
        double mass;
        if (opts.mode == LdpMode::monte_carlo) {
          const double thr = hv / eps;
          const auto hits = std::count_if(samples.begin(), samples.end(), [thr](double v) { return v >= thr; });
          mass = static_cast<double>(hits) / static_cast<double>(samples.size());
        } else {
          mass = empirical_tail(poly, opts.T, hv / eps, opts.cfg).fraction;
        }
        const std::string param = xs + ";h=" + format_real(hv) + ";stat=tail";
        if (mass <= 0.0) {
          tab.add_row({param, std::string("unmeasurable"), -hv * hv / 2.0, Cell{}, Cell{}});
        } else {
          tab.add(param, eps * std::log(mass), -hv * hv / 2.0, 0.0);
        }
      }
    }

    for (std::size_t j = 0; j < h_grid.size(); ++j) {
      const double hv = h_grid[j];
      double v = 0.0;
      switch (opts.mode) {
        case LdpMode::exact_cgf:
          v = model_scaled_cgf(table, x, hv);
          break;
        case LdpMode::monte_carlo:
          v = scaled_log_mean_exp(samples, hv, eps);
          break;
        case LdpMode::time_average:
          v = eps * std::log(time_average_expmoment(poly, opts.T, hv, opts.cfg).value.real());
          break;
      }
      tab.add(xs + ";h=" + format_real(hv) + ";stat=varadhan", v, hv * hv / 2.0, 0.15);
      varadhan[j].push_back(std::abs(v - hv * hv / 2.0));
    }
  }

  if (opts.mode == LdpMode::exact_cgf && !gaps.empty()) {
    tab.check("scaled cgf is convex on the lambda grid", convex);
    tab.check("sup |Lambda_x - lambda^2/2| < 0.1 at largest x", gaps.back() < 0.1, format_real(gaps.back()));
    tab.check("cgf gap decreases along x", strictly_decreasing(gaps), join(gaps));
  }
  for (std::size_t j = 0; j < h_grid.size(); ++j) {
    if (h_grid[j] != 1.0 || varadhan[j].empty()) continue;
    tab.check("Varadhan row within 0.15 of 1/2 at largest x", varadhan[j].back() < 0.15, format_real(varadhan[j].back()));
    tab.check("Varadhan row improves along x", strictly_decreasing(varadhan[j]), join(varadhan[j]));
  }
  return tab;
}

ConvergenceTable exponential_equivalence_experiment(const PrimeTable& table, std::span<const double> x_grid, double T,
                                                    double delta, const QuadratureConfig& cfg) {
  ConvergenceTable tab;
  for (double x : x_grid) {
    const double eps = ldp_speed(x);
    const auto a = DirichletPolynomial::prime_sum(table, x);
    const auto b = DirichletPolynomial::prime_power_sum(table, x);
    const TailMeasure m = empirical_difference_tail(a, b, T, delta, cfg);
    const double v = m.fraction > 0.0 ? eps * std::log(m.fraction) : -kInf;
    tab.add_row({"x=" + format_real(x) + ";delta=" + format_real(delta), v, Cell{}, Cell{}, m.error});
  }
  return tab;
}

}  // namespace modprime
