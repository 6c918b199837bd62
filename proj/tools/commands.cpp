#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <unistd.h>
#include <string>

#include "modprime/appendix_b.hpp"
#include "modprime/errors.hpp"
#include "modprime/experiments.hpp"
#include "modprime/format.hpp"
#include "modprime/kernels.hpp"
#include "modprime/ldp.hpp"
#include "modprime/model.hpp"
#include "modprime/phi.hpp"
#include "modprime/specfun.hpp"
#include "modprime/timeavg.hpp"

namespace modprime::cli {

namespace {

using cd = std::complex<double>;

constexpr double kReferenceLimit = 1e7;
// Weighted Euler constant for the weight f, to the digits quoted in the literature.
constexpr double kGammaF = -0.108;

double max_of(const std::vector<double>& v) {
  if (v.empty()) throw ContractError("grid must not be empty");
  return *std::max_element(v.begin(), v.end());
}

std::uint64_t as_limit(double x) {
  if (!(x >= 2.0)) throw DomainError("cutoff must be >= 2, got " + format_real(x));
  if (x > static_cast<double>(PrimeTable::kMaxLimit)) throw ResourceError("cutoff above the sieve maximum");
  return static_cast<std::uint64_t>(std::floor(x));
}

QuadratureConfig quadrature(const RunConfig& cfg) {
  QuadratureConfig q;
  q.nodes_per_period = cfg.nodes_per_period;
  q.rule = cfg.rule == "gauss" ? QuadratureRule::gauss_legendre : QuadratureRule::midpoint;
  q.gauss_points = cfg.gauss_points;
  q.max_nodes = static_cast<std::size_t>(cfg.max_nodes);
  return q;
}

void append(ConvergenceTable& into, ConvergenceTable from) {
  for (auto& r : from.rows) into.rows.push_back(std::move(r));
  for (auto& c : from.checks) into.checks.push_back(std::move(c));
}

std::string tag(const std::string& key, double v) { return key + "=" + format_real(v); }

ConvergenceTable run_sieve(const RunConfig& cfg, const PrimeTable& table) {
  const double x = cfg.x;
  if (x < 3.0) throw DomainError("sieve needs x >= 3");
  const double lx = std::log(x);
  const double gamma = euler_gamma();
  ConvergenceTable tab;
  tab.add_row({tag("x", x) + ";stat=pi", static_cast<double>(table.count_upto(x)), {}, {}, {}});
  tab.add(tag("x", x) + ";stat=sum_inv_p", prime_reciprocal_sum(table, x), std::log(lx) + mertens_constant(),
          1.0 / (lx * lx));
  const double mertens_ref = std::exp(-gamma) / lx;
  tab.add(tag("x", x) + ";stat=mertens_product", mertens_product(table, x), mertens_ref, mertens_ref / (lx * lx));
  // sum log p / p = log x + E + O(1/log x), E = -gamma - sum_p log p / (p (p - 1)).
  tab.add(tag("x", x) + ";stat=sum_logp_over_p", weighted_logp_sum(table, x), lx - 1.3325822757332, 1.0 / lx);
  return tab;
}

ConvergenceTable run_phi(const RunConfig& cfg, const PrimeTable& table) {
  const Weight w = parse_weight(cfg.weight);
  const PhiEvaluation ev = phi_weighted_partial(cfg.z, cfg.x, table, w);
  ConvergenceTable tab;
  const std::string base = "z=" + format_complex(cfg.z) + ";" + tag("x", cfg.x);
  if (w == Weight::one) {
    const PhiEvaluation ref = phi_reference(cfg.z, table);
    const double budget = ev.tail_estimate * std::abs(ev.value) + ref.tail_estimate * std::abs(ref.value);
    tab.add(base + ";part=re", ev.value.real(), ref.value.real(), budget);
    tab.add(base + ";part=im", ev.value.imag(), ref.value.imag(), budget);
  } else {
    const double budget = ev.tail_estimate * std::abs(ev.value);
    tab.add_row({base + ";part=re", ev.value.real(), {}, {}, budget});
    tab.add_row({base + ";part=im", ev.value.imag(), {}, {}, budget});
  }
  return tab;
}

ConvergenceTable run_gamma_f(const RunConfig& cfg, const PrimeTable& table) {
  const Weight w = parse_weight(cfg.weight);
  const GammaFResult res = gamma_f(cfg.grid, table, w);
  std::optional<double> target;
  double tolerance = 0.0;
  if (w == Weight::f) {
    target = kGammaF;
    tolerance = 0.005;
  } else if (w == Weight::one) {
    target = euler_gamma();
    tolerance = 0.01;
  }
  ConvergenceTable tab;
  for (std::size_t i = 0; i < res.x.size(); ++i) {
    const double lx = std::log(res.x[i]);
    const double basis = res.basis == ExtrapolationBasis::inv_log ? 1.0 / lx : 1.0 / (lx * lx);
    const double drift = std::abs(res.slope * basis);
    if (target) {
      tab.add(tag("x", res.x[i]), res.estimates[i], *target, drift + tolerance);
    } else {
      tab.add_row({tag("x", res.x[i]), res.estimates[i], {}, {}, drift});
    }
  }
  if (target) {
    tab.add("extrapolated", res.extrapolated, *target, tolerance);
    tab.check("extrapolated within " + format_real(tolerance) + " of " + format_real(*target),
              std::abs(res.extrapolated - *target) <= tolerance, format_real(res.extrapolated));
  } else {
    tab.add_row({"extrapolated", res.extrapolated, {}, {}, {}});
  }
  return tab;
}

ConvergenceTable run_moments(const RunConfig& cfg, const PrimeTable& table) {
  const Weight w = parse_weight(cfg.weight);
  const auto sys = WeightedPrimeSystem::from_table(table, cfg.x, w);
  MomentMode mode = MomentMode::automatic;
  if (cfg.mode == "rational") mode = MomentMode::rational;
  if (cfg.mode == "real") mode = MomentMode::real;
  const ModelMoment m = model_moment_exact(sys, cfg.k, mode);
  const double bound = model_moment_bound(sys, cfg.k);
  ConvergenceTable tab;
  const std::string param = tag("x", cfg.x) + ";k=" + std::to_string(cfg.k);
  if (m.exact) {
    // Cross-check the rational value with the floating-point recursion.
    const ModelMoment real = model_moment_exact(sys, cfg.k, MomentMode::real);
    tab.add_row({param, m.to_string(), real.value, std::abs(m.value - real.value), bound});
  } else {
    tab.add_row({param, m.value, {}, {}, bound});
  }
  tab.extras.emplace_back("moment", m.exact ? Cell{m.to_string()} : Cell{m.value});
  tab.check("moment within the moment bound", m.value <= bound * (1.0 + 1e-12), format_real(m.value));
  return tab;
}

ConvergenceTable run_charfun(const RunConfig& cfg, const PrimeTable& table) {
  const QuadratureConfig q = quadrature(cfg);
  const TRule rule{cfg.alpha};
  if (cfg.mode == "theorem1") {
    std::vector<double> u;
    for (cd z : cfg.z_grid) {
      if (z.imag() != 0.0) throw ContractError("theorem1 mode takes real arguments");
      u.push_back(z.real());
    }
    return theorem1_experiment(table, cfg.T_grid, u, rule, q);
  }
  if (cfg.mode == "theorem2") {
    const double g = gamma_f({1e4, 1e5, 1e6, 1e7}, table, Weight::f).extrapolated;
    return theorem2_experiment(table, cfg.T_grid, cfg.z_grid, g, rule, q);
  }
  const Weight w = parse_weight(cfg.weight);
  const auto poly = DirichletPolynomial::prime_sum(table, cfg.x, w);
  const auto sys = WeightedPrimeSystem::from_table(table, cfg.x, w);
  ConvergenceTable tab;
  for (cd z : cfg.z_grid) {
    const cd model = model_charfun(sys, z).value;
    std::vector<double> diffs;
    for (double T : cfg.T_grid) {
      const QuadratureResult ta = time_average_charfun(poly, T, z, q);
      const std::string base = tag("T", T) + ";z=" + format_complex(z);
      tab.add(base + ";part=re", ta.value.real(), model.real(), ta.error);
      tab.add(base + ";part=im", ta.value.imag(), model.imag(), ta.error);
      diffs.push_back(std::abs(ta.value - model));
    }
    if (diffs.size() >= 2) {
      bool down = true;
      for (std::size_t i = 1; i < diffs.size(); ++i) down = down && diffs[i] < diffs[i - 1];
      tab.check("difference to the model decreases in T at z=" + format_complex(z), down);
    }
  }
  return tab;
}

ConvergenceTable run_truncation(const RunConfig& cfg, const PrimeTable& table) {
  ConvergenceTable tab;
  for (int N : cfg.N_grid) append(tab, truncation_experiment(table, cfg.x, cfg.u_grid, N));
  return tab;
}

ConvergenceTable run_clt(const RunConfig& cfg, const PrimeTable& table) {
  CltOptions opts;
  opts.source = cfg.mode == "time"     ? CltSource::time_average
                : cfg.mode == "normal" ? CltSource::normal_control
                                       : CltSource::monte_carlo;
  opts.samples = static_cast<std::size_t>(cfg.samples);
  opts.seed = cfg.seed;
  opts.T = cfg.T;
  return clt_error_experiment(table, cfg.grid, opts);
}

ConvergenceTable run_ldp(const RunConfig& cfg, const PrimeTable& table) {
  LdpOptions opts;
  opts.mode = cfg.mode == "mc" ? LdpMode::monte_carlo : cfg.mode == "time" ? LdpMode::time_average : LdpMode::exact_cgf;
  opts.lambda_max = cfg.lambda_max;
  opts.samples = static_cast<std::size_t>(cfg.samples);
  opts.seed = cfg.seed;
  opts.T = cfg.T;
  opts.cfg = quadrature(cfg);
  return ldp_experiment(table, cfg.grid, cfg.h_grid, opts);
}

// RMS of the mean value remainder over seeded draws; the remainder is O(1/T),
// so doubling T should roughly halve it.
ConvergenceTable run_mv_check(const RunConfig& cfg) {
  if (cfg.seeds < 1 || cfg.M < 1) throw ContractError("mv-check needs M >= 1 and seeds >= 1");
  const QuadratureConfig q = quadrature(cfg);
  ConvergenceTable tab;
  std::vector<double> rms;
  for (double T : cfg.T_grid) {
    double sq = 0.0, bound_sq = 0.0;
    for (std::uint64_t s = 0; s < cfg.seeds; ++s) {
      const auto a = random_coefficients(cfg.seed + 2 * s, static_cast<std::size_t>(cfg.M));
      const auto b = random_coefficients(cfg.seed + 2 * s + 1, static_cast<std::size_t>(cfg.M));
      const MvCheck r = mv_check(a, b, T, q);
      sq += std::norm(r.remainder);
      bound_sq += r.bound_form * r.bound_form;
    }
    const double n = static_cast<double>(cfg.seeds);
    rms.push_back(std::sqrt(sq / n));
    tab.add_row({tag("T", T) + ";stat=rms_remainder", rms.back(), {}, {}, std::sqrt(bound_sq / n)});
  }
  bool halves = rms.size() >= 2;
  for (std::size_t i = 1; i < rms.size(); ++i) {
    const double growth = cfg.T_grid[i] / cfg.T_grid[i - 1];
    const double ratio = rms[i - 1] / rms[i];
    tab.add(tag("T", cfg.T_grid[i - 1]) + "/" + format_real(cfg.T_grid[i]) + ";stat=ratio", ratio, growth,
            0.5 * growth);
    halves = halves && ratio >= growth / 1.5 && ratio <= growth * 1.5;
  }
  tab.check("remainder scales like 1/T within 50%", halves);
  return tab;
}

ConvergenceTable run_appendix_b(const RunConfig& cfg, const PrimeTable& table) {
  const QuadratureConfig q = quadrature(cfg);
  ConvergenceTable tab;
  if (cfg.mode == "combined") {
    const auto res = appendix_b_combined(table, cfg.T, cfg.V_grid, parse_weight(cfg.weight), q);
    for (const auto& r : res.rows) {
      tab.add_row({"V=" + std::to_string(r.V) + ";" + tag("X", r.X) + ";stat=A", r.fitted_a, {}, {}, {}});
    }
    tab.check("fitted A stable across V (max/min <= 2)", res.stable,
              format_real(res.a_min) + " .. " + format_real(res.a_max));
    return tab;
  }
  const CoefficientMode mode = parse_coefficient_mode(cfg.coef);
  std::vector<std::vector<MeanValueRow>> per_family;
  for (double T : cfg.T_grid) {
    const auto res = appendix_b_suite(table, cfg.x, cfg.y, cfg.k, T, mode, cfg.seed, q);
    per_family.resize(res.rows.size());
    for (std::size_t f = 0; f < res.rows.size(); ++f) {
      const auto& r = res.rows[f];
      per_family[f].push_back(r);
      tab.add_row({tag("T", T) + ";family=" + r.family, r.empirical, r.main_bound, r.slack,
                   r.allowance_per_d + r.quadrature_error});
      tab.add_row({tag("T", T) + ";family=" + r.family + ";stat=D_est", r.d_est, {}, {}, {}});
    }
  }
  // D is fitted on the first window; later windows must fit within twice that
  // allowance (or the D = 1 allowance when the first slack is not positive).
  for (const auto& rows : per_family) {
    if (rows.empty()) continue;
    const double d_fit = std::max(rows.front().d_est, 0.0);
    const double d_allowed = std::max(2.0 * d_fit, 1.0);
    bool within = true;
    double d_max = rows.front().d_est;
    for (const auto& r : rows) {
      within = within && r.slack <= d_allowed * r.allowance_per_d + r.quadrature_error;
      d_max = std::max(d_max, r.d_est);
    }
    tab.check("slack within the fitted allowance for " + rows.front().family, within,
              "D_fit " + format_real(d_fit) + ", D_max " + format_real(d_max));
    bool bounded = true;
    for (const auto& r : rows) bounded = bounded && std::abs(r.d_est) <= 1.0;
    tab.check("fitted D_est stays within [-1, 1] across T for " + rows.front().family, bounded);
  }
  return tab;
}

ConvergenceTable run_sigma_star(const RunConfig& cfg, const PrimeTable& table) {
  if (cfg.points < 1) throw ContractError("sigma-star needs at least one point");
  std::vector<double> t(static_cast<std::size_t>(cfg.points));
  for (std::size_t j = 0; j < t.size(); ++j) {
    const auto block = kernels::philox4x32(cfg.seed, j, 0);
    t[j] = cfg.T * (1.0 + (static_cast<double>(block.w[0]) + 0.5) / 4294967296.0);
  }
  const auto res = sigma_star_difference(table, cfg.x, parse_weight(cfg.weight), t);
  ConvergenceTable tab;
  tab.add_row({tag("x", cfg.x) + ";" + tag("T", cfg.T) + ";stat=max_difference", res.max_difference,
               res.loglog_half, std::abs(res.slack), {}});
  return tab;
}

}  // namespace

std::uint64_t required_limit(const RunConfig& cfg) {
  const auto& c = cfg.command;
  if (c == "sieve" || c == "moments" || c == "truncation" || c == "sigma-star") return as_limit(cfg.x);
  if (c == "phi") return as_limit(std::max(cfg.x, kReferenceLimit));
  if (c == "gamma-f" || c == "clt" || c == "ldp") return as_limit(max_of(cfg.grid));
  if (c == "cumulants") return as_limit(std::max(max_of(cfg.grid), kReferenceLimit));
  if (c == "charfun") return as_limit(cfg.mode == "direct" ? cfg.x : kReferenceLimit);
  if (c == "mv-check") return 2;
  if (c == "appendix-b") {
    if (cfg.mode != "combined") return as_limit(cfg.x);
    if (cfg.V_grid.empty()) throw ContractError("V grid must not be empty");
    const int v_min = *std::min_element(cfg.V_grid.begin(), cfg.V_grid.end());
    if (v_min < 1) throw ContractError("V must be >= 1");
    return as_limit(std::pow(cfg.T, 1.0 / v_min));
  }
  throw ContractError("unknown command " + c);
}

PrimeTable load_prime_table(std::uint64_t limit) {
  const char* dir = std::getenv("MODPRIME_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return PrimeTable::sieve(limit);
  namespace fs = std::filesystem;
  const fs::path path = fs::path(dir) / ("primes_" + std::to_string(limit) + ".bin");
  std::error_code ec;
  if (fs::exists(path, ec)) {
    try {
      return PrimeTable::load(path);
    } catch (const std::exception&) {
      // Unreadable cache: rebuild it below.
    }
  }
  PrimeTable table = PrimeTable::sieve(limit);
  fs::create_directories(path.parent_path(), ec);
  // Write to a private file first so concurrent runs never see a partial cache.
  const fs::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
  try {
    table.save(tmp);
    fs::rename(tmp, path, ec);
  } catch (const std::exception&) {
  }
  fs::remove(tmp, ec);
  return table;
}

ConvergenceTable run_command(const RunConfig& cfg) {
  const std::uint64_t limit = cfg.limit != 0 ? cfg.limit : required_limit(cfg);
  const PrimeTable table = load_prime_table(limit);
  const auto& c = cfg.command;
  if (c == "sieve") return run_sieve(cfg, table);
  if (c == "phi") return run_phi(cfg, table);
  if (c == "gamma-f") return run_gamma_f(cfg, table);
  if (c == "moments") return run_moments(cfg, table);
  if (c == "charfun") return run_charfun(cfg, table);
  if (c == "cumulants") return cumulant_experiment(table, cfg.grid, cfg.K);
  if (c == "truncation") return run_truncation(cfg, table);
  if (c == "clt") return run_clt(cfg, table);
  if (c == "ldp") return run_ldp(cfg, table);
  if (c == "mv-check") return run_mv_check(cfg);
  if (c == "appendix-b") return run_appendix_b(cfg, table);
  if (c == "sigma-star") return run_sigma_star(cfg, table);
  throw ContractError("unknown command " + c);
}

}  // namespace modprime::cli
