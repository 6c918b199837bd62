// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "modprime/experiments.hpp"
#include "modprime/ldp.hpp"
#include "modprime/model.hpp"
#include "modprime/phi.hpp"
#include "modprime/primes.hpp"
#include "modprime/specfun.hpp"
#include "modprime/timeavg.hpp"
#include "oracles.hpp"
#include "run_config.hpp"

using namespace modprime;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

const PrimeTable& big_table() {
  static const PrimeTable t = PrimeTable::sieve(10'000'000);
  return t;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double num(const Cell& c) { return std::get<double>(c); }

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return v.size() >= 2;
}

std::string failed_checks(const ConvergenceTable& t) {
  std::string s;
  for (const auto& c : t.checks) {
    if (!c.passed) s += (s.empty() ? "" : "; ") + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
  }
  return s;
}

// 1. Exact moments against composition enumeration.
Outcome exact_moments() {
  const std::vector<std::uint32_t> pool{2, 3, 5, 7, 11, 13};
  int compared = 0;
  for (unsigned mask = 1; mask < (1u << pool.size()); ++mask) {
    std::vector<std::uint32_t> subset;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask >> i & 1u) subset.push_back(pool[i]);
    }
    if (subset.size() > 4) continue;
    const auto sys = WeightedPrimeSystem::from_primes(subset);
    for (int k = 0; k <= 5; ++k) {
      const auto m = model_moment_exact(sys, k, MomentMode::rational);
      const mpq_class ref = oracle::moment_by_compositions(subset, k);
      if (!m.exact || *m.exact != ref) {
        return {false, "mismatch at k=" + std::to_string(k) + " with " + std::to_string(subset.size()) + " primes"};
      }
      ++compared;
    }
  }
  return {true, std::to_string(compared) + " exact rational comparisons"};
}

// 2. gamma_f and the Euler constant control.
Outcome gamma_f_constant() {
  const std::vector<double> grid{1e4, 1e5, 1e6, 1e7};
  const auto f = gamma_f(grid, big_table(), Weight::f);
  const auto one = gamma_f(grid, big_table(), Weight::one);
  const double g = static_cast<double>(oracle::euler_gamma_em());
  const bool ok = std::abs(f.extrapolated + 0.108) <= 0.005 && std::abs(one.extrapolated - g) <= 0.01;
  return {ok, "gamma_f " + fmt(f.extrapolated) + " (target -0.108 +- 0.005), control " + fmt(one.extrapolated) +
                  " (target " + fmt(g) + " +- 0.01)"};
}

// 3. c_2 by two routes.
Outcome c2_routes() {
  const auto c = log_phi_coefficients(4, 1e7, big_table());
  const double M = oracle::mertens_constant_sum(10'000'000);
  const double g = static_cast<double>(oracle::euler_gamma_em());
  const double route = std::abs(c.c[1] - (M - g) / 2.0);
  const std::vector<double> xs{1e6};
  const auto tab = cumulant_experiment(big_table(), xs, 2);
  const double kappa_gap = std::abs(num(tab.rows[1].measured) - c.c[1]);
  return {route < 1e-6 && kappa_gap < 1e-2,
          "|c_2 - (M-gamma)/2| = " + fmt(route) + " (< 1e-6), kappa_2 gap at 1e6 = " + fmt(kappa_gap) + " (< 1e-2)"};
}

// 4. Time average against the model for primes up to 30.
Outcome time_average_surrogate() {
  const PrimeTable t = PrimeTable::sieve(30);
  const auto poly = DirichletPolynomial::prime_sum(t, 30);
  const auto sys = WeightedPrimeSystem::from_table(t, 30);
  bool ok = true;
  std::string detail;
  for (double u : {0.5, 1.0, 2.0}) {
    const cd model = model_charfun(sys, u).value;
    const double d5 = std::abs(time_average_charfun(poly, 1e5, u).value - model);
    const double d6 = std::abs(time_average_charfun(poly, 1e6, u).value - model);
    ok = ok && d5 < 1e-2 && d6 < d5;
    detail += "u=" + fmt(u) + ": " + fmt(d5) + " -> " + fmt(d6) + "  ";
  }
  return {ok, detail + "(< 1e-2 at 1e5, smaller at 1e6)"};
}

// 5. Renormalizer identity.
Outcome renormalizer_identity() {
  const PrimeTable t = PrimeTable::sieve(10'000);
  const double x = 1e4;
  const auto sys = WeightedPrimeSystem::from_table(t, x);
  // exp(u^2/4 (log log x + gamma + sum log(1 - 1/p))) closes the gap between the two sides.
  double log_mertens = 0.0;
  for (std::uint32_t p : oracle::plain_sieve(10'000)) log_mertens += std::log1p(-1.0 / p);
  const double gap = std::log(std::log(x)) + static_cast<double>(oracle::euler_gamma_em()) + log_mertens;
  double worst = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double u = 2.0 * i / 80;
    const double L = std::log(std::log(x)) + euler_gamma();
    const cd lhs = std::exp(u * u * L / 4.0) * model_charfun(sys, u).value;
    const cd rhs = phi_partial(u, x, t).value * std::exp(u * u * gap / 4.0);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {worst < 1e-12, "max residual " + fmt(worst) + " over u in [0, 2] (< 1e-12)"};
}

// 6. Truncated Taylor reconstruction.
Outcome truncation_bound() {
  const PrimeTable t = PrimeTable::sieve(100);
  std::vector<double> u;
  for (int i = 0; i <= 16; ++i) u.push_back(0.125 * i);
  bool ok = true;
  std::string detail;
  for (int N : {2, 4, 8}) {
    const auto tab = truncation_experiment(t, 100.0, u, N);
    double worst_ratio = 0.0;
    for (const auto& r : tab.rows) {
      const double err = num(r.diff), budget = num(r.budget);
      if (!(err <= budget)) ok = false;
      if (budget > 0.0) worst_ratio = std::max(worst_ratio, err / budget);
    }
    detail += "N=" + std::to_string(N) + " max err/bound " + fmt(worst_ratio) + "  ";
  }
  return {ok, detail};
}

// 7. Log correlation against Monte Carlo.
Outcome log_correlation() {
  const PrimeTable t = PrimeTable::sieve(20);
  const auto sys = WeightedPrimeSystem::from_table(t, 20);
  const auto lc = model_log_correlation(sys, 1.0, 15);
  const auto batch = sample_model(sys, 2024, 1'000'000, true);
  double sr = 0, si = 0, qr = 0, qi = 0;
  const double n = static_cast<double>(batch.count);
  for (std::size_t i = 0; i < batch.count; ++i) {
    const double r = batch.log_values[i] * std::cos(batch.values[i]);
    const double im = batch.log_values[i] * std::sin(batch.values[i]);
    sr += r;
    si += im;
    qr += r * r;
    qi += im * im;
  }
  const double mr = sr / n, mi = si / n;
  const double se_r = std::sqrt((qr / n - mr * mr) / (n - 1)), se_i = std::sqrt((qi / n - mi * mi) / (n - 1));
  const double zr = std::abs(mr - lc.value.real()) / se_r, zi = std::abs(mi - lc.value.imag()) / se_i;
  return {zr < 4.0 && zi < 4.0, "exact " + fmt(lc.value.imag()) + "i, MC " + fmt(mr) + (mi < 0 ? "" : "+") + fmt(mi) +
                                    "i, |z| = " + fmt(zr) + ", " + fmt(zi) + " (< 4)"};
}

// 8. Bessel layer.
Outcome bessel_layer() {
  double identity = 0.0;
  for (double u : {0.25, 0.5, 1.0, 2.0, 3.0}) {
    for (int j = 0; j < 128; ++j) {
      const double th = 2.0 * std::numbers::pi * j / 128;
      cd sum = 0.0;
      for (int k = -30; k <= 30; ++k) sum += bessel_j(k, u).value * std::polar(1.0, k * th);
      identity = std::max(identity, std::abs(std::polar(1.0, u * std::sin(th)) - sum));
    }
  }
  bool bound_ok = true;
  for (int k = 0; k <= 12; ++k) {
    for (int i = -60; i <= 60; ++i) {
      const double u = 0.05 * i;
      const double bound = std::pow(std::abs(u) / 2.0, k) / std::tgamma(k + 1.0);
      if (std::abs(bessel_j(k, u).value) > bound * (1.0 + 1e-14)) bound_ok = false;
    }
  }
  const double j01 = std::abs(bessel_j(0, 1.0).value.real() - static_cast<double>(oracle::bessel_j_big(0, 1.0)));
  const double lit = std::abs(bessel_j(0, 1.0).value.real() - 0.765197686557966551449717526103);
  return {identity < 1e-12 && bound_ok && j01 < 1e-14 && lit < 1e-14,
          "identity residual " + fmt(identity) + " (< 1e-12), magnitude bound " + (bound_ok ? "holds" : "violated") +
              ", J_0(1) error " + fmt(std::max(j01, lit)) + " (< 1e-14)"};
}

// 9. Large deviations.
Outcome ldp_suite() {
  std::vector<double> lambda, Lambda, h;
  for (int i = 0; i <= 800; ++i) {
    lambda.push_back(-4.0 + 0.01 * i);
    Lambda.push_back(lambda.back() * lambda.back() / 2.0);
  }
  for (int i = 0; i <= 60; ++i) h.push_back(-3.0 + 0.1 * i);
  const auto rf = legendre_transform(lambda, Lambda, h);
  double legendre = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) legendre = std::max(legendre, std::abs(rf.I[j] - h[j] * h[j] / 2.0));

  const std::vector<double> xs{1e4, 1e5, 1e6}, hs{1.0};
  LdpOptions opts;
  opts.lambda_max = 2.0;
  const auto tab = ldp_experiment(big_table(), xs, hs, opts);
  std::vector<double> gaps, varadhan;
  for (const auto& r : tab.rows) {
    if (r.param.ends_with("stat=cgf_gap")) gaps.push_back(num(r.measured));
    if (r.param.ends_with("stat=varadhan")) varadhan.push_back(num(r.diff));
  }
  const bool legendre_ok = legendre < 1e-8;
  const bool gap_ok = gaps.size() == 3 && gaps.back() < 0.1 && decreasing(gaps);
  const bool var_ok = varadhan.size() == 3 && varadhan.back() < 0.15 && decreasing(varadhan);
  std::string gs, vs;
  for (double g : gaps) gs += fmt(g) + " ";
  for (double v : varadhan) vs += fmt(v) + " ";
  return {legendre_ok && gap_ok && var_ok, "Legendre error " + fmt(legendre) + " (< 1e-8); cgf gap " + gs +
                                               "(< 0.1 at 1e6, decreasing); Varadhan gap " + vs +
                                               "(< 0.15 at 1e6, decreasing)"};
}

// 10. CLT discrepancy.
Outcome clt_error() {
  const std::vector<double> xs{1e2, 1e4, 1e6};
  CltOptions opts;
  opts.samples = 100000;
  const auto tab = clt_error_experiment(big_table(), xs, opts);
  std::vector<double> kol;
  bool dominated = true;
  std::string detail;
  for (const auto& r : tab.rows) {
    if (!r.param.ends_with("stat=kolmogorov")) continue;
    kol.push_back(num(r.measured));
    if (!(num(r.measured) <= num(r.budget))) dominated = false;
    detail += fmt(num(r.measured)) + "/" + fmt(num(r.budget)) + " ";
  }
  return {kol.size() == 3 && kol.back() < 0.02 && decreasing(kol) && dominated,
          "sup discrepancy/budget " + detail + "(< 0.02 at 1e6, decreasing, dominated)"};
}

// 11. Mean-value checks.
Outcome mean_values() {
  const auto mv = cli::run_command(cli::defaults_for("mv-check"));
  const auto ab = cli::run_command(cli::defaults_for("appendix-b"));
  double ratio = 0.0;
  for (const auto& r : mv.rows) {
    if (r.param.ends_with("stat=ratio")) ratio = num(r.measured);
  }
  double dmax = 0.0;
  for (const auto& r : ab.rows) {
    if (r.param.ends_with("stat=D_est")) dmax = std::max(dmax, std::abs(num(r.measured)));
  }
  const bool ratio_ok = ratio >= 2.0 / 1.5 && ratio <= 2.0 * 1.5;
  const std::string fails = failed_checks(mv) + failed_checks(ab);
  return {ratio_ok && mv.all_passed() && ab.all_passed(),
          "remainder ratio under doubling " + fmt(ratio) + " (2 +- 50%), max |D_est| " + fmt(dmax) +
              (fails.empty() ? "" : "; failed: " + fails)};
}

// 12. Byte-identical CLI output across runs and thread counts.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("modprime_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir / "cache");
  ::setenv("MODPRIME_CACHE_DIR", (dir / "cache").c_str(), 1);
  const std::vector<std::string> invocations{
      "sieve --x 1e5",
      "phi --z 1+0.5i --x 1000 --format json",
      "gamma-f --grid 1e4,1e5,1e6",
      "moments --x 30 --k 6 --format json",
      "charfun --x 30 --T-grid 1e4 --z-grid 0.5,1",
      "cumulants --grid 1e2,1e4 --K 4",
      "truncation --x 100",
      "clt --grid 1e2,1e3 --samples 20000 --seed 3",
      "clt --mode time --grid 1e2 --samples 5000 --T 1e4",
      "ldp --mode mc --grid 1e4 --h-grid 0.5,1 --samples 20000 --seed 5",
      "ldp --grid 1e4,1e5",
      "mv-check --M 10 --seeds 5 --T-grid 2e3,4e3 --seed 11",
      "appendix-b --T-grid 1e4,2e4 --coef random --seed 4",
      "appendix-b --mode combined --V-grid 1,2",
      "sigma-star --x 1000 --points 200 --seed 8 --T 1e4",
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  int checked = 0;
  std::string detail;
  for (std::size_t i = 0; i < invocations.size(); ++i) {
    std::vector<std::string> outputs;
    for (int threads : {1, 4}) {
      for (int rep = 0; rep < 2; ++rep) {
        const fs::path out = dir / ("out_" + std::to_string(i) + "_" + std::to_string(threads) + "_" + std::to_string(rep));
        const std::string cmd = std::string(MODPRIME_CLI_PATH) + " " + invocations[i] + " --threads " +
                                std::to_string(threads) + " -o " + out.string() + " 2>/dev/null";
        const int rc = std::system(cmd.c_str());
        if (rc != 0) {
          detail += "'" + invocations[i] + "' exited with " + std::to_string(rc) + "; ";
        }
        outputs.push_back(slurp(out));
      }
    }
    bool same = !outputs[0].empty();
    for (const auto& o : outputs) same = same && o == outputs[0];
    if (!same) detail += "'" + invocations[i] + "' differs; ";
    if (same) ++checked;
  }
  // Exit codes: usage error 2, library error 3.
  const std::string base = std::string(MODPRIME_CLI_PATH);
  const int usage = std::system((base + " moments --nope 1 >/dev/null 2>&1").c_str());
  const int lib = std::system((base + " moments --x 1e6 --mode rational >/dev/null 2>&1").c_str());
  const bool codes = WIFEXITED(usage) && WEXITSTATUS(usage) == 2 && WIFEXITED(lib) && WEXITSTATUS(lib) == 3;
  if (!codes) detail += "unexpected exit codes; ";
  fs::remove_all(dir);
  const bool ok = checked == static_cast<int>(invocations.size()) && codes;
  return {ok, std::to_string(checked) + "/" + std::to_string(invocations.size()) +
                  " invocations byte-identical over 2 runs x threads {1, 4}" + (detail.empty() ? "" : "; " + detail)};
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0: no limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact moment oracle", 10, exact_moments},
      {2, "gamma_f constant", 120, gamma_f_constant},
      {3, "c_2 two-route agreement", 60, c2_routes},
      {4, "time average approaches the model", 300, time_average_surrogate},
      {5, "renormalization identity", 1, renormalizer_identity},
      {6, "truncation bound", 10, truncation_bound},
      {7, "log correlation identity", 60, log_correlation},
      {8, "Bessel layer", 0, bessel_layer},
      {9, "large deviations", 120, ldp_suite},
      {10, "CLT discrepancy", 120, clt_error},
      {11, "mean-value checks", 300, mean_values},
      {12, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    const bool passed = o.passed && in_time;
    if (!passed) ++failures;
    std::cout << (passed ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << o.detail << " ["
              << fmt(secs) << " s" << (c.limit_seconds > 0 ? ", limit " + fmt(c.limit_seconds) + " s" : "")
              << (in_time ? "" : ", over time") << "]" << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
