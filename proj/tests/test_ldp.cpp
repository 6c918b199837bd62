#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "modprime/errors.hpp"
#include "modprime/ldp.hpp"

using namespace modprime;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

const PrimeTable& table() {
  static const PrimeTable t = PrimeTable::sieve(100000);
  return t;
}

}  // namespace

TEST_CASE("Legendre transform of a quadratic") {
  const auto lambda = linspace(-4.0, 4.0, 801);
  std::vector<double> Lambda;
  for (double l : lambda) Lambda.push_back(l * l / 2.0);
  const auto h = linspace(-3.0, 3.0, 61);
  const auto rf = legendre_transform(lambda, Lambda, h);
  CHECK(rf.convex);
  REQUIRE(rf.I.size() == h.size());
  for (std::size_t j = 0; j < h.size(); ++j) CHECK(std::abs(rf.I[j] - h[j] * h[j] / 2.0) < 1e-8);
}

TEST_CASE("Legendre transform of |lambda|") {
  const auto lambda = linspace(-4.0, 4.0, 401);
  std::vector<double> Lambda;
  for (double l : lambda) Lambda.push_back(std::abs(l));
  const std::vector<double> h{-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
  const auto rf = legendre_transform(lambda, Lambda, h);
  CHECK(rf.convex);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (std::abs(h[j]) <= 1.0) {
      CHECK(std::abs(rf.I[j]) < 1e-12);
    } else {
      CHECK(std::isinf(rf.I[j]));
    }
  }
}

TEST_CASE("double transform recovers a convex function") {
  const auto lambda = linspace(-2.0, 2.0, 401);
  std::vector<double> Lambda;
  for (double l : lambda) Lambda.push_back(std::cosh(l) - 1.0);
  // Slopes of Lambda span [-sinh 2, sinh 2]; the dual grid covers that range.
  const auto h = linspace(-std::sinh(2.0), std::sinh(2.0), 2001);
  const auto rf = legendre_transform(lambda, Lambda, h);
  const auto probe = linspace(-1.5, 1.5, 31);
  std::vector<double> hf, If;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (std::isfinite(rf.I[j])) {
      hf.push_back(h[j]);
      If.push_back(rf.I[j]);
    }
  }
  REQUIRE(hf.size() > h.size() / 2);
  const auto back = legendre_transform(hf, If, probe);
  for (std::size_t j = 0; j < probe.size(); ++j) CHECK(std::abs(back.I[j] - (std::cosh(probe[j]) - 1.0)) < 1e-6);
}

TEST_CASE("non-convex input is flagged") {
  const auto lambda = linspace(-2.0, 2.0, 41);
  std::vector<double> Lambda;
  for (double l : lambda) Lambda.push_back(std::cos(2.0 * l));
  const std::vector<double> h{0.0};
  const auto rf = legendre_transform(lambda, Lambda, h);
  CHECK_FALSE(rf.convex);
  CHECK(rf.min_second_difference < -kConvexityTolerance);
}

TEST_CASE("model scaled cgf") {
  const auto& t = table();
  CHECK(model_scaled_cgf(t, 1e4, 0.0) == 0.0);
  for (double l : {0.3, 1.0, 2.0}) {
    const double a = model_scaled_cgf(t, 1e4, l);
    CHECK(a > 0.0);
    CHECK(a == doctest::Approx(model_scaled_cgf(t, 1e4, -l)).epsilon(1e-14));
  }
  // Small lambda: eps * (lambda^2/4) sum 1/p.
  const double eps = ldp_speed(1e4);
  double s = 0.0;
  for (std::uint32_t p : t.primes().subspan(0, t.count_upto(1e4))) s += 1.0 / p;
  const double l = 1e-3;
  CHECK(model_scaled_cgf(t, 1e4, l) == doctest::Approx(eps * l * l / 4.0 * s).epsilon(1e-6));
  CHECK_THROWS_AS(ldp_speed(2.0), DomainError);
}

TEST_CASE("exact-cgf experiment rows") {
  const std::vector<double> xs{1e3, 1e4, 1e5}, hs{1.0};
  const auto tab = ldp_experiment(table(), xs, hs);
  bool saw_gap = false;
  for (const auto& r : tab.rows) {
    if (r.param.find("stat=cgf_gap") != std::string::npos) {
      saw_gap = true;
      CHECK(std::get<double>(r.measured) > 0.0);
    }
  }
  CHECK(saw_gap);
  // Convexity of the exact cgf is a property of log I_0 and must hold.
  bool convex_checked = false;
  for (const auto& c : tab.checks) {
    if (c.name.find("convex") != std::string::npos) {
      convex_checked = true;
      CHECK(c.passed);
    }
  }
  CHECK(convex_checked);
}

TEST_CASE("exponential equivalence of prime and prime-power sums") {
  const std::vector<double> xs{100.0};
  // The prime-square part is bounded by sum 1/(k p^{k/2}) < 1 at x = 100.
  const auto far = exponential_equivalence_experiment(table(), xs, 1e3, 2.0);
  CHECK(std::get<double>(far.rows[0].measured) == -std::numeric_limits<double>::infinity());
  const auto near = exponential_equivalence_experiment(table(), xs, 1e3, 0.05);
  CHECK(std::get<double>(near.rows[0].measured) <= 0.0);
}
