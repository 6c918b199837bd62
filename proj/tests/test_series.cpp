#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "modprime/errors.hpp"
#include "modprime/series.hpp"

using namespace modprime;

namespace {

mpq_class q(long n, long d) {
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

RationalSeries rs(std::vector<mpq_class> c) { return RationalSeries(static_cast<int>(c.size()) - 1, c); }

RationalSeries random_rational(std::mt19937& rng, int K, bool zero_constant) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  RationalSeries s(K);
  for (int i = 0; i <= K; ++i) s[i] = q(num(rng), den(rng));
  s[0] = zero_constant ? 0 : 1;
  return s;
}

}  // namespace

TEST_CASE("products") {
  CHECK(series_mul(rs({1, 1, 0}), rs({1, -1, 0})) == rs({1, 0, -1}));
  const auto a = rs({1, mpq_class(1, 2), mpq_class(1, 16)});
  const auto b = rs({1, mpq_class(1, 3), mpq_class(1, 36)});
  CHECK(series_mul(a, b)[2] == mpq_class(37, 144));
  CHECK(series_mul(a, rs({1, 0, 0})) == a);
  CHECK_THROWS_AS(series_mul(a, rs({1, 0})), ContractError);
}

TEST_CASE("log and exp") {
  const auto lg = series_log(rs({1, 1, 0, 0}));
  CHECK(lg == rs({0, 1, mpq_class(-1, 2), mpq_class(1, 3)}));
  const auto ex = series_exp(rs({0, 0, mpq_class(1, 2), 0, 0}));
  CHECK(ex == rs({1, 0, mpq_class(1, 2), 0, mpq_class(1, 8)}));
  CHECK_THROWS_AS(series_log(rs({2, 1})), ContractError);
  CHECK_THROWS_AS(series_exp(rs({1, 1})), ContractError);
}

TEST_CASE("log(exp(a)) = a exactly for random rational a") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_rational(rng, 8, true);
    CHECK(series_log(series_exp(a)) == a);
  }
}

TEST_CASE("real mode exp(log(S)) round trip") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    RealSeries s(10);
    s[0] = 1.0;
    for (int i = 1; i <= 10; ++i) s[i] = u(rng);
    const auto back = series_exp(series_log(s));
    for (int i = 0; i <= 10; ++i) CHECK(std::abs(back[i] - s[i]) <= 1e-12 * std::max(1.0, std::abs(s[i])));
  }
}

TEST_CASE("associativity and commutativity") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_rational(rng, 8, false), b = random_rational(rng, 8, false),
               c = random_rational(rng, 8, false);
    CHECK(series_mul(a, b) == series_mul(b, a));
    CHECK(series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c)));
    CHECK(series_add(a, b) == series_add(b, a));
  }
}

TEST_CASE("moments and cumulants") {
  const std::vector<mpq_class> gauss{0, 1, 0, 3};
  CHECK(moments_to_cumulants<mpq_class>(gauss, 4) == std::vector<mpq_class>{0, 1, 0, 0});
  const std::vector<mpq_class> model{0, mpq_class(5, 12), 0, mpq_class(37, 96)};
  const auto k = moments_to_cumulants<mpq_class>(model, 4);
  CHECK(k[3] == mpq_class(-13, 96));
  CHECK(cumulants_to_moments<mpq_class>(std::vector<mpq_class>{0, 1}, 4) == gauss);
  CHECK(cumulants_to_moments<mpq_class>(k, 4) == model);
  CHECK(cumulants_to_moments<mpq_class>(std::vector<mpq_class>{0, 0, 0, 0}, 4) ==
        std::vector<mpq_class>{0, 0, 0, 0});
  const std::vector<double> real{0.1, 0.7, -0.2, 1.9, 0.3, 4.0};
  const auto rk = moments_to_cumulants<double>(real, 6);
  const auto back = cumulants_to_moments<double>(rk, 6);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(back[i] - real[i]) < 1e-12);
}

TEST_CASE("cumulants add under independent sums") {
  // Moment generating series multiply for independent variables.
  std::mt19937 rng(5);
  auto mgf_from_moments = [](const std::vector<mpq_class>& m) {
    RationalSeries s(6);
    s[0] = 1;
    mpz_class f = 1;
    for (int j = 1; j <= 6; ++j) {
      f *= j;
      s[j] = m[j - 1] / mpq_class(f);
    }
    return s;
  };
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<mpq_class> a(6), b(6);
    std::uniform_int_distribution<int> num(-5, 5);
    for (int i = 0; i < 6; ++i) {
      a[i] = q(num(rng), 3);
      b[i] = q(num(rng), 4);
    }
    const auto prod = series_mul(mgf_from_moments(a), mgf_from_moments(b));
    std::vector<mpq_class> m(6);
    mpz_class f = 1;
    for (int j = 1; j <= 6; ++j) {
      f *= j;
      m[j - 1] = prod[j] * mpq_class(f);
    }
    const auto ka = moments_to_cumulants<mpq_class>(a, 6), kb = moments_to_cumulants<mpq_class>(b, 6),
               ks = moments_to_cumulants<mpq_class>(m, 6);
    for (int j = 0; j < 6; ++j) CHECK(ks[j] == ka[j] + kb[j]);
  }
}

TEST_CASE("rational rendering") {
  CHECK(rational_string(mpq_class(10, 24)) == "5/12");
  CHECK(rational_string(mpq_class(4, 2)) == "2");
}
