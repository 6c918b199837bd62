#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "modprime/errors.hpp"
#include "modprime/primes.hpp"
#include "modprime/specfun.hpp"
#include "oracles.hpp"

using namespace modprime;

namespace {

const PrimeTable& table_1e6() {
  static const PrimeTable t = PrimeTable::sieve(1'000'000);
  return t;
}

std::vector<std::uint32_t> to_vector(std::span<const std::uint32_t> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("small tables by hand") {
  const auto t10 = PrimeTable::sieve(10);
  CHECK(to_vector(t10.primes()) == std::vector<std::uint32_t>{2, 3, 5, 7});
  std::vector<std::uint64_t> powers;
  for (const auto& pp : t10.prime_powers()) powers.push_back(pp.n);
  CHECK(powers == std::vector<std::uint64_t>{2, 3, 4, 5, 7, 8, 9});
  CHECK(to_vector(PrimeTable::sieve(2).primes()) == std::vector<std::uint32_t>{2});
  CHECK_THROWS_AS(PrimeTable::sieve(1), DomainError);
}

TEST_CASE("sieve matches an unsegmented sieve and trial division") {
  const auto& t = table_1e6();
  CHECK(t.primes().size() == 78498);
  CHECK(to_vector(t.primes()) == oracle::plain_sieve(1'000'000));
  // Every listed prime passes trial division; spot-check the whole range near segment edges.
  for (std::uint32_t p : t.primes()) {
    if (p < 2000 || p > 998000 || (p > 262000 && p < 263000)) REQUIRE(oracle::is_prime_trial(p));
  }
  for (std::uint64_t n = 0; n <= 5000; ++n) CHECK(t.is_prime(n) == oracle::is_prime_trial(n));
  CHECK_THROWS_AS(t.is_prime(1'000'001), DomainError);
}

TEST_CASE("odd limits and limits across segment boundaries") {
  for (std::uint64_t limit : {3ull, 4ull, 63ull, 64ull, 65ull, 127ull, 128ull, 524287ull, 524288ull, 524289ull}) {
    const auto t = PrimeTable::sieve(limit);
    CHECK(to_vector(t.primes()) == oracle::plain_sieve(static_cast<std::uint32_t>(limit)));
  }
}

TEST_CASE("primes and prime powers strictly increasing") {
  const auto& t = table_1e6();
  const auto p = t.primes();
  for (std::size_t i = 1; i < p.size(); ++i) REQUIRE(p[i - 1] < p[i]);
  const auto pw = t.prime_powers();
  for (std::size_t i = 1; i < pw.size(); ++i) REQUIRE(pw[i - 1].n < pw[i].n);
  for (const auto& q : pw) {
    std::uint64_t v = 1;
    for (int k = 0; k < q.k; ++k) v *= q.p;
    REQUIRE(v == q.n);
    REQUIRE(q.log_n == doctest::Approx(std::log(double(q.n))).epsilon(1e-14));
  }
  CHECK(t.powers_upto(10) == 7);
}

TEST_CASE("pi(x) monotone and below 2x/log x") {
  const auto& t = table_1e6();
  std::size_t prev = 0;
  for (double x = 10; x <= 1e6; x *= 10) {
    const std::size_t n = t.count_upto(x);
    CHECK(n >= prev);
    CHECK(static_cast<double>(n) <= 2.0 * x / std::log(x));
    prev = n;
  }
  CHECK(t.count_upto(1.5) == 0);
}

TEST_CASE("cache round trip and rejection of bad files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "modprime_cache_test";
  fs::create_directories(dir);
  const auto t = PrimeTable::sieve(100'001);
  t.save(dir / "a.bin");
  const auto u = PrimeTable::load(dir / "a.bin");
  CHECK(u.limit() == t.limit());
  CHECK(to_vector(u.primes()) == to_vector(t.primes()));

  {
    std::ofstream out(dir / "bad.bin", std::ios::binary);
    out << "NOPE0000000000000000";
  }
  CHECK_THROWS_AS(PrimeTable::load(dir / "bad.bin"), ContractError);
  const auto size = fs::file_size(dir / "a.bin");
  fs::copy_file(dir / "a.bin", dir / "short.bin", fs::copy_options::overwrite_existing);
  fs::resize_file(dir / "short.bin", size - 8);
  CHECK_THROWS_AS(PrimeTable::load(dir / "short.bin"), ContractError);
  CHECK_THROWS_AS(PrimeTable::load(dir / "missing.bin"), ResourceError);
  fs::remove_all(dir);
}

TEST_CASE("prime reciprocal sum") {
  const auto& t = table_1e6();
  CHECK(prime_reciprocal_sum(t, 10) == doctest::Approx(247.0 / 210.0).epsilon(1e-15));
  CHECK(prime_reciprocal_sum(t, 2) == 0.5);
  const double x = 1e6;
  CHECK(std::abs(prime_reciprocal_sum(t, x) - std::log(std::log(x)) - 0.2615) < 0.05);
  for (double y : {1e4, 3e4, 1e5, 3e5, 1e6}) {
    const double d = prime_reciprocal_sum(t, y) - std::log(std::log(y));
    CHECK(d >= 0.25);
    CHECK(d <= 0.27);
  }
  CHECK_THROWS_AS(prime_reciprocal_sum(t, 1.0), DomainError);
  CHECK_THROWS_AS(prime_reciprocal_sum(t, 2e6), DomainError);
}

TEST_CASE("Mertens product") {
  const auto& t = table_1e6();
  CHECK(mertens_product(t, 10) == doctest::Approx(8.0 / 35.0).epsilon(1e-14));
  CHECK(mertens_product(t, 2) == doctest::Approx(0.5).epsilon(1e-15));
  const double r = mertens_product(t, 1e6) * std::log(1e6) * std::exp(euler_gamma());
  CHECK(r > 0.99);
  CHECK(r < 1.01);
  double prev_gap = 1.0;
  for (double x = 1e2; x <= 1e6; x *= 10) {
    const double gap = std::abs(mertens_product(t, x) * std::log(x) * std::exp(euler_gamma()) - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.02);
}

TEST_CASE("sum of log p / p") {
  const auto& t = table_1e6();
  const double direct = std::log(2.0) / 2 + std::log(3.0) / 3 + std::log(5.0) / 5 + std::log(7.0) / 7;
  CHECK(weighted_logp_sum(t, 10) == doctest::Approx(direct).epsilon(1e-15));
  CHECK(weighted_logp_sum(t, 2) == doctest::Approx(std::log(2.0) / 2).epsilon(1e-15));
  CHECK(std::abs(weighted_logp_sum(t, 1e5) - std::log(1e5)) < 3.0);
  CHECK(prime_power_reciprocal_sum(t, 10, 2) == doctest::Approx(1.0 / 4 + 1.0 / 9 + 1.0 / 25 + 1.0 / 49));
}

TEST_CASE("compensated sums against long double") {
  const auto& t = table_1e6();
  long double ref = 0.0L;
  for (std::uint32_t p : t.primes()) ref += 1.0L / p;
  CHECK(std::abs(prime_reciprocal_sum(t, 1e6) - static_cast<double>(ref)) < 1e-14);
}
