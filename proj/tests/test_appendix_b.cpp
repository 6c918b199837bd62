#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "modprime/appendix_b.hpp"
#include "modprime/errors.hpp"

using namespace modprime;

namespace {

const PrimeTable& table() {
  static const PrimeTable t = PrimeTable::sieve(100000);
  return t;
}

}  // namespace

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(appendix_b_suite(table(), 100.0, 10.0, 2, 1e3, CoefficientMode::extremal), ContractError);
  CHECK_THROWS_AS(appendix_b_suite(table(), 100.0, 100.0, 1, 1e4, CoefficientMode::extremal), ContractError);
  CHECK_THROWS_AS(appendix_b_suite(table(), 100.0, 10.0, -1, 1e4, CoefficientMode::extremal), ContractError);
  CHECK_THROWS_AS(appendix_b_suite(table(), 1e6, 10.0, 1, 1e7, CoefficientMode::extremal), DomainError);
  const std::vector<int> none;
  CHECK_THROWS_AS(appendix_b_combined(table(), 1e4, none), ContractError);
  CHECK(parse_coefficient_mode("random") == CoefficientMode::random);
  CHECK(coefficient_mode_name(CoefficientMode::extremal) == "extremal");
  CHECK_THROWS_AS(parse_coefficient_mode("bogus"), ContractError);
}

TEST_CASE("k = 0 is trivially tight") {
  const auto r = appendix_b_suite(table(), 100.0, 10.0, 0, 1e4, CoefficientMode::extremal);
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) {
    CHECK(row.empirical == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row.main_bound == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("second moments match the diagonal") {
  for (auto mode : {CoefficientMode::extremal, CoefficientMode::random}) {
    const auto r = appendix_b_suite(table(), 100.0, 10.0, 1, 1e4, mode, 3);
    for (const auto& row : r.rows) {
      CHECK(row.main_bound > 0.0);
      CHECK(row.allowance_per_d > 0.0);
      CHECK(std::abs(row.d_est) <= 10.0);
      CHECK(row.d_est == doctest::Approx(row.slack / row.allowance_per_d));
    }
  }
}

TEST_CASE("higher k stays within a bounded constant") {
  const auto r = appendix_b_suite(table(), 30.0, 5.0, 2, 1e4, CoefficientMode::extremal);
  for (const auto& row : r.rows) {
    CHECK(row.empirical > 0.0);
    CHECK(std::abs(row.d_est) <= 10.0);
  }
}

TEST_CASE("combined bound constant is stable") {
  const std::vector<int> V{1, 2, 3};
  const auto c = appendix_b_combined(table(), 1e4, V);
  REQUIRE(c.rows.size() == 3);
  CHECK(c.stable);
  CHECK(c.a_max / c.a_min <= 2.0);
  for (const auto& row : c.rows) {
    CHECK(row.X == doctest::Approx(std::pow(1e4, 1.0 / row.V)));
    CHECK(row.fitted_a > 0.0);
  }
}
