#pragma once

// Test-only reference computations. None of these share code with the library.

#include <gmpxx.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

using big = boost::multiprecision::cpp_dec_float_50;

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Unsegmented sieve of Eratosthenes over all integers.
inline std::vector<std::uint32_t> plain_sieve(std::uint32_t n) {
  std::vector<char> comp(n + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = 1;
  }
  return out;
}

// Euler-Maclaurin: H_N - log N - 1/(2N) + sum_k B_{2k} / (2k N^{2k}).
inline big euler_gamma_em() {
  const int N = 1000;
  big h = 0;
  for (int n = 1; n <= N; ++n) h += big(1) / n;
  const big n = N;
  const big n2 = n * n;
  big g = h - log(n) - 1 / (2 * n);
  g += 1 / (12 * n2) - 1 / (120 * n2 * n2) + 1 / (252 * n2 * n2 * n2) - 1 / (240 * n2 * n2 * n2 * n2) +
       1 / (132 * n2 * n2 * n2 * n2 * n2);
  return g;
}

// gamma + sum_{p <= X} (log(1 - 1/p) + 1/p) - 1/(2 X log X).
inline double mertens_constant_sum(std::uint32_t X) {
  long double acc = 0.0L;
  for (std::uint32_t p : plain_sieve(X)) {
    const long double y = 1.0L / p;
    acc += std::log1p(-y) + y;
  }
  const double gamma = static_cast<double>(euler_gamma_em());
  return gamma + static_cast<double>(acc) - 1.0 / (2.0 * X * std::log(double(X)));
}

inline big bessel_j_big(int k, double x) { return boost::math::cyl_bessel_j(k, big(x)); }

// E[S^k] for S = sum_i sin(theta_i)/sqrt(p_i), by expanding the multinomial over
// compositions a_1 + ... + a_n = k and using E[sin^a] = C(a, a/2) / 2^a for even a.
inline mpq_class moment_by_compositions(const std::vector<std::uint32_t>& primes, int k) {
  auto binom = [](int n, int r) {
    mpz_class b = 1;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
  };
  auto factorial = [](int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  mpq_class total = 0;
  std::vector<int> a(primes.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == primes.size()) {
      a[i] = left;
      mpq_class term(factorial(k), 1);
      for (std::size_t j = 0; j < primes.size(); ++j) {
        if (a[j] % 2 != 0) return;
        mpz_class pw = 1;
        for (int e = 0; e < a[j] / 2; ++e) pw *= primes[j];
        mpz_class two = 1;
        for (int e = 0; e < a[j]; ++e) two *= 2;
        term *= mpq_class(binom(a[j], a[j] / 2), two * pw * factorial(a[j]));
      }
      term.canonicalize();
      total += term;
      return;
    }
    for (int v = 0; v <= left; ++v) {
      a[i] = v;
      self(self, i + 1, left - v);
    }
  };
  if (primes.empty()) return k == 0 ? 1 : 0;
  rec(rec, 0, k);
  total.canonicalize();
  return total;
}

}  // namespace oracle
