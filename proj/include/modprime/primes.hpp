#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace modprime {

struct PrimePower {
  std::uint64_t n;  // p^k
  std::uint32_t p;
  int k;
  double log_n;
  double inv_sqrt_n;
};

// Primes and prime powers up to a limit, with cached log n and 1/sqrt(n).
// Immutable after construction.
class PrimeTable {
 public:
  static constexpr std::uint64_t kMaxLimit = 4'000'000'000ULL;

  // Segmented Eratosthenes sieve over odd numbers. Throws DomainError for limit < 2.
  static PrimeTable sieve(std::uint64_t limit);

  // Binary cache: "MPRM", u32 version, u64 limit, then the odd-number bitset
  // (bit i set <=> 2i+1 is prime) as little-endian u64 words.
  void save(const std::filesystem::path& path) const;
  static PrimeTable load(const std::filesystem::path& path);

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint32_t> primes() const { return primes_; }
  std::span<const double> log_primes() const { return log_p_; }
  std::span<const double> inv_sqrt_primes() const { return inv_sqrt_p_; }
  std::span<const PrimePower> prime_powers() const { return powers_; }

  // pi(x), the number of primes <= x.
  std::size_t count_upto(double x) const;
  // Number of prime powers n <= x.
  std::size_t powers_upto(double x) const;
  bool is_prime(std::uint64_t n) const;

 private:
  PrimeTable() = default;
  static PrimeTable from_bits(std::uint64_t limit, std::vector<std::uint64_t> bits);
  void build_derived();

  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> odd_bits_;
  std::vector<std::uint32_t> primes_;
  std::vector<double> log_p_;
  std::vector<double> inv_sqrt_p_;
  std::vector<PrimePower> powers_;
};

// Sum_{p<=x} 1/p, compensated. Requires 2 <= x <= table.limit().
double prime_reciprocal_sum(const PrimeTable& table, double x);
// Prod_{p<=x} (1 - 1/p) as exp of a compensated sum of log1p(-1/p).
double mertens_product(const PrimeTable& table, double x);
// Sum_{p<=x} log(p)/p.
double weighted_logp_sum(const PrimeTable& table, double x);
// Sum_{p<=x} p^{-s} for s >= 1.
double prime_power_reciprocal_sum(const PrimeTable& table, double x, int s);

// Mertens constant M = gamma + Sum_p (log(1-1/p) + 1/p) from the primes in the
// table plus the tail estimate -1/(2 X log X) at X = table.limit().
double mertens_constant_estimate(const PrimeTable& table);

}  // namespace modprime
