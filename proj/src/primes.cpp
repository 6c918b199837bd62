#include "modprime/primes.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "modprime/errors.hpp"
#include "modprime/specfun.hpp"
#include "modprime/summation.hpp"

namespace modprime {

namespace {

constexpr std::array<char, 4> kMagic{'M', 'P', 'R', 'M'};
constexpr std::uint32_t kCacheVersion = 1;
constexpr std::uint64_t kSegmentOdds = 1u << 18;

inline bool test_bit(const std::vector<std::uint64_t>& bits, std::uint64_t i) {
  return (bits[i >> 6] >> (i & 63)) & 1u;
}

inline void clear_bit(std::vector<std::uint64_t>& bits, std::uint64_t i) {
  bits[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

// Plain sieve for the base primes <= sqrt(limit).
std::vector<std::uint32_t> small_primes(std::uint64_t n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

void check_range(const PrimeTable& table, double x) {
  if (!(x >= 2.0) || x > static_cast<double>(table.limit())) {
    throw DomainError("x = " + std::to_string(x) + " outside [2, " +
                      std::to_string(table.limit()) + "]");
  }
}

template <class F>
double sum_over_primes(const PrimeTable& table, double x, F term) {
  check_range(table, x);
  const std::size_t n = table.count_upto(x);
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) acc += term(i);
  return acc.value();
}

}  // namespace

PrimeTable PrimeTable::sieve(std::uint64_t limit) {
  if (limit < 2) throw DomainError("sieve limit must be >= 2");
  if (limit > kMaxLimit) throw ResourceError("sieve limit above " + std::to_string(kMaxLimit));

  // Odd-only bitset: bit i <-> 2i+1. Index 0 (the number 1) is cleared.
  const std::uint64_t n_odds = limit / 2 + (limit % 2);  // odd numbers in [1, limit]
  std::vector<std::uint64_t> bits((n_odds + 63) / 64, ~std::uint64_t{0});
  if (n_odds % 64 != 0) bits.back() &= (std::uint64_t{1} << (n_odds % 64)) - 1;
  clear_bit(bits, 0);

  const auto base = small_primes(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1);
  for (std::uint64_t lo = 0; lo < n_odds; lo += kSegmentOdds) {
    const std::uint64_t hi = std::min(n_odds, lo + kSegmentOdds);  // odd indices [lo, hi)
    for (std::uint32_t p : base) {
      if (p == 2) continue;
      const std::uint64_t pp = std::uint64_t{p} * p;
      if (pp > 2 * (hi - 1) + 1) break;
      // first odd multiple of p that is >= max(p*p, 2*lo+1)
      std::uint64_t start = std::max(pp, ((2 * lo + 1 + p - 1) / p) * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t m = start; (m - 1) / 2 < hi; m += 2 * p) clear_bit(bits, (m - 1) / 2);
    }
  }
  return from_bits(limit, std::move(bits));
}

PrimeTable PrimeTable::from_bits(std::uint64_t limit, std::vector<std::uint64_t> bits) {
  PrimeTable t;
  t.limit_ = limit;
  t.odd_bits_ = std::move(bits);
  t.build_derived();
  return t;
}

void PrimeTable::build_derived() {
  primes_.clear();
  primes_.push_back(2);
  for (std::size_t w = 0; w < odd_bits_.size(); ++w) {
    std::uint64_t word = odd_bits_[w];
    while (word != 0) {
      const int b = std::countr_zero(word);
      word &= word - 1;
      const std::uint64_t n = 2 * (64 * w + b) + 1;
      if (n <= limit_) primes_.push_back(static_cast<std::uint32_t>(n));
    }
  }
  log_p_.resize(primes_.size());
  inv_sqrt_p_.resize(primes_.size());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const double p = primes_[i];
    log_p_[i] = std::log(p);
    inv_sqrt_p_[i] = 1.0 / std::sqrt(p);
  }

  powers_.clear();
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const std::uint64_t p = primes_[i];
    std::uint64_t n = p;
    for (int k = 1;; ++k) {
      const double dn = static_cast<double>(n);
      powers_.push_back({n, static_cast<std::uint32_t>(p), k, k * log_p_[i], 1.0 / std::sqrt(dn)});
      if (n > limit_ / p) break;
      n *= p;
    }
  }
  std::sort(powers_.begin(), powers_.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
}

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot open sieve cache for writing: " + path.string());
  out.write(kMagic.data(), kMagic.size());
  const std::uint32_t version = kCacheVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&limit_), sizeof limit_);
  out.write(reinterpret_cast<const char*>(odd_bits_.data()),
            static_cast<std::streamsize>(odd_bits_.size() * sizeof(std::uint64_t)));
  if (!out) throw ResourceError("failed writing sieve cache: " + path.string());
}

PrimeTable PrimeTable::load(const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "cache format is little-endian");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open sieve cache: " + path.string());
  std::array<char, 4> magic{};
  std::uint32_t version = 0;
  std::uint64_t limit = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&limit), sizeof limit);
  if (!in || magic != kMagic) throw ContractError("sieve cache has a bad header: " + path.string());
  if (version != kCacheVersion) throw ContractError("unsupported sieve cache version " + std::to_string(version));
  if (limit < 2 || limit > kMaxLimit) throw ContractError("sieve cache limit out of range");
  const std::uint64_t n_odds = limit / 2 + (limit % 2);
  std::vector<std::uint64_t> bits((n_odds + 63) / 64);
  in.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size() * sizeof(std::uint64_t)));
  if (!in) throw ContractError("sieve cache truncated: " + path.string());
  if (in.peek() != std::ifstream::traits_type::eof()) throw ContractError("sieve cache has trailing bytes");
  return from_bits(limit, std::move(bits));
}

std::size_t PrimeTable::count_upto(double x) const {
  if (x < 2.0) return 0;
  const double fx = std::floor(x);
  if (fx >= static_cast<double>(std::numeric_limits<std::uint32_t>::max())) return primes_.size();
  const auto bound = static_cast<std::uint32_t>(fx);
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), bound) - primes_.begin());
}

std::size_t PrimeTable::powers_upto(double x) const {
  if (x < 2.0) return 0;
  const auto bound = static_cast<std::uint64_t>(std::floor(x));
  return static_cast<std::size_t>(
      std::upper_bound(powers_.begin(), powers_.end(), bound,
                       [](std::uint64_t v, const PrimePower& pp) { return v < pp.n; }) -
      powers_.begin());
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n > limit_) throw DomainError("is_prime query above sieve limit");
  if (n == 2) return true;
  if (n < 2 || n % 2 == 0) return false;
  return test_bit(odd_bits_, (n - 1) / 2);
}

double prime_reciprocal_sum(const PrimeTable& table, double x) {
  const auto p = table.primes();
  return sum_over_primes(table, x, [&](std::size_t i) { return 1.0 / p[i]; });
}

double mertens_product(const PrimeTable& table, double x) {
  const auto p = table.primes();
  return std::exp(sum_over_primes(table, x, [&](std::size_t i) { return std::log1p(-1.0 / p[i]); }));
}

double weighted_logp_sum(const PrimeTable& table, double x) {
  const auto p = table.primes();
  const auto lp = table.log_primes();
  return sum_over_primes(table, x, [&](std::size_t i) { return lp[i] / p[i]; });
}

double prime_power_reciprocal_sum(const PrimeTable& table, double x, int s) {
  if (s < 1) throw ContractError("prime_power_reciprocal_sum needs s >= 1");
  const auto p = table.primes();
  return sum_over_primes(table, x, [&](std::size_t i) { return std::pow(static_cast<double>(p[i]), -s); });
}

double mertens_constant_estimate(const PrimeTable& table) {
  const double X = static_cast<double>(table.limit());
  const auto p = table.primes();
  const double partial = sum_over_primes(table, X, [&](std::size_t i) {
    const double y = 1.0 / p[i];
    return std::log1p(-y) + y;
  });
  return euler_gamma() + partial - 1.0 / (2.0 * X * std::log(X));
}

}  // namespace modprime
