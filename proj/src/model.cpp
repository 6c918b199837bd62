#include "modprime/model.hpp"

#include <algorithm>
#include <cmath>

#include "modprime/errors.hpp"
#include "modprime/format.hpp"
#include "modprime/kernels.hpp"
#include "modprime/parallel.hpp"
#include "modprime/series.hpp"
#include "modprime/summation.hpp"

namespace modprime {

namespace {

using cd = std::complex<double>;

constexpr double kNearZero = 1e-12;
constexpr std::size_t kSampleChunk = 512;
// Real-mode DP work limit, in coefficient updates.
constexpr double kDpBudget = 4e9;
// Denominators grow like the primorial; past this the rational DP is impractical.
constexpr std::size_t kRationalPrimeLimit = 5000;

void require_unit(const WeightedPrimeSystem& sys, const char* what) {
  if (!sys.unit_weights()) throw ContractError(std::string(what) + " is defined for unit weights only");
}

// (2m)! / 4^m.
double moment_prefactor(int m) {
  double v = 1.0;
  for (int j = 1; j <= 2 * m; ++j) v *= j;
  return std::ldexp(v, -2 * m);
}

mpq_class moment_prefactor_exact(int m) {
  mpz_class f = 1;
  for (int j = 1; j <= 2 * m; ++j) f *= j;
  mpz_class d = 1;
  d <<= 2 * m;
  mpq_class q(f, d);
  q.canonicalize();
  return q;
}

// Coefficients of prod_p sum_{j<=m} (s_p^2 z)^j / (j!)^2.
std::vector<double> moment_dp_real(const WeightedPrimeSystem& sys, int m) {
  if (static_cast<double>(sys.size()) * (m + 1) * (m + 1) > kDpBudget) {
    throw ResourceError("moment DP needs " + std::to_string(sys.size()) + " x " + std::to_string(m + 1) +
                        "^2 updates, above the budget");
  }
  std::vector<double> poly(m + 1, 0.0), factor(m + 1), next(m + 1);
  poly[0] = 1.0;
  for (double s : sys.scales) {
    const double s2 = s * s;
    factor[0] = 1.0;
    for (int j = 1; j <= m; ++j) factor[j] = factor[j - 1] * s2 / (static_cast<double>(j) * j);
    for (int n = 0; n <= m; ++n) {
      double acc = 0.0;
      for (int j = 0; j <= n; ++j) acc += poly[n - j] * factor[j];
      next[n] = acc;
    }
    poly.swap(next);
  }
  return poly;
}

std::vector<mpq_class> moment_dp_rational(const WeightedPrimeSystem& sys, int m) {
  std::vector<mpq_class> poly(m + 1, mpq_class(0)), factor(m + 1), next(m + 1);
  poly[0] = 1;
  for (std::uint32_t p : sys.primes) {
    factor[0] = 1;
    for (int j = 1; j <= m; ++j) {
      factor[j] = factor[j - 1] / mpq_class(mpz_class(p) * j * j);
    }
    for (int n = 0; n <= m; ++n) {
      mpq_class acc = 0;
      for (int j = 0; j <= n; ++j) acc += poly[n - j] * factor[j];
      next[n] = acc;
    }
    poly.swap(next);
  }
  return poly;
}

bool use_rational(const WeightedPrimeSystem& sys, MomentMode mode) {
  switch (mode) {
    case MomentMode::rational:
      require_unit(sys, "rational moment mode");
      if (sys.size() > kRationalPrimeLimit) {
        throw ResourceError("rational moments need pi(x) <= " + std::to_string(kRationalPrimeLimit) + ", got " +
                            std::to_string(sys.size()));
      }
      return true;
    case MomentMode::real:
      return false;
    case MomentMode::automatic:
      return sys.unit_weights() && sys.size() <= kRationalPrimeBudget;
  }
  return false;
}

}  // namespace

WeightedPrimeSystem WeightedPrimeSystem::from_table(const PrimeTable& table, double x, Weight w) {
  if (!(x >= 2.0) || x > static_cast<double>(table.limit())) {
    throw DomainError("cutoff x = " + std::to_string(x) + " outside [2, " + std::to_string(table.limit()) + "]");
  }
  WeightedPrimeSystem sys;
  sys.x = x;
  sys.weight = w;
  const std::size_t n = table.count_upto(x);
  const auto p = table.primes();
  const auto lp = table.log_primes();
  const auto isp = table.inv_sqrt_primes();
  const double log_x = std::log(x);
  sys.primes.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n));
  sys.amplitudes.resize(n);
  sys.scales.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = w == Weight::one ? 1.0 : apply_weight(w, std::min(1.0, lp[i] / log_x));
    sys.amplitudes[i] = a;
    sys.scales[i] = a * isp[i];
  }
  return sys;
}

WeightedPrimeSystem WeightedPrimeSystem::from_primes(std::vector<std::uint32_t> primes) {
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end()) {
    throw ContractError("prime set has duplicates");
  }
  WeightedPrimeSystem sys;
  sys.x = primes.empty() ? 0.0 : primes.back();
  sys.primes = std::move(primes);
  sys.amplitudes.assign(sys.primes.size(), 1.0);
  sys.scales.resize(sys.primes.size());
  for (std::size_t i = 0; i < sys.primes.size(); ++i) sys.scales[i] = 1.0 / std::sqrt(double(sys.primes[i]));
  return sys;
}

ModelCharfun model_charfun(const WeightedPrimeSystem& sys, cd z) {
  const std::size_t n = sys.size();
  std::vector<cd> j0m1(n);
  bool near = false;
  for (std::size_t i = 0; i < n; ++i) {
    j0m1[i] = bessel_j0_minus_one(z * sys.scales[i]);
    if (std::abs(1.0 + j0m1[i]) < kNearZero) near = true;
  }
  if (near) {
    cd prod = 1.0;
    for (const cd& d : j0m1) prod *= 1.0 + d;
    return {prod, true};
  }
  if (z.imag() == 0.0) {
    std::vector<double> logs(n);
    bool negative = false;
    for (std::size_t i = 0; i < n; ++i) {
      logs[i] = log_bessel_j0(z * sys.scales[i]).real();
      if (1.0 + j0m1[i].real() < 0.0) negative = !negative;
    }
    const double mag = std::exp(pairwise_sum<double>(logs));
    return {cd(negative ? -mag : mag, 0.0), false};
  }
  std::vector<cd> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = log_bessel_j0(z * sys.scales[i]);
  return {std::exp(pairwise_sum<cd>(logs)), false};
}

std::string ModelMoment::to_string() const { return exact ? rational_string(*exact) : format_real(value); }

ModelMoment model_moment_exact(const WeightedPrimeSystem& sys, int k, MomentMode mode) {
  if (k < 0) throw ContractError("moment order must be >= 0");
  const bool rational = use_rational(sys, mode);
  ModelMoment out;
  if (k % 2 == 1) {
    if (rational) out.exact = mpq_class(0);
    out.value = 0.0;
    return out;
  }
  const int m = k / 2;
  if (rational) {
    const auto poly = moment_dp_rational(sys, m);
    mpq_class v = poly[m] * moment_prefactor_exact(m);
    v.canonicalize();
    out.value = v.get_d();
    out.exact = std::move(v);
  } else {
    out.value = moment_dp_real(sys, m)[m] * moment_prefactor(m);
  }
  return out;
}

std::vector<double> model_moments(const WeightedPrimeSystem& sys, int K) {
  if (K < 1) throw ContractError("need K >= 1 moments");
  const auto poly = moment_dp_real(sys, K / 2);
  std::vector<double> out(K, 0.0);
  for (int k = 2; k <= K; k += 2) out[k - 1] = poly[k / 2] * moment_prefactor(k / 2);
  return out;
}

std::vector<mpq_class> model_moments_rational(const WeightedPrimeSystem& sys, int K) {
  if (K < 1) throw ContractError("need K >= 1 moments");
  require_unit(sys, "rational moment mode");
  const auto poly = moment_dp_rational(sys, K / 2);
  std::vector<mpq_class> out(K, mpq_class(0));
  for (int k = 2; k <= K; k += 2) {
    out[k - 1] = poly[k / 2] * moment_prefactor_exact(k / 2);
    out[k - 1].canonicalize();
  }
  return out;
}

double model_moment_bound(const WeightedPrimeSystem& sys, int k) {
  if (k < 0 || k % 2 != 0) throw ContractError("moment bound needs an even order k >= 0");
  const int m = k / 2;
  CompensatedSum s2;
  for (double s : sys.scales) s2 += s * s;
  double pref = 1.0;  // (2m)! / (4^m m!)
  for (int j = m + 1; j <= 2 * m; ++j) pref *= j;
  return std::ldexp(pref, -2 * m) * std::pow(s2.value(), m);
}

void SampleBatch::write_csv(std::ostream& out) const {
  const bool logs = !log_values.empty();
  out << (logs ? "index,value,log_value\n" : "index,value\n");
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << i << ',' << format_real(values[i]);
    if (logs) out << ',' << format_real(log_values[i]);
    out << '\n';
  }
}

SampleBatch sample_model(const WeightedPrimeSystem& sys, std::uint64_t seed, std::size_t count, bool with_log_terms) {
  if (count < 1) throw ContractError("sample count must be >= 1");
  SampleBatch batch;
  batch.seed = seed;
  batch.count = count;
  batch.values.resize(count);
  if (with_log_terms) batch.log_values.resize(count);
  const std::size_t n_chunks = (count + kSampleChunk - 1) / kSampleChunk;
  const std::span<const double> scales = sys.scales;

  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t first = c * kSampleChunk;
    const std::size_t len = std::min(kSampleChunk, count - first);
    if (!with_log_terms) {
      kernels::model_sample_sums(seed, first, scales, std::span<double>(batch.values).subspan(first, len));
      return;
    }
    std::vector<double> inv_sqrt(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(double(sys.primes[i]));
    for (std::size_t s = first; s < first + len; ++s) {
      double value = 0.0, log_value = 0.0;
      kernels::PhiloxBlock block{};
      for (std::size_t i = 0; i < sys.size(); ++i) {
        if (i % 4 == 0) block = kernels::philox4x32(seed, s, static_cast<std::uint32_t>(i / 4));
        const double theta = kernels::uniform_angle_from_word(block.w[i % 4]);
        const double sn = std::sin(theta), cs = std::cos(theta);
        value += scales[i] * sn;
        log_value += std::atan2(inv_sqrt[i] * sn, 1.0 - inv_sqrt[i] * cs);
      }
      batch.values[s] = value;
      batch.log_values[s] = log_value;
    }
  });
  return batch;
}

LogCorrelation model_log_correlation(const WeightedPrimeSystem& sys, double u, int k_max) {
  require_unit(sys, "model_log_correlation");
  if (k_max < 1 || k_max % 2 == 0) throw ContractError("k_max must be odd and >= 1");
  const std::size_t n = sys.size();
  std::vector<double> j0(n);
  for (std::size_t i = 0; i < n; ++i) j0[i] = 1.0 + bessel_j0_minus_one(u * sys.scales[i]).real();
  // prod_{q != p} J_0 via prefix and suffix products (no division by small factors).
  std::vector<double> prefix(n + 1, 1.0), suffix(n + 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * j0[i];
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * j0[i];

  CompensatedComplexSum acc;
  CompensatedSum tail;
  for (std::size_t i = 0; i < n; ++i) {
    const double others = prefix[i] * suffix[i + 1];
    const double v = u * sys.scales[i];
    const double r = sys.scales[i];  // p^{-1/2}
    for (int k = 1; k <= k_max; k += 2) {
      const double jk = bessel_j(k, v).value.real();
      acc += cd(0.0, 1.0) * (std::pow(r, k) / k * jk * others);
    }
    // |J_k(v)| <= (|v|/2)^k / k!; the terms decay faster than geometrically.
    double last = 0.0;
    for (int k = k_max + 2; k <= k_max + 400; k += 2) {
      const double lg = k * std::log(std::abs(v) / 2.0) - std::lgamma(k + 1.0) + k * std::log(r) - std::log(k);
      const double term = std::abs(others) * std::exp(lg);
      tail += term;
      last = term;
      if (term == 0.0) break;
    }
    tail += last;
  }
  return {acc.value(), tail.value()};
}

LogSecondMoment model_log_second_moment(const WeightedPrimeSystem& sys, int k_max) {
  require_unit(sys, "model_log_second_moment");
  if (k_max < 1) throw ContractError("k_max must be >= 1");
  CompensatedSum acc, tail;
  for (std::uint32_t p : sys.primes) {
    const double inv_p = 1.0 / p;
    double pk = 1.0;
    for (int k = 1; k <= k_max; ++k) {
      pk *= inv_p;
      if (pk == 0.0) break;
      acc += pk / (2.0 * k * k);
    }
    const double kk = k_max + 1.0;
    tail += std::pow(inv_p, kk) / (2.0 * kk * kk * (1.0 - inv_p));
  }
  return {acc.value(), tail.value()};
}

}  // namespace modprime
