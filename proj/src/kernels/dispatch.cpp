#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "modprime/errors.hpp"
#include "modprime/kernels.hpp"
#include "philox.hpp"

namespace modprime::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("MODPRIME_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::scalar;
  }
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<int>& active_slot() {
  static std::atomic<int> slot{static_cast<int>(detect())};
  return slot;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(MODPRIME_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return static_cast<Isa>(active_slot().load(std::memory_order_relaxed)); }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) throw ContractError("requested instruction set is not supported on this CPU");
  active_slot().store(static_cast<int>(isa));
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

PhiloxBlock philox4x32(std::uint64_t seed, std::uint64_t sample, std::uint32_t block) {
  PhiloxBlock b{};
  detail::philox_block(seed, sample, block, b.w);
  return b;
}

double uniform_angle(std::uint64_t seed, std::uint64_t sample, std::uint32_t prime_index) {
  std::uint32_t w[4];
  detail::philox_block(seed, sample, prime_index / 4, w);
  return uniform_angle_from_word(w[prime_index % 4]);
}

double uniform_angle_from_word(std::uint32_t w) { return (w + 0.5) * detail::kAngleScale; }

#if defined(MODPRIME_HAVE_AVX2_TU)
#define MODPRIME_DISPATCH(fn, ...)                          \
  if (active_isa() == Isa::avx2) return avx2::fn(__VA_ARGS__); \
  return scalar::fn(__VA_ARGS__)
#else
#define MODPRIME_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void sin_sum_batch(std::span<const double> freq, std::span<const double> amp, std::span<const double> t,
                   std::span<double> out) {
  if (freq.size() != amp.size() || t.size() != out.size()) throw ContractError("sin_sum_batch size mismatch");
  MODPRIME_DISPATCH(sin_sum_batch, freq, amp, t, out);
}

void exp_sum_batch(std::span<const double> freq, std::span<const std::complex<double>> coef,
                   std::span<const double> t, std::span<std::complex<double>> out) {
  if (freq.size() != coef.size() || t.size() != out.size()) throw ContractError("exp_sum_batch size mismatch");
  MODPRIME_DISPATCH(exp_sum_batch, freq, coef, t, out);
}

void model_sample_sums(std::uint64_t seed, std::uint64_t first_sample, std::span<const double> scales,
                       std::span<double> out) {
  MODPRIME_DISPATCH(model_sample_sums, seed, first_sample, scales, out);
}

#undef MODPRIME_DISPATCH

#if !defined(MODPRIME_HAVE_AVX2_TU)
namespace avx2 {
void sin_sum_batch(std::span<const double> f, std::span<const double> a, std::span<const double> t,
                   std::span<double> o) {
  scalar::sin_sum_batch(f, a, t, o);
}
void exp_sum_batch(std::span<const double> f, std::span<const std::complex<double>> c, std::span<const double> t,
                   std::span<std::complex<double>> o) {
  scalar::exp_sum_batch(f, c, t, o);
}
void model_sample_sums(std::uint64_t seed, std::uint64_t first, std::span<const double> s, std::span<double> o) {
  scalar::model_sample_sums(seed, first, s, o);
}
}  // namespace avx2
#endif

}  // namespace modprime::kernels
