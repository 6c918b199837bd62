#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference in
// kernels::scalar and, on x86-64, an AVX2+FMA variant in kernels::avx2.
// The unqualified entry points dispatch at runtime to the best supported
// variant; MODPRIME_SIMD=scalar in the environment forces the reference path.

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

namespace modprime::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
bool isa_supported(Isa isa);
// Overrides the runtime choice (tests use this to compare variants).
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

// Philox4x32-10 keyed by the seed; counter = (sample lo, sample hi, block, 0).
// Word j of block b is the draw for prime index 4b + j.
struct PhiloxBlock {
  std::uint32_t w[4];
};
PhiloxBlock philox4x32(std::uint64_t seed, std::uint64_t sample, std::uint32_t block);
// Uniform angle in (0, 2 pi) for one (seed, sample, prime index).
double uniform_angle(std::uint64_t seed, std::uint64_t sample, std::uint32_t prime_index);
// (w + 0.5) * 2 pi / 2^32 for one Philox output word.
double uniform_angle_from_word(std::uint32_t w);

// out[j] = sum_n amp[n] * sin(t[j] * freq[n]), terms accumulated in index order.
void sin_sum_batch(std::span<const double> freq, std::span<const double> amp, std::span<const double> t,
                   std::span<double> out);

// out[j] = sum_n coef[n] * exp(-i t[j] freq[n]).
void exp_sum_batch(std::span<const double> freq, std::span<const std::complex<double>> coef,
                   std::span<const double> t, std::span<std::complex<double>> out);

// out[s] = sum_i scales[i] * sin(theta_i) for samples first_sample + s, with
// theta_i = uniform_angle(seed, first_sample + s, i).
void model_sample_sums(std::uint64_t seed, std::uint64_t first_sample, std::span<const double> scales,
                       std::span<double> out);

namespace scalar {
void sin_sum_batch(std::span<const double> freq, std::span<const double> amp, std::span<const double> t,
                   std::span<double> out);
void exp_sum_batch(std::span<const double> freq, std::span<const std::complex<double>> coef,
                   std::span<const double> t, std::span<std::complex<double>> out);
void model_sample_sums(std::uint64_t seed, std::uint64_t first_sample, std::span<const double> scales,
                       std::span<double> out);
}  // namespace scalar

namespace avx2 {
void sin_sum_batch(std::span<const double> freq, std::span<const double> amp, std::span<const double> t,
                   std::span<double> out);
void exp_sum_batch(std::span<const double> freq, std::span<const std::complex<double>> coef,
                   std::span<const double> t, std::span<std::complex<double>> out);
void model_sample_sums(std::uint64_t seed, std::uint64_t first_sample, std::span<const double> scales,
                       std::span<double> out);
}  // namespace avx2

}  // namespace modprime::kernels
