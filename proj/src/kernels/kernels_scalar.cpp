#include <cmath>

#include "modprime/kernels.hpp"
#include "philox.hpp"

namespace modprime::kernels::scalar {

void sin_sum_batch(std::span<const double> freq, std::span<const double> amp, std::span<const double> t,
                   std::span<double> out) {
  for (std::size_t j = 0; j < t.size(); ++j) {
    double acc = 0.0;
    for (std::size_t n = 0; n < freq.size(); ++n) acc += amp[n] * std::sin(t[j] * freq[n]);
    out[j] = acc;
  }
}

void exp_sum_batch(std::span<const double> freq, std::span<const std::complex<double>> coef,
                   std::span<const double> t, std::span<std::complex<double>> out) {
  for (std::size_t j = 0; j < t.size(); ++j) {
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < freq.size(); ++n) {
      const double a = t[j] * freq[n];
      const double c = std::cos(a), s = std::sin(a);
      re += coef[n].real() * c + coef[n].imag() * s;
      im += coef[n].imag() * c - coef[n].real() * s;
    }
    out[j] = {re, im};
  }
}

void model_sample_sums(std::uint64_t seed, std::uint64_t first_sample, std::span<const double> scales,
                       std::span<double> out) {
  const std::size_t n = scales.size();
  for (std::size_t s = 0; s < out.size(); ++s) {
    double acc = 0.0;
    std::uint32_t words[4];
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 4 == 0) detail::philox_block(seed, first_sample + s, static_cast<std::uint32_t>(i / 4), words);
      const double theta = (words[i % 4] + 0.5) * detail::kAngleScale;
      acc += scales[i] * std::sin(theta);
    }
    out[s] = acc;
  }
}

}  // namespace modprime::kernels::scalar
