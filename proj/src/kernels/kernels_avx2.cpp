// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only called after a
// runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include <cmath>
#include <vector>

#include "modprime/kernels.hpp"
#include "philox.hpp"

namespace modprime::kernels::avx2 {

namespace {

// Cephes-style sin/cos: Cody-Waite reduction by pi/4 in three parts, then
// minimax polynomials on [-pi/4, pi/4]. Valid for |x| < kMaxArg.
constexpr double kMaxArg = 1.0e9;
constexpr double kFourOverPi = 1.27323954473516268615;
constexpr double kDP1 = 7.85398125648498535156e-1;
constexpr double kDP2 = 3.77489470793079817668e-8;
constexpr double kDP3 = 2.69515142907905952645e-15;

inline __m256d poly_sin(__m256d z, __m256d zz) {
  __m256d p = _mm256_set1_pd(1.58962301576546568060e-10);
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-2.50507477628578072866e-8));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(2.75573136213857245213e-6));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-1.98412698295895385996e-4));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(8.33333333332211858878e-3));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-1.66666666666666307295e-1));
  return _mm256_fmadd_pd(_mm256_mul_pd(z, zz), p, z);
}

inline __m256d poly_cos(__m256d zz) {
  __m256d p = _mm256_set1_pd(-1.13585365213876817300e-11);
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(2.08757008419747316778e-9));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-2.75573141792967388112e-7));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(2.48015872888517045348e-5));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-1.38888888888730564116e-3));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(4.16666666666665929218e-2));
  const __m256d zz2 = _mm256_mul_pd(zz, zz);
  return _mm256_fmadd_pd(zz2, p, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));
}

struct Reduced {
  __m256d z;
  __m256i quadrant;  // 0..3 in the low bits of each 64-bit lane
};

inline Reduced reduce(__m256d ax) {
  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
  __m256i j = _mm256_castpd_si256(_mm256_add_pd(y, magic));
  const __m256i odd = _mm256_and_si256(j, _mm256_set1_epi64x(1));
  j = _mm256_add_epi64(j, odd);
  const __m256i odd_mask = _mm256_cmpeq_epi64(odd, _mm256_set1_epi64x(1));
  y = _mm256_add_pd(y, _mm256_and_pd(_mm256_castsi256_pd(odd_mask), _mm256_set1_pd(1.0)));
  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP2), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP3), z);
  const __m256i quadrant = _mm256_and_si256(_mm256_srli_epi64(j, 1), _mm256_set1_epi64x(3));
  return {z, quadrant};
}

inline __m256d select(__m256i mask, __m256d if_true, __m256d if_false) {
  return _mm256_blendv_pd(if_false, if_true, _mm256_castsi256_pd(mask));
}

inline __m256d flip_sign(__m256i mask, __m256d v) {
  const __m256d sign = _mm256_and_pd(_mm256_castsi256_pd(mask), _mm256_set1_pd(-0.0));
  return _mm256_xor_pd(v, sign);
}

inline bool any_large(__m256d ax) {
  return _mm256_movemask_pd(_mm256_cmp_pd(ax, _mm256_set1_pd(kMaxArg), _CMP_GT_OQ)) != 0;
}

inline __m256d scalar_fallback_sin(__m256d x) {
  alignas(32) double v[4];
  _mm256_store_pd(v, x);
  for (double& e : v) e = std::sin(e);
  return _mm256_load_pd(v);
}

inline void scalar_fallback_sincos(__m256d x, __m256d& s, __m256d& c) {
  alignas(32) double v[4], sv[4], cv[4];
  _mm256_store_pd(v, x);
  for (int i = 0; i < 4; ++i) {
    sv[i] = std::sin(v[i]);
    cv[i] = std::cos(v[i]);
  }
  s = _mm256_load_pd(sv);
  c = _mm256_load_pd(cv);
}

inline __m256d vsin(__m256d x) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d ax = _mm256_andnot_pd(sign_bit, x);
  if (any_large(ax)) return scalar_fallback_sin(x);
  const Reduced r = reduce(ax);
  const __m256d zz = _mm256_mul_pd(r.z, r.z);
  const __m256d ps = poly_sin(r.z, zz);
  const __m256d pc = poly_cos(zz);
  const __m256i q = r.quadrant;
  const __m256i use_cos = _mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(1)), _mm256_set1_epi64x(1));
  const __m256i negate = _mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(2)), _mm256_set1_epi64x(2));
  __m256d v = select(use_cos, pc, ps);
  v = flip_sign(negate, v);
  return _mm256_xor_pd(v, _mm256_and_pd(x, sign_bit));
}

inline void vsincos(__m256d x, __m256d& s, __m256d& c) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d ax = _mm256_andnot_pd(sign_bit, x);
  if (any_large(ax)) {
    scalar_fallback_sincos(x, s, c);
    return;
  }
  const Reduced r = reduce(ax);
  const __m256d zz = _mm256_mul_pd(r.z, r.z);
  const __m256d ps = poly_sin(r.z, zz);
  const __m256d pc = poly_cos(zz);
  const __m256i q = r.quadrant;
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i odd = _mm256_cmpeq_epi64(_mm256_and_si256(q, one), one);
  // sin: q0 +s, q1 +c, q2 -s, q3 -c.  cos: q0 +c, q1 -s, q2 -c, q3 +s.
  const __m256i sin_neg = _mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(2)), _mm256_set1_epi64x(2));
  const __m256i q_plus_1 = _mm256_add_epi64(q, one);
  const __m256i cos_neg =
      _mm256_cmpeq_epi64(_mm256_and_si256(q_plus_1, _mm256_set1_epi64x(2)), _mm256_set1_epi64x(2));
  s = flip_sign(sin_neg, select(odd, pc, ps));
  s = _mm256_xor_pd(s, _mm256_and_pd(x, sign_bit));
  c = flip_sign(cos_neg, select(odd, ps, pc));
}

inline double hsum(__m256d v) {
  alignas(32) double a[4];
  _mm256_store_pd(a, v);
  return (a[0] + a[1]) + (a[2] + a[3]);
}

}  // namespace

void sin_sum_batch(std::span<const double> freq, std::span<const double> amp, std::span<const double> t,
                   std::span<double> out) {
  const std::size_t n_terms = freq.size();
  std::size_t j = 0;
  for (; j + 4 <= t.size(); j += 4) {
    const __m256d tv = _mm256_loadu_pd(t.data() + j);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t n = 0; n < n_terms; ++n) {
      const __m256d s = vsin(_mm256_mul_pd(tv, _mm256_set1_pd(freq[n])));
      acc = _mm256_fmadd_pd(_mm256_set1_pd(amp[n]), s, acc);
    }
    _mm256_storeu_pd(out.data() + j, acc);
  }
  if (j < t.size()) scalar::sin_sum_batch(freq, amp, t.subspan(j), out.subspan(j));
}

void exp_sum_batch(std::span<const double> freq, std::span<const std::complex<double>> coef,
                   std::span<const double> t, std::span<std::complex<double>> out) {
  const std::size_t n_terms = freq.size();
  std::size_t j = 0;
  for (; j + 4 <= t.size(); j += 4) {
    const __m256d tv = _mm256_loadu_pd(t.data() + j);
    __m256d re = _mm256_setzero_pd();
    __m256d im = _mm256_setzero_pd();
    for (std::size_t n = 0; n < n_terms; ++n) {
      __m256d s, c;
      vsincos(_mm256_mul_pd(tv, _mm256_set1_pd(freq[n])), s, c);
      const __m256d cr = _mm256_set1_pd(coef[n].real());
      const __m256d ci = _mm256_set1_pd(coef[n].imag());
      re = _mm256_fmadd_pd(cr, c, _mm256_fmadd_pd(ci, s, re));
      im = _mm256_fmadd_pd(ci, c, _mm256_fnmadd_pd(cr, s, im));
    }
    alignas(32) double rv[4], iv[4];
    _mm256_store_pd(rv, re);
    _mm256_store_pd(iv, im);
    for (int l = 0; l < 4; ++l) out[j + l] = {rv[l], iv[l]};
  }
  if (j < t.size()) scalar::exp_sum_batch(freq, coef, t.subspan(j), out.subspan(j));
}

void model_sample_sums(std::uint64_t seed, std::uint64_t first_sample, std::span<const double> scales,
                       std::span<double> out) {
  // Groups of 16 primes = 4 Philox blocks, one block per 64-bit lane.
  // permuted[g*16 + j*4 + b] is the scale of prime index 16g + 4b + j.
  const std::size_t n_groups = (scales.size() + 15) / 16;
  std::vector<double> permuted(n_groups * 16, 0.0);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const std::size_t g = i / 16, b = (i % 16) / 4, j = i % 4;
    permuted[g * 16 + j * 4 + b] = scales[i];
  }

  std::uint32_t k0[detail::kPhiloxRounds], k1[detail::kPhiloxRounds];
  k0[0] = static_cast<std::uint32_t>(seed);
  k1[0] = static_cast<std::uint32_t>(seed >> 32);
  for (int r = 1; r < detail::kPhiloxRounds; ++r) {
    k0[r] = k0[r - 1] + detail::kPhiloxW0;
    k1[r] = k1[r - 1] + detail::kPhiloxW1;
  }
  const __m256i mask32 = _mm256_set1_epi64x(0xFFFFFFFFLL);
  const __m256i m0 = _mm256_set1_epi64x(detail::kPhiloxM0);
  const __m256i m1 = _mm256_set1_epi64x(detail::kPhiloxM1);
  const __m256i exp_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d angle_scale = _mm256_set1_pd(detail::kAngleScale);

  for (std::size_t s = 0; s < out.size(); ++s) {
    const std::uint64_t sample = first_sample + s;
    const __m256i c0_init = _mm256_set1_epi64x(static_cast<std::uint32_t>(sample));
    const __m256i c1_init = _mm256_set1_epi64x(static_cast<std::uint32_t>(sample >> 32));
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t g = 0; g < n_groups; ++g) {
      const std::int64_t b0 = static_cast<std::int64_t>(4 * g);
      __m256i c0 = c0_init, c1 = c1_init;
      __m256i c2 = _mm256_set_epi64x(b0 + 3, b0 + 2, b0 + 1, b0);
      __m256i c3 = _mm256_setzero_si256();
      for (int r = 0; r < detail::kPhiloxRounds; ++r) {
        const __m256i p0 = _mm256_mul_epu32(c0, m0);
        const __m256i p1 = _mm256_mul_epu32(c2, m1);
        const __m256i hi0 = _mm256_srli_epi64(p0, 32), lo0 = _mm256_and_si256(p0, mask32);
        const __m256i hi1 = _mm256_srli_epi64(p1, 32), lo1 = _mm256_and_si256(p1, mask32);
        const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), _mm256_set1_epi64x(k0[r]));
        const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), _mm256_set1_epi64x(k1[r]));
        c0 = n0;
        c1 = lo1;
        c2 = n2;
        c3 = lo0;
      }
      const __m256i words[4] = {c0, c1, c2, c3};
      const double* sc = permuted.data() + g * 16;
      for (int j = 0; j < 4; ++j) {
        const __m256d r = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(words[j], exp_bits)), two52);
        const __m256d theta = _mm256_mul_pd(_mm256_add_pd(r, half), angle_scale);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(sc + 4 * j), vsin(theta), acc);
      }
    }
    out[s] = hsum(acc);
  }
}

}  // namespace modprime::kernels::avx2
