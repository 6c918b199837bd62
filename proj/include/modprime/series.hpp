#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "modprime/errors.hpp"

namespace modprime {

// Power series c_0 + c_1 z + ... + c_K z^K truncated at degree K.
// Coeff is mpq_class (exact) or double.
template <class Coeff>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int degree) : c_(check_degree(degree) + 1, Coeff(0)) {}
  TruncatedSeries(int degree, std::span<const Coeff> coeffs) : TruncatedSeries(degree) {
    for (std::size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) c_[i] = coeffs[i];
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Coeff& operator[](std::size_t i) { return c_.at(i); }
  const Coeff& operator[](std::size_t i) const { return c_.at(i); }
  std::span<const Coeff> coefficients() const { return c_; }

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  static std::size_t check_degree(int degree) {
    if (degree < 0) throw ContractError("series degree must be >= 0");
    return static_cast<std::size_t>(degree);
  }
  std::vector<Coeff> c_;
};

using RationalSeries = TruncatedSeries<mpq_class>;
using RealSeries = TruncatedSeries<double>;

namespace detail {
template <class Coeff>
void same_degree(const TruncatedSeries<Coeff>& a, const TruncatedSeries<Coeff>& b) {
  if (a.degree() != b.degree()) {
    throw ContractError("series degree mismatch: " + std::to_string(a.degree()) + " vs " +
                        std::to_string(b.degree()));
  }
}
}  // namespace detail

template <class Coeff>
TruncatedSeries<Coeff> series_add(const TruncatedSeries<Coeff>& a, const TruncatedSeries<Coeff>& b) {
  detail::same_degree(a, b);
  TruncatedSeries<Coeff> out(a.degree());
  for (int i = 0; i <= a.degree(); ++i) out[i] = a[i] + b[i];
  return out;
}

template <class Coeff>
TruncatedSeries<Coeff> series_scale(const TruncatedSeries<Coeff>& a, const Coeff& s) {
  TruncatedSeries<Coeff> out(a.degree());
  for (int i = 0; i <= a.degree(); ++i) out[i] = a[i] * s;
  return out;
}

// Cauchy product truncated at the common degree.
template <class Coeff>
TruncatedSeries<Coeff> series_mul(const TruncatedSeries<Coeff>& a, const TruncatedSeries<Coeff>& b) {
  detail::same_degree(a, b);
  const int K = a.degree();
  TruncatedSeries<Coeff> out(K);
  for (int n = 0; n <= K; ++n) {
    Coeff acc(0);
    for (int i = 0; i <= n; ++i) acc += a[i] * b[n - i];
    out[n] = acc;
  }
  return out;
}

// log a for a_0 = 1, via b' = a'/a: n b_n = n a_n - sum_{k=1}^{n-1} k b_k a_{n-k}.
template <class Coeff>
TruncatedSeries<Coeff> series_log(const TruncatedSeries<Coeff>& a) {
  if (a[0] != Coeff(1)) throw ContractError("series_log needs constant term 1");
  const int K = a.degree();
  TruncatedSeries<Coeff> b(K);
  for (int n = 1; n <= K; ++n) {
    Coeff acc = Coeff(n) * a[n];
    for (int k = 1; k < n; ++k) acc -= Coeff(k) * b[k] * a[n - k];
    b[n] = acc / Coeff(n);
  }
  return b;
}

// exp a for a_0 = 0, via b' = a' b: n b_n = sum_{k=1}^{n} k a_k b_{n-k}.
template <class Coeff>
TruncatedSeries<Coeff> series_exp(const TruncatedSeries<Coeff>& a) {
  if (a[0] != Coeff(0)) throw ContractError("series_exp needs constant term 0");
  const int K = a.degree();
  TruncatedSeries<Coeff> b(K);
  b[0] = Coeff(1);
  for (int n = 1; n <= K; ++n) {
    Coeff acc(0);
    for (int k = 1; k <= n; ++k) acc += Coeff(k) * a[k] * b[n - k];
    b[n] = acc / Coeff(n);
  }
  return b;
}

// Raw moments m_1..m_K -> cumulants kappa_1..kappa_K through
// log(1 + sum_j m_j z^j / j!). Output index j holds kappa_{j+1}.
template <class Coeff>
std::vector<Coeff> moments_to_cumulants(std::span<const Coeff> moments, int K) {
  if (K < 1) throw ContractError("moments_to_cumulants needs K >= 1");
  if (moments.size() < static_cast<std::size_t>(K)) throw ContractError("need at least K moments");
  TruncatedSeries<Coeff> mgf(K);
  mgf[0] = Coeff(1);
  Coeff fact(1);
  for (int j = 1; j <= K; ++j) {
    fact *= Coeff(j);
    mgf[j] = moments[j - 1] / fact;
  }
  const auto lg = series_log(mgf);
  std::vector<Coeff> out(K);
  fact = Coeff(1);
  for (int j = 1; j <= K; ++j) {
    fact *= Coeff(j);
    out[j - 1] = lg[j] * fact;
  }
  return out;
}

// Inverse of moments_to_cumulants.
template <class Coeff>
std::vector<Coeff> cumulants_to_moments(std::span<const Coeff> cumulants, int K) {
  if (K < 1) throw ContractError("cumulants_to_moments needs K >= 1");
  TruncatedSeries<Coeff> cgf(K);
  Coeff fact(1);
  for (int j = 1; j <= K; ++j) {
    fact *= Coeff(j);
    if (static_cast<std::size_t>(j) <= cumulants.size()) cgf[j] = cumulants[j - 1] / fact;
  }
  const auto ex = series_exp(cgf);
  std::vector<Coeff> out(K);
  fact = Coeff(1);
  for (int j = 1; j <= K; ++j) {
    fact *= Coeff(j);
    out[j - 1] = ex[j] * fact;
  }
  return out;
}

// "p/q" (or "p" when q = 1) in canonical form.
inline std::string rational_string(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_str();
}

}  // namespace modprime
