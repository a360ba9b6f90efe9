#pragma once

// Brute-force reference implementations used only by the tests. They share
// no evaluation code with the library: forms are evaluated straight from
// their coefficient tensors and sets are walked point by point.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "mlv/forms.hpp"
#include "mlv/variety.hpp"

namespace oracle {

using mlv::MultilinearForm;
using mlv::Residue;

// Digits of a point index, concatenated over the factors.
inline std::vector<int> digits(const mlv::Shape& s, std::uint64_t index) {
  const int p = s.modulus().value();
  std::vector<int> out(s.total_dim());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<int>(index % p);
    index /= p;
  }
  return out;
}

inline std::uint64_t group_size(const mlv::Shape& s) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < s.total_dim(); ++i) n *= static_cast<std::uint64_t>(s.modulus().value());
  return n;
}

// Sum over every coefficient of c * prod x_{s_j}[i_j].
inline int eval(const MultilinearForm& f, const std::vector<int>& x) {
  const auto& s = f.shape();
  const int p = s.modulus().value();
  const auto& sup = f.support();
  if (sup.empty()) return 0;
  std::vector<std::size_t> idx(sup.size(), 0);
  long total = 0;
  for (std::size_t flat = 0; flat < f.coeffs().size(); ++flat) {
    long term = f.coeffs()[flat];
    for (std::size_t j = 0; j < sup.size() && term; ++j) term *= x[s.offset(sup[j]) + idx[j]];
    total += term;
    for (std::size_t j = sup.size(); j-- > 0;) {
      if (++idx[j] < s.dim(sup[j])) break;
      idx[j] = 0;
    }
  }
  return static_cast<int>(total % p);
}

inline bool is_member(const mlv::Variety& v, const std::vector<int>& x) {
  if (v.is_empty_marker()) return false;
  for (const auto& f : v.forms())
    if (eval(f, x) != 0) return false;
  return true;
}

inline std::vector<bool> member_bits(const mlv::Variety& v) {
  const auto n = group_size(v.shape());
  std::vector<bool> out(n);
  for (std::uint64_t z = 0; z < n; ++z) out[z] = is_member(v, digits(v.shape(), z));
  return out;
}

inline std::uint64_t point_count(const mlv::Variety& v) {
  std::uint64_t c = 0;
  for (bool b : member_bits(v)) c += b;
  return c;
}

// E_x omega^{f(x)} summed over the whole product with complex roots of unity.
inline double bias_complex(const MultilinearForm& f) {
  const auto& s = f.shape();
  const int p = s.modulus().value();
  const auto n = group_size(s);
  std::complex<long double> sum = 0;
  for (std::uint64_t z = 0; z < n; ++z) {
    const long double angle = 2 * std::numbers::pi_v<long double> * eval(f, digits(s, z)) / p;
    sum += std::complex<long double>(std::cos(angle), std::sin(angle));
  }
  return static_cast<double>(sum.real() / static_cast<long double>(n));
}

// Unnormalized conv_k ... conv_1 1_S at every point, as exact integers.
inline std::vector<mpz_class> iterated_conv(const mlv::Shape& s, const std::vector<bool>& set) {
  const int p = s.modulus().value();
  const auto n = group_size(s);
  std::vector<mpz_class> level(n);
  for (std::uint64_t z = 0; z < n; ++z) level[z] = set[z] ? 1 : 0;
  for (std::size_t j = 0; j < s.arity(); ++j) {
    std::vector<mpz_class> next(n);
    const auto off = s.offset(j);
    const auto dim = s.dim(j);
    for (std::uint64_t z = 0; z < n; ++z) {
      auto d = digits(s, z);
      const std::vector<int> xj(d.begin() + off, d.begin() + off + dim);
      std::uint64_t ys = 1;
      for (std::size_t t = 0; t < dim; ++t) ys *= p;
      for (std::uint64_t y = 0; y < ys; ++y) {
        std::vector<int> yd(dim);
        auto yy = y;
        for (std::size_t t = dim; t-- > 0;) {
          yd[t] = static_cast<int>(yy % p);
          yy /= p;
        }
        auto plain = d, shifted = d;
        for (std::size_t t = 0; t < dim; ++t) {
          plain[off + t] = yd[t];
          shifted[off + t] = (yd[t] + xj[t]) % p;
        }
        auto index = [&](const std::vector<int>& v) {
          std::uint64_t i = 0;
          for (int c : v) i = i * p + c;
          return i;
        };
        next[z] += level[index(plain)] * level[index(shifted)];
      }
    }
    level = std::move(next);
  }
  return level;
}

// Number of x in F_p^rows-space with x^T M = 0, M given row-major.
inline std::uint64_t left_kernel_size(int p, std::size_t rows, std::size_t cols, const std::vector<Residue>& m) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < rows; ++i) total *= p;
  std::uint64_t hits = 0;
  for (std::uint64_t z = 0; z < total; ++z) {
    std::vector<int> x(rows);
    auto zz = z;
    for (std::size_t i = rows; i-- > 0;) {
      x[i] = static_cast<int>(zz % p);
      zz /= p;
    }
    bool zero = true;
    for (std::size_t c = 0; c < cols && zero; ++c) {
      long acc = 0;
      for (std::size_t r = 0; r < rows; ++r) acc += x[r] * m[r * cols + c];
      zero = acc % p == 0;
    }
    hits += zero;
  }
  return hits;
}

}  // namespace oracle
