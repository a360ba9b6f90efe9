#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

#include "mlv/field.hpp"

namespace mlv {

/// numerator / p^log_p_denominator, kept normalized (p does not divide the
/// numerator unless the exponent is already zero).
class ExactDensity {
 public:
  ExactDensity(PrimeModulus p, mpz_class numerator, std::int64_t log_p_denominator);

  static ExactDensity one(PrimeModulus p) { return {p, 1, 0}; }
  static ExactDensity zero(PrimeModulus p) { return {p, 0, 0}; }
  // count / p^dim
  static ExactDensity fraction(PrimeModulus p, std::uint64_t count, std::size_t dim);
  static ExactDensity parse(PrimeModulus p, const std::string& text);

  PrimeModulus modulus() const { return p_; }
  const mpz_class& numerator() const { return num_; }
  std::int64_t log_p_denominator() const { return exp_; }
  mpz_class denominator() const;
  bool is_zero() const { return num_ == 0; }

  double to_double() const;
  // "num/den" with the denominator written out in full.
  std::string to_string() const;

  friend ExactDensity operator*(const ExactDensity& a, const ExactDensity& b);
  friend ExactDensity operator+(const ExactDensity& a, const ExactDensity& b);
  friend std::strong_ordering operator<=>(const ExactDensity& a, const ExactDensity& b);
  friend bool operator==(const ExactDensity& a, const ExactDensity& b) {
    return a.p_ == b.p_ && a.num_ == b.num_ && a.exp_ == b.exp_;
  }

 private:
  void normalize();

  PrimeModulus p_;
  mpz_class num_;
  std::int64_t exp_;
};

/// 2^two_exp * p^p_exp * c^c_exp for a base density c. The constants of the
/// subvariety construction all have this shape, which keeps them exact and
/// compact even when their decimal expansions run to thousands of digits.
struct PowerMonomial {
  std::int64_t two_exp = 0;
  std::int64_t p_exp = 0;
  std::int64_t c_exp = 0;

  friend PowerMonomial operator*(PowerMonomial a, PowerMonomial b) {
    return {a.two_exp + b.two_exp, a.p_exp + b.p_exp, a.c_exp + b.c_exp};
  }
  PowerMonomial pow(std::int64_t e) const { return {two_exp * e, p_exp * e, c_exp * e}; }
  friend bool operator==(const PowerMonomial&, const PowerMonomial&) = default;
};

long double log_p(const PowerMonomial& m, const ExactDensity& c);

// Sign of n * p^p_shift - m(c).
int compare(const mpz_class& n, std::int64_t p_shift, const PowerMonomial& m, const ExactDensity& c);

// Largest integer t with p^t <= m(c).
std::int64_t floor_log_p(const PowerMonomial& m, const ExactDensity& c);

// ceil(log_p x^{-1}) for 0 < x <= 1 (or any positive x).
std::int64_t ceil_log_p_inverse(const ExactDensity& x);

}  // namespace mlv
