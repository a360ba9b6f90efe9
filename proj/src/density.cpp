#include "mlv/density.hpp"

#include <cmath>
#include <cstdlib>

#include "mlv/errors.hpp"

namespace mlv {

namespace {

mpz_class pow_ui(long base, std::int64_t e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

mpz_class pow_mpz(const mpz_class& base, std::int64_t e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

// Exact comparisons materialize integers of roughly this many bits at most.
constexpr long double kMaxExactBits = 64.0L * 1024 * 1024;

long double log2_mpz(const mpz_class& n) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log2(static_cast<long double>(mant)) + exp;
}

}  // namespace

ExactDensity::ExactDensity(PrimeModulus p, mpz_class numerator, std::int64_t log_p_denominator)
    : p_(p), num_(std::move(numerator)), exp_(log_p_denominator) {
  if (num_ < 0 || exp_ < 0) throw PreconditionError("density must be a non-negative p-adic fraction");
  normalize();
}

ExactDensity ExactDensity::fraction(PrimeModulus p, std::uint64_t count, std::size_t dim) {
  mpz_class n;
  mpz_set_ui(n.get_mpz_t(), static_cast<unsigned long>(count));
  return {p, n, static_cast<std::int64_t>(dim)};
}

ExactDensity ExactDensity::parse(PrimeModulus p, const std::string& text) {
  const auto slash = text.find('/');
  try {
    mpz_class num(text.substr(0, slash));
    mpz_class den = slash == std::string::npos ? mpz_class(1) : mpz_class(text.substr(slash + 1));
    std::int64_t e = 0;
    while (den > 1 && den % p.value() == 0) {
      den /= p.value();
      ++e;
    }
    if (den != 1) throw ParseError("denominator of '" + text + "' is not a power of p");
    return {p, num, e};
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed fraction '" + text + "'");
  }
}

void ExactDensity::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && num_ % p_.value() == 0) {
    num_ /= p_.value();
    --exp_;
  }
}

mpz_class ExactDensity::denominator() const { return pow_ui(p_.value(), exp_); }

double ExactDensity::to_double() const {
  mpq_class q(num_, denominator());
  return q.get_d();
}

std::string ExactDensity::to_string() const { return num_.get_str() + "/" + denominator().get_str(); }

ExactDensity operator*(const ExactDensity& a, const ExactDensity& b) {
  if (!(a.p_ == b.p_)) throw PreconditionError("modulus mismatch");
  return {a.p_, a.num_ * b.num_, a.exp_ + b.exp_};
}

ExactDensity operator+(const ExactDensity& a, const ExactDensity& b) {
  if (!(a.p_ == b.p_)) throw PreconditionError("modulus mismatch");
  const auto e = std::max(a.exp_, b.exp_);
  const auto p = a.p_.value();
  return {a.p_, a.num_ * pow_ui(p, e - a.exp_) + b.num_ * pow_ui(p, e - b.exp_), e};
}

std::strong_ordering operator<=>(const ExactDensity& a, const ExactDensity& b) {
  if (!(a.p_ == b.p_)) throw PreconditionError("modulus mismatch");
  const auto e = std::max(a.exp_, b.exp_);
  const auto p = a.p_.value();
  const int s = cmp(a.num_ * pow_ui(p, e - a.exp_), b.num_ * pow_ui(p, e - b.exp_));
  return s < 0 ? std::strong_ordering::less
               : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

long double log_p(const PowerMonomial& m, const ExactDensity& c) {
  const long double lp = std::log2(static_cast<long double>(c.modulus().value()));
  long double v = m.two_exp / lp + static_cast<long double>(m.p_exp);
  if (m.c_exp != 0) {
    if (c.is_zero()) throw PreconditionError("power of a zero density");
    v += static_cast<long double>(m.c_exp) *
         (log2_mpz(c.numerator()) / lp - static_cast<long double>(c.log_p_denominator()));
  }
  return v;
}

int compare(const mpz_class& n, std::int64_t p_shift, const PowerMonomial& m, const ExactDensity& c) {
  if (n < 0) throw PreconditionError("compare expects a non-negative integer");
  if (n == 0) return -1;
  if (m.c_exp != 0 && c.is_zero()) throw PreconditionError("power of a zero density");
  const long p = c.modulus().value();
  // m(c) = 2^a * p^(b - e*E) * num^e
  const std::int64_t rhs_p = m.p_exp - m.c_exp * c.log_p_denominator() - p_shift;
  const long double bits = std::abs(static_cast<long double>(rhs_p)) * std::log2((long double)p) +
                           std::abs(static_cast<long double>(m.two_exp)) +
                           std::abs(static_cast<long double>(m.c_exp)) * log2_mpz(c.numerator() + 1);
  if (bits > kMaxExactBits)
    throw BudgetExceeded("exact bound comparison needs more than 2^26-bit integers");

  mpz_class lhs = n;
  mpz_class rhs = 1;
  if (rhs_p >= 0) rhs *= pow_ui(p, rhs_p); else lhs *= pow_ui(p, -rhs_p);
  if (m.two_exp >= 0) rhs *= pow_ui(2, m.two_exp); else lhs *= pow_ui(2, -m.two_exp);
  if (m.c_exp >= 0) rhs *= pow_mpz(c.numerator(), m.c_exp);
  else lhs *= pow_mpz(c.numerator(), -m.c_exp);
  return cmp(lhs, rhs) < 0 ? -1 : cmp(lhs, rhs) > 0 ? 1 : 0;
}

std::int64_t floor_log_p(const PowerMonomial& m, const ExactDensity& c) {
  const long double v = log_p(m, c);
  auto t = static_cast<std::int64_t>(std::floor(v));
  const long double frac = v - std::floor(v);
  // Far from an integer the floating estimate is already decisive.
  if (frac > 1e-6L && frac < 1.0L - 1e-6L && std::abs(v) < 1e12L) return t;
  const mpz_class one = 1;
  while (compare(one, t + 1, m, c) <= 0) ++t;
  while (compare(one, t, m, c) > 0) --t;
  return t;
}

std::int64_t ceil_log_p_inverse(const ExactDensity& x) {
  if (x.is_zero()) throw PreconditionError("log of zero density");
  return -floor_log_p(PowerMonomial{0, 0, 1}, x);
}

}  // namespace mlv
