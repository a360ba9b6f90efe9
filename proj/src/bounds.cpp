#include <limits>
#include <string>

#include "mlv/construct.hpp"
#include "mlv/errors.hpp"

namespace mlv {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw BudgetExceeded("bound constant overflows 64 bits");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw BudgetExceeded("bound constant overflows 64 bits");
  return out;
}

std::int64_t pow2(std::size_t k) {
  if (k >= 62) throw BudgetExceeded("bound constant overflows 64 bits");
  return std::int64_t{1} << k;
}

void check_arity(std::size_t arity) {
  if (arity < 1) throw PreconditionError("arity must be at least 1");
}

// Slope and intercept for arity k+1, given K = K(k).
std::int64_t slope_from(std::int64_t k, std::int64_t big_k) {
  const auto k1 = k + 1;
  auto inner = checked_add(checked_mul(pow2(static_cast<std::size_t>(k)), checked_add(checked_mul(k, big_k), 1)),
                           checked_mul(checked_mul(k, k1), big_k));
  return checked_add(checked_mul(k1, inner), checked_mul(checked_mul(k1, k1), big_k));
}

std::int64_t intercept_from(std::int64_t k, std::int64_t big_k) {
  const auto k1 = k + 1;
  auto head = checked_add(checked_add(2 * k, 1), checked_mul(2 * k, big_k));
  auto inner = checked_add(checked_mul(pow2(static_cast<std::size_t>(k)), head),
                           checked_mul(checked_mul(2 * k, k1), big_k));
  return checked_add(checked_add(checked_mul(k1, inner), 2), checked_mul(checked_mul(2 * k1, k1), big_k));
}

}  // namespace

std::int64_t BoundTracker::K(std::size_t arity) {
  check_arity(arity);
  std::int64_t big_k = 1;
  for (std::size_t k = 1; k < arity; ++k) {
    const auto k64 = static_cast<std::int64_t>(k);
    big_k = std::max(slope_from(k64, big_k), intercept_from(k64, big_k));
  }
  return big_k;
}

std::int64_t BoundTracker::slope(std::size_t arity) {
  check_arity(arity);
  if (arity == 1) return 1;
  return slope_from(static_cast<std::int64_t>(arity - 1), K(arity - 1));
}

std::int64_t BoundTracker::intercept(std::size_t arity) {
  check_arity(arity);
  if (arity == 1) return 1;
  return intercept_from(static_cast<std::int64_t>(arity - 1), K(arity - 1));
}

PowerMonomial BoundTracker::c_prime(std::size_t k) {
  if (k < 1) throw PreconditionError("c' is defined for arity at least 2");
  const auto k64 = static_cast<std::int64_t>(k);
  const auto big_k = K(k);
  return {-(2 * k64 + 1), -checked_mul(2 * k64, big_k), checked_add(checked_mul(k64, big_k), 1)};
}

std::int64_t BoundTracker::r_bound(std::size_t k, const ExactDensity& c) {
  if (k < 1) throw PreconditionError("r is defined for arity at least 2");
  const auto big_k = K(k);
  // floor(K (log_p c^{-1} + 2)) = floor(log_p(p^{2K} c^{-K}))
  return floor_log_p(PowerMonomial{0, checked_mul(2, big_k), -big_k}, c);
}

PowerMonomial BoundTracker::c_double_prime(std::size_t k, std::int64_t r) {
  const auto k64 = static_cast<std::int64_t>(k);
  const auto base = c_prime(k).pow(pow2(k));
  return base * PowerMonomial{0, -checked_mul(checked_mul(k64, k64 + 1), r), 0};
}

PowerMonomial BoundTracker::epsilon(std::size_t k, std::int64_t r) {
  return c_double_prime(k, r).pow(static_cast<std::int64_t>(k) + 1) * PowerMonomial{-1, 0, 0};
}

std::int64_t codim_budget(std::size_t arity, const ExactDensity& c) {
  check_arity(arity);
  if (c.is_zero()) throw PreconditionError("budget of a zero density");
  if (arity == 1) return ceil_log_p_inverse(c);
  const auto k = arity - 1;
  const auto k1 = static_cast<std::int64_t>(arity);
  const auto r = BoundTracker::r_bound(k, c);
  const auto s = -floor_log_p(BoundTracker::epsilon(k, r), c);
  return checked_add(s, checked_mul(checked_mul(k1, k1), r));
}

}  // namespace mlv
