#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "mlv/construct.hpp"
#include "mlv/errors.hpp"
#include "mlv/generate.hpp"

namespace mlv {

namespace {

using Survivors = std::vector<std::pair<FieldVec, std::uint64_t>>;

std::uint64_t left_after(const FieldVec& psi, const Survivors& survivors) {
  std::uint64_t left = 0;
  for (const auto& [v, count] : survivors)
    if (dot(psi, v) == 0) left += count;
  return left;
}

// Lexicographically first functional leaving the fewest survivors.
std::pair<FieldVec, std::uint64_t> greedy_step(PrimeModulus p, std::size_t m, const Survivors& survivors) {
  std::optional<FieldVec> best;
  std::uint64_t best_alive = 0;
  for (const auto& psi : enumerate_vectors(p, m)) {
    if (psi.is_zero()) continue;
    const auto left = left_after(psi, survivors);
    if (!best || left < best_alive) {
      best = psi;
      best_alive = left;
    }
  }
  return {*best, best_alive};
}

ApproxResult approx_impl(const MultilinearMap& phi, std::size_t s, Rng* rng) {
  const auto& shape = phi.shape();
  const auto p = shape.modulus();
  const auto m = phi.codomain_dim();
  const auto& comps = phi.components();
  const auto total = shape.point_count();

  // Histogram of the nonzero values of Phi, keyed by their encoding.
  std::map<std::uint64_t, std::uint64_t> histogram;
  if (m > 0) {
    checked_power(p, m);
    std::vector<Residue> value(m);
    for_each_point(shape, [&](std::uint64_t, std::span<const Residue> digits) {
      bool nonzero = false;
      for (std::size_t j = 0; j < m; ++j) {
        value[j] = eval_digits(comps[j], digits);
        nonzero = nonzero || value[j] != 0;
      }
      if (nonzero) ++histogram[encode(FieldVec(p, value))];
    });
  }

  Survivors survivors;
  std::uint64_t alive = 0;
  for (const auto& [code, count] : histogram) {
    survivors.emplace_back(decode(p, m, code), count);
    alive += count;
  }

  ApproxResult result{.phi = MultilinearMap(shape, phi.support(), {}), .requested_steps = s};
  result.survivors.push_back(alive);
  std::vector<MultilinearForm> chosen;
  for (std::size_t step = 0; step < s && alive > 0; ++step) {
    std::optional<FieldVec> best;
    std::uint64_t best_alive = 0;
    if (rng) {
      // Some nonzero functional cuts by a factor p; sample until one does.
      const auto tries = 64 * checked_power(p, m);
      for (std::uint64_t t = 0; t < tries && !best; ++t) {
        auto psi = rng->vec(p, m);
        if (psi.is_zero()) continue;
        const auto left = left_after(psi, survivors);
        if (left * static_cast<std::uint64_t>(p.value()) <= alive) {
          best = std::move(psi);
          best_alive = left;
        }
      }
    }
    if (!best) std::tie(best, best_alive) = greedy_step(p, m, survivors);
    if (best_alive * static_cast<std::uint64_t>(p.value()) > alive)
      throw VerificationFailure("greedy step kept " + std::to_string(best_alive) + " of " +
                                std::to_string(alive) + " survivors, more than a 1/p fraction");
    std::erase_if(survivors, [&](const auto& entry) { return dot(*best, entry.first) != 0; });
    alive = best_alive;
    result.survivors.push_back(alive);
    chosen.push_back(combine(comps, best->coords()));
    result.functionals.push_back(*best);
  }
  result.phi = MultilinearMap(shape, phi.support(), chosen);

  // Re-check {Phi = 0} inside {phi = 0} and count the difference.
  std::uint64_t errors = 0;
  bool contained = true;
  for_each_point(shape, [&](std::uint64_t, std::span<const Residue> digits) {
    bool big_zero = true;
    for (const auto& f : comps)
      if (eval_digits(f, digits) != 0) {
        big_zero = false;
        break;
      }
    bool small_zero = true;
    for (const auto& f : chosen)
      if (eval_digits(f, digits) != 0) {
        small_zero = false;
        break;
      }
    if (big_zero && !small_zero) contained = false;
    if (small_zero && !big_zero) ++errors;
  });
  if (!contained) throw VerificationFailure("approximation does not contain the zero set of Phi");
  if (errors != alive) throw VerificationFailure("approximation error count disagrees with the greedy tally");
  mpz_class scaled = errors;
  mpz_class bound = total;
  mpz_class ps;
  mpz_ui_pow_ui(ps.get_mpz_t(), static_cast<unsigned long>(p.value()), static_cast<unsigned long>(result.functionals.size()));
  if (alive > 0 && scaled * ps > bound)
    throw VerificationFailure("approximation error exceeds p^{-s} |G|");
  result.error_count = errors;
  result.containment_checked = true;
  return result;
}

}  // namespace

ApproxResult external_approx(const MultilinearMap& phi, std::size_t s) { return approx_impl(phi, s, nullptr); }

ApproxResult external_approx_sampled(const MultilinearMap& phi, std::size_t s, std::uint64_t seed) {
  Rng rng(seed);
  return approx_impl(phi, s, &rng);
}

}  // namespace mlv
