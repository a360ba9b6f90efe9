#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mlv/forms.hpp"
#include "mlv/variety.hpp"

namespace mlv {

inline constexpr const char* kRngId = "mt19937_64/rejection-mod/v1";

/// The single source of randomness. Draws in [0, n) reject the top partial
/// block of the 64-bit range and reduce the rest mod n.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n);
  Residue residue(PrimeModulus p) { return static_cast<Residue>(below(static_cast<std::uint64_t>(p.value()))); }
  FieldVec vec(PrimeModulus p, std::size_t dim);
  std::vector<Residue> residues(PrimeModulus p, std::size_t count);

 private:
  std::mt19937_64 engine_;
};

// Uniform coefficient tensor on the given support.
MultilinearForm random_form(Rng& rng, const Shape& shape, std::vector<std::size_t> support);

// `count` linearly independent vectors of F_p^n, uniformly among such lists
// by rejection. Requires count <= n.
std::vector<FieldVec> random_independent(Rng& rng, PrimeModulus p, std::size_t n, std::size_t count);

// A subspace of F_p^n of the given codimension as a one-factor variety,
// cut out by `codim` independent linear forms.
Variety random_subspace(Rng& rng, PrimeModulus p, std::size_t n, std::size_t codim);

// U_1 x ... x U_k with U_i of codimension codims[i]; density p^{-sum codims}.
Variety planted_product(Rng& rng, const Shape& shape, const std::vector<std::size_t>& codims);

// Splits `total` codimension across the factors at random, capped by each n_i.
std::vector<std::size_t> random_codim_split(Rng& rng, const Shape& shape, std::size_t total);

// Sum of r products beta(x_I) gamma(x_{[k] \ I}) with random nonempty proper
// I; full support. Arity at least 2.
MultilinearForm planted_low_prank(Rng& rng, const Shape& shape, std::size_t r);

// `count` random forms, each on a random nonempty support; full supports are
// drawn with probability one half.
Variety random_variety(Rng& rng, const Shape& shape, std::size_t count);

}  // namespace mlv
