#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlv/density.hpp"
#include "mlv/field.hpp"
#include "mlv/shape.hpp"

namespace mlv {

/// A multilinear form on G_S for a support S of the shape's factors.
///
/// Coefficients are a dense tensor with one index per support factor, stored
/// lexicographically with the first support factor outermost. The value at a
/// point is sum over indices of c[i_1..i_m] * x_{s_1}[i_1] * ... * x_{s_m}[i_m];
/// coordinates outside the support are ignored. The only form with empty
/// support is the canonical zero form.
class MultilinearForm {
 public:
  MultilinearForm(Shape shape, std::vector<std::size_t> support, std::vector<Residue> coeffs);

  static MultilinearForm zero(Shape shape);

  const Shape& shape() const { return shape_; }
  PrimeModulus modulus() const { return shape_.modulus(); }
  const std::vector<std::size_t>& support() const { return support_; }
  const std::vector<Residue>& coeffs() const { return coeffs_; }
  std::vector<std::size_t> support_dims() const;

  bool is_zero() const;
  bool depends_on(std::size_t factor) const;
  // The coefficient tensor as one vector, for linear-dependence tests.
  FieldVec flattened() const { return {modulus(), coeffs_}; }

  friend bool operator==(const MultilinearForm& a, const MultilinearForm& b) {
    return a.shape_ == b.shape_ && a.support_ == b.support_ && a.coeffs_ == b.coeffs_;
  }

 private:
  Shape shape_;
  std::vector<std::size_t> support_;
  std::vector<Residue> coeffs_;
};

/// A stack of forms sharing shape and support: a map G_S -> F_p^m.
class MultilinearMap {
 public:
  MultilinearMap(Shape shape, std::vector<std::size_t> support, std::vector<MultilinearForm> components);

  const Shape& shape() const { return shape_; }
  const std::vector<std::size_t>& support() const { return support_; }
  std::size_t codomain_dim() const { return components_.size(); }
  const std::vector<MultilinearForm>& components() const { return components_; }

 private:
  Shape shape_;
  std::vector<std::size_t> support_;
  std::vector<MultilinearForm> components_;
};

Residue eval_form(const MultilinearForm& f, const Point& x);
// Same, with the point given as its concatenated coordinates.
Residue eval_digits(const MultilinearForm& f, std::span<const Residue> digits);
FieldVec eval_map(const MultilinearMap& phi, const Point& x);

// Partial evaluation at x_I. `factors` must lie inside the support and may
// not cover all of it (use eval_form for that). The result keeps the shape
// and has support S \ I.
MultilinearForm slice_form(const MultilinearForm& f, std::span<const std::size_t> factors,
                           std::span<const FieldVec> values);

// Moves f into `target`, sending factor i of f's shape to factor map[i].
// The map must be increasing on the support.
MultilinearForm reindex(const MultilinearForm& f, const Shape& target, std::span<const std::size_t> map);

// Linear combination sum_j weights[j] * forms[j] of forms sharing a support.
MultilinearForm combine(std::span<const MultilinearForm> forms, std::span<const Residue> weights);

/// Exact bias E_x omega^{f(x)}, computed by currying the last support
/// factor: the inner average over that factor is 1 when the induced linear
/// form vanishes and 0 otherwise.
ExactDensity bias(const MultilinearForm& f);

struct AnalyticRank {
  ExactDensity bias;
  double value;  // log_p(1 / bias)
};

AnalyticRank arank(const MultilinearForm& f);

struct ZeroFiberReport {
  std::uint64_t zero_count;  // |{x : A(x) = 0}| over the uncurried factors
  mpz_class bias_count;      // bias(f) * |G| over the same factors
  bool holds;
};

// Curries the last support factor into a map A and compares its zero set
// with bias(f) times the size of the remaining product.
ZeroFiberReport zero_fiber_identity_check(const MultilinearForm& f);

// ceil(log_p 1/bias); every partition-rank decomposition has at least this
// many terms.
std::int64_t prank_lower_bound(const MultilinearForm& f);

// Partition rank of a bilinear form: the rank of its coefficient matrix.
std::size_t prank_exact_k2(const MultilinearForm& f);

struct PrankResult {
  std::int64_t lower;
  std::int64_t upper;
  bool exact() const { return lower == upper; }
};

// Smallest number of products beta(x_I) gamma(x_{S\I}) summing to f, found by
// breadth-first search over sums of product tensors. When the search space
// exceeds the enumeration budget, returns [prank_lower_bound, best flattening
// rank] instead.
PrankResult prank_exact_small(const MultilinearForm& f);

// The same search without the bias and flattening shortcuts: every level up
// to the flattening bound is explored.
PrankResult prank_search(const MultilinearForm& f);

// min over support factors of the rank of the factor-vs-rest flattening.
std::int64_t prank_flattening_upper_bound(const MultilinearForm& f);

}  // namespace mlv
