#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mlv/field.hpp"

namespace mlv {

// One vector per factor G_1, ..., G_k.
using Point = std::vector<FieldVec>;

/// The product G_1 x ... x G_k with G_i = F_p^{n_i}.
///
/// Points of the product are indexed lexicographically over the
/// concatenated coordinates: factor 1 outermost, and inside each factor the
/// last coordinate varies fastest. The index of a point therefore splits as
/// sum_i value_i * stride_i with value_i the encoded vector of factor i.
class Shape {
 public:
  Shape(PrimeModulus p, std::vector<std::size_t> dims);

  PrimeModulus modulus() const { return p_; }
  std::size_t arity() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t factor) const { return dims_.at(factor); }
  std::size_t total_dim() const;
  // Offset of factor i's coordinates in the concatenated coordinate list.
  std::size_t offset(std::size_t factor) const;

  // p^{n_i}; p^{sum n_i}. Both check the enumeration budget.
  std::uint64_t factor_size(std::size_t factor) const;
  std::uint64_t point_count() const;
  std::uint64_t stride(std::size_t factor) const;

  // Unchecked accessors for inner loops; only meaningful once point_count()
  // has succeeded.
  std::uint64_t factor_value(std::uint64_t index, std::size_t factor) const {
    return (index / strides_[factor]) % sizes_[factor];
  }
  std::uint64_t with_factor(std::uint64_t index, std::size_t factor, std::uint64_t value) const {
    const auto s = strides_[factor];
    return index - factor_value(index, factor) * s + value * s;
  }

  std::uint64_t index_of(const Point& x) const;
  Point point_at(std::uint64_t index) const;
  std::vector<Residue> digits_at(std::uint64_t index) const;
  void check_point(const Point& x) const;

  // The shape left after removing the listed factors (kept in order).
  Shape without(std::span<const std::size_t> factors) const;

  friend bool operator==(const Shape& a, const Shape& b) { return a.p_ == b.p_ && a.dims_ == b.dims_; }

 private:
  PrimeModulus p_;
  std::vector<std::size_t> dims_;
  // Saturating p-powers; saturated values never pass the budget check.
  std::vector<std::uint64_t> sizes_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t total_;
};

// Visits every point of the product in index order with its concatenated
// coordinates.
void for_each_point(const Shape& shape,
                    const std::function<void(std::uint64_t, std::span<const Residue>)>& visit);

// Complement of `factors` in [0, k).
std::vector<std::size_t> complement(std::size_t k, std::span<const std::size_t> factors);

}  // namespace mlv
