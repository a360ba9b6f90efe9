#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <iterator>
#include <span>
#include <vector>

namespace mlv {

using Residue = std::uint8_t;

/// The prime p of the ground field F_p. Restricted to 2 <= p <= 17.
class PrimeModulus {
 public:
  explicit PrimeModulus(int p);

  int value() const { return p_; }

  Residue reduce(std::int64_t x) const {
    auto r = x % p_;
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const { return static_cast<Residue>((a + b) % p_); }
  Residue sub(Residue a, Residue b) const { return static_cast<Residue>((a + p_ - b) % p_); }
  Residue mul(Residue a, Residue b) const { return static_cast<Residue>((a * b) % p_); }
  Residue neg(Residue a) const { return static_cast<Residue>((p_ - a) % p_); }
  Residue inv(Residue a) const;

  friend bool operator==(PrimeModulus a, PrimeModulus b) { return a.p_ == b.p_; }

 private:
  int p_;
};

// Desk-scale guard. Any enumeration over a product group larger than this
// many points is refused with BudgetExceeded. Default 2^24.
std::uint64_t enumeration_budget();
void set_enumeration_budget(std::uint64_t points);

// p^dim, throwing BudgetExceeded when it exceeds the enumeration budget.
std::uint64_t checked_power(PrimeModulus p, std::size_t dim);

class FieldVec {
 public:
  FieldVec(PrimeModulus p, std::size_t dim);
  FieldVec(PrimeModulus p, std::vector<Residue> coords);
  FieldVec(PrimeModulus p, std::initializer_list<int> coords);

  PrimeModulus modulus() const { return p_; }
  std::size_t dim() const { return coords_.size(); }
  Residue operator[](std::size_t i) const { return coords_[i]; }
  void set(std::size_t i, std::int64_t value) { coords_[i] = p_.reduce(value); }
  std::span<const Residue> coords() const { return coords_; }
  bool is_zero() const;

  friend bool operator==(const FieldVec& a, const FieldVec& b) {
    return a.p_ == b.p_ && a.coords_ == b.coords_;
  }

 private:
  PrimeModulus p_;
  std::vector<Residue> coords_;
};

std::ostream& operator<<(std::ostream& os, const FieldVec& v);

FieldVec vec_add(const FieldVec& a, const FieldVec& b);
FieldVec vec_sub(const FieldVec& a, const FieldVec& b);
FieldVec vec_scale(Residue lambda, const FieldVec& a);
Residue dot(const FieldVec& a, const FieldVec& b);

// Lexicographic rank of v among all vectors of its dimension (last
// coordinate varies fastest) and its inverse.
std::uint64_t encode(const FieldVec& v);
FieldVec decode(PrimeModulus p, std::size_t dim, std::uint64_t index);

// Coordinate-wise sum of two lexicographically encoded vectors.
std::uint64_t add_encoded(PrimeModulus p, std::size_t dim, std::uint64_t a, std::uint64_t b);

/// All p^dim vectors of F_p^dim in lexicographic order, last coordinate
/// fastest. Construction checks the enumeration budget.
class VectorEnumeration {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = FieldVec;
    using difference_type = std::ptrdiff_t;
    using pointer = const FieldVec*;
    using reference = const FieldVec&;

    iterator(PrimeModulus p, std::size_t dim, std::uint64_t index)
        : current_(p, dim), index_(index) {}

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    FieldVec current_;
    std::uint64_t index_;
  };

  VectorEnumeration(PrimeModulus p, std::size_t dim);

  std::uint64_t size() const { return count_; }
  iterator begin() const { return {p_, dim_, 0}; }
  iterator end() const { return {p_, dim_, count_}; }

 private:
  PrimeModulus p_;
  std::size_t dim_;
  std::uint64_t count_;
};

inline VectorEnumeration enumerate_vectors(PrimeModulus p, std::size_t dim) { return {p, dim}; }

/// A subspace of F_p^n held as a reduced row-echelon basis.
class Subspace {
 public:
  Subspace(PrimeModulus p, std::size_t ambient_dim);

  PrimeModulus modulus() const { return p_; }
  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<FieldVec>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  // Residual of v after elimination against the basis; zero iff v is in the span.
  FieldVec reduce(const FieldVec& v) const;
  bool contains(const FieldVec& v) const { return reduce(v).is_zero(); }

  // Adds v to the span; returns false when v was already inside.
  bool insert(const FieldVec& v);

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.p_ == b.p_ && a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
  }

 private:
  void check(const FieldVec& v) const;

  PrimeModulus p_;
  std::size_t ambient_dim_;
  std::vector<FieldVec> basis_;
  std::vector<std::size_t> pivots_;
};

Subspace echelonize(PrimeModulus p, std::size_t dim, std::span<const FieldVec> vectors);
inline bool subspace_contains(const Subspace& s, const FieldVec& v) { return s.contains(v); }

// Rank of a rows x cols matrix given row-major.
std::size_t matrix_rank(PrimeModulus p, std::size_t rows, std::size_t cols,
                        std::span<const Residue> entries);

}  // namespace mlv
