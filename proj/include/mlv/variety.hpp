#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mlv/density.hpp"
#include "mlv/forms.hpp"
#include "mlv/shape.hpp"

namespace mlv {

/// Common zero set of a list of multilinear forms, each on its own support.
///
/// Construction canonicalizes the list: zero forms are dropped and, within
/// each support, forms linearly dependent on earlier ones are removed. The
/// representation codimension is the length of what remains. The canonical
/// empty variety carries no forms and a constant-obstruction marker.
class Variety {
 public:
  explicit Variety(Shape shape);
  Variety(Shape shape, std::vector<MultilinearForm> forms);
  static Variety empty(Shape shape);

  const Shape& shape() const { return shape_; }
  const std::vector<MultilinearForm>& forms() const { return forms_; }
  bool is_empty_marker() const { return empty_; }
  std::size_t codim() const { return forms_.size(); }

  friend bool operator==(const Variety& a, const Variety& b) {
    return a.shape_ == b.shape_ && a.empty_ == b.empty_ && a.forms_ == b.forms_;
  }

 private:
  Shape shape_;
  std::vector<MultilinearForm> forms_;
  bool empty_ = false;
};

/// Explicit subset of the product group, as a membership bitmap.
class PointSet {
 public:
  explicit PointSet(Shape shape);

  const Shape& shape() const { return shape_; }
  std::uint64_t universe() const { return bits_.size(); }
  bool contains(std::uint64_t index) const { return bits_[index] != 0; }
  void insert(std::uint64_t index) { bits_.at(index) = 1; }
  void erase(std::uint64_t index) { bits_.at(index) = 0; }
  std::uint64_t count() const;
  std::vector<std::uint64_t> indices() const;
  bool subset_of(const PointSet& other) const;

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.shape_ == b.shape_ && a.bits_ == b.bits_;
  }

 private:
  Shape shape_;
  std::vector<std::uint8_t> bits_;
};

bool membership(const Variety& v, const Point& x);
PointSet members(const Variety& v);
ExactDensity density(const Variety& v);

// The fiber over x_I, as a variety on the remaining factors (in order).
Variety slice_variety(const Variety& v, std::span<const std::size_t> factors, std::span<const FieldVec> values);

Variety intersect(const Variety& a, const Variety& b);

// Re-expresses v on `target`, factor i going to map[i] (increasing).
Variety lift(const Variety& v, const Shape& target, std::span<const std::size_t> map);

// E_{y in G_i} 1_S(.., y + x_i, ..) 1_S(.., y, ..), exactly.
ExactDensity directional_conv(const PointSet& s, std::size_t direction, const Point& x);

/// Witness that conv_k ... conv_1 1_S is positive at `base`.
///
/// Expanding the iterated convolution produces a binary tree: direction k
/// picks one offset, then each of its two branches picks its own offset in
/// direction k-1, and so on. offsets[i] holds the 2^(k-1-i) offsets chosen in
/// direction i, indexed by the pattern of the directions above i (bit j-i-1
/// set when direction j took the shifted branch). The corner for a subset T of
/// directions has coordinate i equal to offset + x_i when i is in T and
/// offset alone otherwise. When every direction uses a single offset the
/// witness is an honest parallelepiped.
struct Parallelepiped {
  std::uint64_t base = 0;
  std::vector<std::vector<std::uint64_t>> offsets;
  std::vector<std::uint64_t> corners;  // indexed by the bitmask of T

  bool is_flat() const;
};

// Recomputes the corners from base and offsets and checks that they match
// the stored corners and all lie in `allowed`.
bool check_witness(const Shape& shape, const Parallelepiped& w, const PointSet& allowed);

/// Positivity tables of conv_j ... conv_1 1_S for j = 0..k, built once per
/// set and queried per point.
class ConvolutionTables {
 public:
  explicit ConvolutionTables(const PointSet& s);

  bool positive(std::uint64_t x) const { return levels_.back()[x] != 0; }
  // Lexicographically first witness, direction k resolved first.
  std::optional<Parallelepiped> witness(std::uint64_t x) const;

 private:
  void extract(std::size_t level, std::uint64_t z, std::uint64_t x, std::uint32_t mask,
               Parallelepiped& out) const;

  Shape shape_;
  std::vector<std::vector<std::uint8_t>> levels_;
};

std::optional<Parallelepiped> iterated_conv_witness(const Variety& w, const PointSet& bad, const Point& x);

struct ConvFillReport {
  bool success = false;
  std::uint64_t points_checked = 0;
  std::uint64_t bad_size = 0;
  std::size_t codim = 0;
  std::uint64_t flat_witnesses = 0;
  std::optional<std::uint64_t> first_failure;
  std::vector<Parallelepiped> witnesses;  // one per point of W, in index order
};

// Checks the size hypothesis |B| <= 2^{-2k} p^{-kr} |G| with r the
// representation codimension of W (PreconditionError when it fails), then
// looks for a witness inside W \ B at every point of W.
ConvFillReport conv_fill_check(const Variety& w, const PointSet& bad);

// True when |bad| <= 2^{-2k} p^{-k codim} |G|.
bool conv_fill_hypothesis(const Shape& shape, std::uint64_t bad_size, std::size_t codim);

}  // namespace mlv
