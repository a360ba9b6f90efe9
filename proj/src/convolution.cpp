#include <gmpxx.h>

#include <string>

#include "mlv/errors.hpp"
#include "mlv/variety.hpp"

namespace mlv {

ExactDensity directional_conv(const PointSet& s, std::size_t direction, const Point& x) {
  const auto& shape = s.shape();
  if (direction >= shape.arity()) throw PreconditionError("direction outside the shape");
  const auto index = shape.index_of(x);
  const auto n = shape.dim(direction);
  const auto size = shape.factor_size(direction);
  const auto xi = shape.factor_value(index, direction);
  std::uint64_t hits = 0;
  for (std::uint64_t y = 0; y < size; ++y) {
    const auto shifted = shape.with_factor(index, direction, add_encoded(shape.modulus(), n, y, xi));
    if (s.contains(shifted) && s.contains(shape.with_factor(index, direction, y))) ++hits;
  }
  return ExactDensity::fraction(shape.modulus(), hits, n);
}

bool Parallelepiped::is_flat() const {
  for (const auto& level : offsets)
    for (auto o : level)
      if (o != level.front()) return false;
  return true;
}

bool check_witness(const Shape& shape, const Parallelepiped& w, const PointSet& allowed) {
  const auto k = shape.arity();
  if (w.offsets.size() != k || w.corners.size() != (std::size_t{1} << k)) return false;
  for (std::size_t i = 0; i < k; ++i)
    if (w.offsets[i].size() != (std::size_t{1} << (k - 1 - i))) return false;
  for (std::uint32_t t = 0; t < (1u << k); ++t) {
    auto corner = w.base;
    for (std::size_t i = 0; i < k; ++i) {
      auto value = w.offsets[i][t >> (i + 1)];
      if ((t >> i) & 1u)
        value = add_encoded(shape.modulus(), shape.dim(i), value, shape.factor_value(w.base, i));
      corner = shape.with_factor(corner, i, value);
    }
    if (corner != w.corners[t] || !allowed.contains(corner)) return false;
  }
  return true;
}

ConvolutionTables::ConvolutionTables(const PointSet& s) : shape_(s.shape()) {
  const auto count = shape_.point_count();
  const auto k = shape_.arity();
  levels_.assign(k + 1, std::vector<std::uint8_t>(count, 0));
  for (std::uint64_t z = 0; z < count; ++z) levels_[0][z] = s.contains(z) ? 1 : 0;
  // levels_[j+1] is positivity of conv_j applied to levels_[j].
  for (std::size_t j = 0; j < k; ++j) {
    const auto& below = levels_[j];
    auto& above = levels_[j + 1];
    const auto size = shape_.factor_size(j);
    const auto n = shape_.dim(j);
    for (std::uint64_t z = 0; z < count; ++z) {
      const auto zj = shape_.factor_value(z, j);
      for (std::uint64_t y = 0; y < size; ++y) {
        if (below[shape_.with_factor(z, j, y)] &&
            below[shape_.with_factor(z, j, add_encoded(shape_.modulus(), n, y, zj))]) {
          above[z] = 1;
          break;
        }
      }
    }
  }
}

void ConvolutionTables::extract(std::size_t level, std::uint64_t z, std::uint64_t x, std::uint32_t mask,
                                Parallelepiped& out) const {
  if (level == 0) {
    out.corners[mask] = z;
    return;
  }
  const auto j = level - 1;
  const auto& below = levels_[j];
  const auto size = shape_.factor_size(j);
  const auto n = shape_.dim(j);
  const auto xj = shape_.factor_value(x, j);
  for (std::uint64_t y = 0; y < size; ++y) {
    const auto plain = shape_.with_factor(z, j, y);
    const auto shifted = shape_.with_factor(z, j, add_encoded(shape_.modulus(), n, y, xj));
    if (below[plain] && below[shifted]) {
      out.offsets[j][mask >> (j + 1)] = y;
      extract(j, shifted, x, mask | (1u << j), out);
      extract(j, plain, x, mask, out);
      return;
    }
  }
  throw VerificationFailure("convolution table claims positivity without a witness");
}

std::optional<Parallelepiped> ConvolutionTables::witness(std::uint64_t x) const {
  if (!positive(x)) return std::nullopt;
  const auto k = shape_.arity();
  Parallelepiped w;
  w.base = x;
  w.corners.assign(std::size_t{1} << k, 0);
  for (std::size_t i = 0; i < k; ++i) w.offsets.emplace_back(std::size_t{1} << (k - 1 - i), 0);
  extract(k, x, x, 0, w);
  return w;
}

namespace {

PointSet complement_in(const PointSet& w, const PointSet& bad) {
  PointSet s = w;
  for (auto b : bad.indices()) s.erase(b);
  return s;
}

void check_bad_inside(const PointSet& w, const PointSet& bad) {
  if (!(w.shape() == bad.shape())) throw PreconditionError("bad set and variety live in different shapes");
  if (!bad.subset_of(w)) throw PreconditionError("bad set is not contained in the variety");
}

}  // namespace

std::optional<Parallelepiped> iterated_conv_witness(const Variety& w, const PointSet& bad, const Point& x) {
  const auto inside = members(w);
  check_bad_inside(inside, bad);
  const ConvolutionTables tables(complement_in(inside, bad));
  return tables.witness(w.shape().index_of(x));
}

bool conv_fill_hypothesis(const Shape& shape, std::uint64_t bad_size, std::size_t codim) {
  const auto k = shape.arity();
  const auto p = static_cast<unsigned long>(shape.modulus().value());
  mpz_class lhs, scale, rhs;
  mpz_set_ui(lhs.get_mpz_t(), static_cast<unsigned long>(bad_size));
  mpz_ui_pow_ui(scale.get_mpz_t(), p, static_cast<unsigned long>(k * codim));
  lhs *= scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 4, static_cast<unsigned long>(k));
  lhs *= scale;
  mpz_ui_pow_ui(rhs.get_mpz_t(), p, static_cast<unsigned long>(shape.total_dim()));
  return lhs <= rhs;
}

ConvFillReport conv_fill_check(const Variety& w, const PointSet& bad) {
  const auto inside = members(w);
  check_bad_inside(inside, bad);
  ConvFillReport report;
  report.bad_size = bad.count();
  report.codim = w.codim();
  if (!conv_fill_hypothesis(w.shape(), report.bad_size, report.codim))
    throw PreconditionError("bad set of size " + std::to_string(report.bad_size) +
                            " violates |B| <= 2^{-2k} p^{-kr} |G| for k = " +
                            std::to_string(w.shape().arity()) + ", r = " + std::to_string(report.codim) +
                            ", |G| = " + std::to_string(w.shape().point_count()));
  const auto allowed = complement_in(inside, bad);
  const ConvolutionTables tables(allowed);
  report.success = true;
  for (auto x : inside.indices()) {
    ++report.points_checked;
    auto witness = tables.witness(x);
    if (!witness || !check_witness(w.shape(), *witness, allowed)) {
      report.success = false;
      if (!report.first_failure) report.first_failure = x;
      continue;
    }
    if (witness->is_flat()) ++report.flat_witnesses;
    report.witnesses.push_back(std::move(*witness));
  }
  return report;
}

}  // namespace mlv
