#include "mlv/shape.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mlv/errors.hpp"

namespace mlv {

namespace {

constexpr std::uint64_t kSaturated = ~std::uint64_t{0};

std::uint64_t saturating_power(int p, std::size_t e) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (n > kSaturated / static_cast<std::uint64_t>(p)) return kSaturated;
    n *= static_cast<std::uint64_t>(p);
  }
  return n;
}

std::uint64_t budget_checked(std::uint64_t n, const char* what) {
  if (n > enumeration_budget())
    throw BudgetExceeded(std::string(what) + " exceeds the enumeration budget of " +
                         std::to_string(enumeration_budget()) + " points");
  return n;
}

}  // namespace

Shape::Shape(PrimeModulus p, std::vector<std::size_t> dims) : p_(p), dims_(std::move(dims)) {
  if (dims_.empty()) throw PreconditionError("shape needs arity k >= 1");
  sizes_.resize(dims_.size());
  strides_.resize(dims_.size());
  std::size_t tail = 0;
  for (std::size_t i = dims_.size(); i-- > 0;) {
    sizes_[i] = saturating_power(p.value(), dims_[i]);
    strides_[i] = saturating_power(p.value(), tail);
    tail += dims_[i];
  }
  total_ = saturating_power(p.value(), tail);
}

std::size_t Shape::total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0}); }

std::size_t Shape::offset(std::size_t factor) const {
  return std::accumulate(dims_.begin(), dims_.begin() + static_cast<std::ptrdiff_t>(factor), std::size_t{0});
}

std::uint64_t Shape::factor_size(std::size_t factor) const {
  return budget_checked(sizes_.at(factor), "factor group");
}

std::uint64_t Shape::point_count() const { return budget_checked(total_, "product group"); }

std::uint64_t Shape::stride(std::size_t factor) const { return budget_checked(strides_.at(factor), "stride"); }

void Shape::check_point(const Point& x) const {
  if (x.size() != arity())
    throw PreconditionError("point has " + std::to_string(x.size()) + " factors, shape has " +
                            std::to_string(arity()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i].modulus() == p_)) throw PreconditionError("point modulus mismatch");
    if (x[i].dim() != dims_[i])
      throw PreconditionError("factor " + std::to_string(i + 1) + " has dimension " +
                              std::to_string(x[i].dim()) + ", expected " + std::to_string(dims_[i]));
  }
}

std::uint64_t Shape::index_of(const Point& x) const {
  check_point(x);
  std::uint64_t index = 0;
  point_count();
  for (std::size_t i = 0; i < x.size(); ++i) index = index * sizes_[i] + encode(x[i]);
  return index;
}

Point Shape::point_at(std::uint64_t index) const {
  if (index >= point_count()) throw PreconditionError("point index out of range");
  Point x;
  x.reserve(arity());
  for (std::size_t i = 0; i < arity(); ++i) x.push_back(decode(p_, dims_[i], factor_value(index, i)));
  return x;
}

std::vector<Residue> Shape::digits_at(std::uint64_t index) const {
  std::vector<Residue> d(total_dim());
  const auto base = static_cast<std::uint64_t>(p_.value());
  for (std::size_t i = d.size(); i-- > 0;) {
    d[i] = static_cast<Residue>(index % base);
    index /= base;
  }
  return d;
}

Shape Shape::without(std::span<const std::size_t> factors) const {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < arity(); ++i)
    if (std::find(factors.begin(), factors.end(), i) == factors.end()) kept.push_back(dims_[i]);
  return {p_, kept};
}

void for_each_point(const Shape& shape,
                    const std::function<void(std::uint64_t, std::span<const Residue>)>& visit) {
  const auto count = shape.point_count();
  std::vector<Residue> digits(shape.total_dim(), 0);
  const int p = shape.modulus().value();
  for (std::uint64_t index = 0; index < count; ++index) {
    visit(index, digits);
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (digits[i] + 1 < p) {
        ++digits[i];
        break;
      }
      digits[i] = 0;
    }
  }
}

std::vector<std::size_t> complement(std::size_t k, std::span<const std::size_t> factors) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < k; ++i)
    if (std::find(factors.begin(), factors.end(), i) == factors.end()) rest.push_back(i);
  return rest;
}

}  // namespace mlv
