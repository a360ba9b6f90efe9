#include "mlv/variety.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "mlv/errors.hpp"

namespace mlv {

Variety::Variety(Shape shape) : shape_(std::move(shape)) {}

Variety::Variety(Shape shape, std::vector<MultilinearForm> forms) : shape_(std::move(shape)) {
  std::map<std::vector<std::size_t>, Subspace> spans;
  for (auto& f : forms) {
    if (!(f.shape() == shape_)) throw PreconditionError("variety forms must share the variety's shape");
    if (f.is_zero()) continue;
    auto it = spans.find(f.support());
    if (it == spans.end())
      it = spans.emplace(f.support(), Subspace(shape_.modulus(), f.coeffs().size())).first;
    if (it->second.insert(f.flattened())) forms_.push_back(std::move(f));
  }
}

Variety Variety::empty(Shape shape) {
  Variety v(std::move(shape));
  v.empty_ = true;
  return v;
}

PointSet::PointSet(Shape shape) : shape_(std::move(shape)), bits_(shape_.point_count(), 0) {}

std::uint64_t PointSet::count() const {
  return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::uint64_t> PointSet::indices() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(i);
  return out;
}

bool PointSet::subset_of(const PointSet& other) const {
  if (!(shape_ == other.shape_)) throw PreconditionError("point sets live in different shapes");
  for (std::uint64_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

bool membership(const Variety& v, const Point& x) {
  v.shape().check_point(x);
  if (v.is_empty_marker()) return false;
  return std::all_of(v.forms().begin(), v.forms().end(),
                     [&](const MultilinearForm& f) { return eval_form(f, x) == 0; });
}

PointSet members(const Variety& v) {
  PointSet s(v.shape());
  if (v.is_empty_marker()) return s;
  for_each_point(v.shape(), [&](std::uint64_t index, std::span<const Residue> digits) {
    for (const auto& f : v.forms())
      if (eval_digits(f, digits) != 0) return;
    s.insert(index);
  });
  return s;
}

ExactDensity density(const Variety& v) {
  return ExactDensity::fraction(v.shape().modulus(), members(v).count(), v.shape().total_dim());
}

Variety slice_variety(const Variety& v, std::span<const std::size_t> factors, std::span<const FieldVec> values) {
  const auto& shape = v.shape();
  if (factors.size() != values.size()) throw PreconditionError("one value per sliced factor required");
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (factors[j] >= shape.arity()) throw PreconditionError("sliced factor outside the shape");
    if (std::count(factors.begin(), factors.end(), factors[j]) > 1)
      throw PreconditionError("factor sliced twice");
    if (!(values[j].modulus() == shape.modulus()) || values[j].dim() != shape.dim(factors[j]))
      throw PreconditionError("slice value does not match factor " + std::to_string(factors[j] + 1));
  }
  if (factors.size() >= shape.arity()) throw PreconditionError("a slice must leave at least one factor");

  const Shape rest = shape.without(factors);
  std::vector<std::size_t> map(shape.arity(), 0);
  for (std::size_t i = 0, next = 0; i < shape.arity(); ++i)
    if (std::find(factors.begin(), factors.end(), i) == factors.end()) map[i] = next++;
  if (v.is_empty_marker()) return Variety::empty(rest);

  std::vector<MultilinearForm> sliced;
  for (const auto& f : v.forms()) {
    std::vector<std::size_t> hit;
    std::vector<FieldVec> hit_values;
    for (std::size_t j = 0; j < factors.size(); ++j)
      if (f.depends_on(factors[j])) {
        hit.push_back(factors[j]);
        hit_values.push_back(values[j]);
      }
    if (hit.size() == f.support().size()) {
      // The form is constant on the fiber.
      Point x;
      for (std::size_t i = 0; i < shape.arity(); ++i) x.emplace_back(shape.modulus(), shape.dim(i));
      for (std::size_t j = 0; j < hit.size(); ++j) x[hit[j]] = hit_values[j];
      if (eval_form(f, x) != 0) return Variety::empty(rest);
      continue;
    }
    sliced.push_back(reindex(hit.empty() ? f : slice_form(f, hit, hit_values), rest, map));
  }
  return {rest, std::move(sliced)};
}

Variety intersect(const Variety& a, const Variety& b) {
  if (!(a.shape() == b.shape())) throw PreconditionError("intersected varieties must share a shape");
  if (a.is_empty_marker() || b.is_empty_marker()) return Variety::empty(a.shape());
  auto forms = a.forms();
  forms.insert(forms.end(), b.forms().begin(), b.forms().end());
  return {a.shape(), std::move(forms)};
}

Variety lift(const Variety& v, const Shape& target, std::span<const std::size_t> map) {
  if (v.is_empty_marker()) return Variety::empty(target);
  std::vector<MultilinearForm> forms;
  forms.reserve(v.codim());
  for (const auto& f : v.forms()) forms.push_back(reindex(f, target, map));
  return {target, std::move(forms)};
}

}  // namespace mlv
