#include "mlv/generate.hpp"

#include <limits>

#include "mlv/errors.hpp"

namespace mlv {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw PreconditionError("empty sampling range");
  const auto limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const auto x = engine_();
    if (x < limit) return x % n;
  }
}

FieldVec Rng::vec(PrimeModulus p, std::size_t dim) { return {p, residues(p, dim)}; }

std::vector<Residue> Rng::residues(PrimeModulus p, std::size_t count) {
  std::vector<Residue> out(count);
  for (auto& r : out) r = residue(p);
  return out;
}

MultilinearForm random_form(Rng& rng, const Shape& shape, std::vector<std::size_t> support) {
  std::size_t size = 1;
  for (auto s : support) size *= shape.dim(s);
  if (support.empty()) return MultilinearForm::zero(shape);
  return {shape, std::move(support), rng.residues(shape.modulus(), size)};
}

std::vector<FieldVec> random_independent(Rng& rng, PrimeModulus p, std::size_t n, std::size_t count) {
  if (count > n) throw PreconditionError("more independent vectors than the dimension");
  Subspace span(p, n);
  std::vector<FieldVec> out;
  while (out.size() < count) {
    auto v = rng.vec(p, n);
    if (span.insert(v)) out.push_back(std::move(v));
  }
  return out;
}

Variety random_subspace(Rng& rng, PrimeModulus p, std::size_t n, std::size_t codim) {
  const Shape shape(p, {n});
  std::vector<MultilinearForm> forms;
  for (auto& v : random_independent(rng, p, n, codim))
    forms.emplace_back(shape, std::vector<std::size_t>{0}, std::vector<Residue>(v.coords().begin(), v.coords().end()));
  return {shape, std::move(forms)};
}

Variety planted_product(Rng& rng, const Shape& shape, const std::vector<std::size_t>& codims) {
  if (codims.size() != shape.arity()) throw PreconditionError("one codimension per factor required");
  std::vector<MultilinearForm> forms;
  for (std::size_t i = 0; i < shape.arity(); ++i)
    for (auto& v : random_independent(rng, shape.modulus(), shape.dim(i), codims[i]))
      forms.emplace_back(shape, std::vector<std::size_t>{i},
                         std::vector<Residue>(v.coords().begin(), v.coords().end()));
  return {shape, std::move(forms)};
}

std::vector<std::size_t> random_codim_split(Rng& rng, const Shape& shape, std::size_t total) {
  std::size_t room = 0;
  for (auto n : shape.dims()) room += n;
  if (total > room) throw PreconditionError("codimension exceeds the total dimension");
  std::vector<std::size_t> out(shape.arity(), 0);
  for (std::size_t placed = 0; placed < total;) {
    const auto i = static_cast<std::size_t>(rng.below(shape.arity()));
    if (out[i] < shape.dim(i)) {
      ++out[i];
      ++placed;
    }
  }
  return out;
}

MultilinearForm planted_low_prank(Rng& rng, const Shape& shape, std::size_t r) {
  const auto k = shape.arity();
  if (k < 2) throw PreconditionError("partition rank needs arity at least 2");
  const auto p = shape.modulus();
  std::vector<std::size_t> full(k);
  for (std::size_t i = 0; i < k; ++i) full[i] = i;
  std::size_t size = 1;
  for (auto n : shape.dims()) size *= n;
  std::vector<Residue> total(size, 0);

  for (std::size_t t = 0; t < r; ++t) {
    // Nonempty proper subset I as a bitmask.
    const auto mask = 1 + rng.below((std::uint64_t{1} << k) - 2);
    std::vector<std::size_t> part_i, part_c;
    for (std::size_t i = 0; i < k; ++i) ((mask >> i) & 1 ? part_i : part_c).push_back(i);
    auto tensor_size = [&](const std::vector<std::size_t>& part) {
      std::size_t s = 1;
      for (auto i : part) s *= shape.dim(i);
      return s;
    };
    const auto beta = rng.residues(p, tensor_size(part_i));
    const auto gamma = rng.residues(p, tensor_size(part_c));
    // Walk the full multi-index and split it between the two parts.
    std::vector<std::size_t> idx(k, 0);
    for (std::size_t flat = 0; flat < size; ++flat) {
      std::size_t bi = 0, gi = 0;
      for (auto i : part_i) bi = bi * shape.dim(i) + idx[i];
      for (auto i : part_c) gi = gi * shape.dim(i) + idx[i];
      total[flat] = p.add(total[flat], p.mul(beta[bi], gamma[gi]));
      for (std::size_t i = k; i-- > 0;) {
        if (++idx[i] < shape.dim(i)) break;
        idx[i] = 0;
      }
    }
  }
  if (size == 0) return MultilinearForm::zero(shape);
  return {shape, full, std::move(total)};
}

Variety random_variety(Rng& rng, const Shape& shape, std::size_t count) {
  const auto k = shape.arity();
  std::vector<MultilinearForm> forms;
  for (std::size_t j = 0; j < count; ++j) {
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    if (k > 1 && rng.below(2) == 0) mask = 1 + rng.below(mask);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1) support.push_back(i);
    forms.push_back(random_form(rng, shape, std::move(support)));
  }
  return {shape, std::move(forms)};
}

}  // namespace mlv
