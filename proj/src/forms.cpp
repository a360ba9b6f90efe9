#include "mlv/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mlv/errors.hpp"

namespace mlv {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// Sum over the remaining indices of c[base..] * prod x_t[i_t], axes t >= axis.
int eval_rec(std::span<const Residue> coeffs, std::span<const std::size_t> dims,
             std::span<const Residue* const> xs, std::size_t axis, std::size_t base, int p) {
  if (axis == dims.size()) return coeffs[base];
  int acc = 0;
  const auto* x = xs[axis];
  for (std::size_t l = 0; l < dims[axis]; ++l)
    if (x[l] != 0) acc += x[l] * eval_rec(coeffs, dims, xs, axis + 1, base * dims[axis] + l, p);
  return acc % p;
}

// Advances a mixed-radix counter (last position fastest); false on wrap.
bool next_index(std::vector<std::size_t>& idx, std::span<const std::size_t> dims) {
  for (std::size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < dims[i]) return true;
    idx[i] = 0;
  }
  return false;
}

// Contracts the support positions flagged in `fixed` against their vectors;
// the result is the tensor over the unflagged positions.
std::vector<Residue> partial_contract(std::span<const Residue> coeffs, std::span<const std::size_t> dims,
                                      const std::vector<bool>& fixed,
                                      const std::vector<const Residue*>& values, PrimeModulus p) {
  std::vector<std::size_t> rest_dims;
  for (std::size_t t = 0; t < dims.size(); ++t)
    if (!fixed[t]) rest_dims.push_back(dims[t]);
  std::vector<int> out(product(rest_dims), 0);
  if (coeffs.empty()) return std::vector<Residue>(out.size(), 0);
  std::vector<std::size_t> idx(dims.size(), 0);
  std::size_t flat = 0;
  do {
    if (coeffs[flat] != 0) {
      int weight = coeffs[flat];
      std::size_t target = 0;
      for (std::size_t t = 0; t < dims.size() && weight != 0; ++t) {
        if (fixed[t]) weight = weight * values[t][idx[t]] % p.value();
        else target = target * dims[t] + idx[t];
      }
      out[target] += weight;
    }
    ++flat;
  } while (next_index(idx, dims));
  std::vector<Residue> reduced(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) reduced[i] = p.reduce(out[i]);
  return reduced;
}

}  // namespace

MultilinearForm::MultilinearForm(Shape shape, std::vector<std::size_t> support, std::vector<Residue> coeffs)
    : shape_(std::move(shape)), support_(std::move(support)), coeffs_(std::move(coeffs)) {
  for (std::size_t t = 0; t < support_.size(); ++t) {
    if (support_[t] >= shape_.arity())
      throw PreconditionError("support factor " + std::to_string(support_[t] + 1) + " outside arity " +
                              std::to_string(shape_.arity()));
    if (t > 0 && support_[t] <= support_[t - 1])
      throw PreconditionError("support must be strictly increasing");
  }
  const auto expected = product(support_dims());
  if (coeffs_.size() != expected)
    throw PreconditionError("form has " + std::to_string(coeffs_.size()) + " coefficients, support needs " +
                            std::to_string(expected));
  for (auto c : coeffs_)
    if (c >= modulus().value()) throw PreconditionError("coefficient not reduced mod p");
  if (support_.empty() && coeffs_[0] != 0)
    throw PreconditionError("a form with empty support must be the zero form");
}

MultilinearForm MultilinearForm::zero(Shape shape) { return {std::move(shape), {}, {0}}; }

std::vector<std::size_t> MultilinearForm::support_dims() const {
  std::vector<std::size_t> d;
  d.reserve(support_.size());
  for (auto s : support_) d.push_back(shape_.dim(s));
  return d;
}

bool MultilinearForm::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Residue c) { return c == 0; });
}

bool MultilinearForm::depends_on(std::size_t factor) const {
  return std::find(support_.begin(), support_.end(), factor) != support_.end();
}

MultilinearMap::MultilinearMap(Shape shape, std::vector<std::size_t> support,
                               std::vector<MultilinearForm> components)
    : shape_(std::move(shape)), support_(std::move(support)), components_(std::move(components)) {
  for (const auto& f : components_)
    if (!(f.shape() == shape_) || f.support() != support_)
      throw PreconditionError("map components must share shape and support");
}

Residue eval_digits(const MultilinearForm& f, std::span<const Residue> digits) {
  if (digits.size() != f.shape().total_dim()) throw PreconditionError("point does not match shape");
  if (f.support().empty()) return 0;
  const auto dims = f.support_dims();
  std::vector<const Residue*> xs;
  xs.reserve(dims.size());
  for (auto s : f.support()) xs.push_back(digits.data() + f.shape().offset(s));
  return static_cast<Residue>(eval_rec(f.coeffs(), dims, xs, 0, 0, f.modulus().value()));
}

Residue eval_form(const MultilinearForm& f, const Point& x) {
  f.shape().check_point(x);
  std::vector<Residue> digits;
  digits.reserve(f.shape().total_dim());
  for (const auto& v : x) digits.insert(digits.end(), v.coords().begin(), v.coords().end());
  return eval_digits(f, digits);
}

FieldVec eval_map(const MultilinearMap& phi, const Point& x) {
  FieldVec out(phi.shape().modulus(), phi.codomain_dim());
  for (std::size_t j = 0; j < phi.codomain_dim(); ++j) out.set(j, eval_form(phi.components()[j], x));
  return out;
}

MultilinearForm slice_form(const MultilinearForm& f, std::span<const std::size_t> factors,
                           std::span<const FieldVec> values) {
  if (factors.size() != values.size()) throw PreconditionError("one value per sliced factor required");
  const auto& support = f.support();
  std::vector<bool> fixed(support.size(), false);
  std::vector<const Residue*> vals(support.size(), nullptr);
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const auto pos = std::find(support.begin(), support.end(), factors[j]);
    if (pos == support.end())
      throw PreconditionError("sliced factor " + std::to_string(factors[j] + 1) + " is not in the support");
    const auto t = static_cast<std::size_t>(pos - support.begin());
    if (!(values[j].modulus() == f.modulus()) || values[j].dim() != f.shape().dim(factors[j]))
      throw PreconditionError("slice value does not match factor " + std::to_string(factors[j] + 1));
    if (fixed[t]) throw PreconditionError("factor sliced twice");
    fixed[t] = true;
    vals[t] = values[j].coords().data();
  }
  if (!support.empty() && std::all_of(fixed.begin(), fixed.end(), [](bool b) { return b; }))
    throw PreconditionError("slicing every support factor leaves a constant; use eval_form");
  if (factors.empty()) return f;
  std::vector<std::size_t> rest;
  for (std::size_t t = 0; t < support.size(); ++t)
    if (!fixed[t]) rest.push_back(support[t]);
  return {f.shape(), rest, partial_contract(f.coeffs(), f.support_dims(), fixed, vals, f.modulus())};
}

MultilinearForm reindex(const MultilinearForm& f, const Shape& target, std::span<const std::size_t> map) {
  if (map.size() != f.shape().arity()) throw PreconditionError("reindex map must cover every factor");
  if (!(target.modulus() == f.modulus())) throw PreconditionError("modulus mismatch");
  if (f.support().empty()) return MultilinearForm::zero(target);
  std::vector<std::size_t> support;
  for (auto s : f.support()) {
    const auto t = map[s];
    if (t >= target.arity() || target.dim(t) != f.shape().dim(s))
      throw PreconditionError("reindex target factor does not match");
    if (!support.empty() && t <= support.back()) throw PreconditionError("reindex map must be increasing");
    support.push_back(t);
  }
  return {target, support, f.coeffs()};
}

MultilinearForm combine(std::span<const MultilinearForm> forms, std::span<const Residue> weights) {
  if (forms.empty() || forms.size() != weights.size())
    throw PreconditionError("combine needs one weight per form");
  const auto& first = forms.front();
  std::vector<int> acc(first.coeffs().size(), 0);
  for (std::size_t j = 0; j < forms.size(); ++j) {
    if (!(forms[j].shape() == first.shape()) || forms[j].support() != first.support())
      throw PreconditionError("combined forms must share shape and support");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += int(weights[j]) * forms[j].coeffs()[i];
  }
  std::vector<Residue> coeffs(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) coeffs[i] = first.modulus().reduce(acc[i]);
  if (first.support().empty()) return MultilinearForm::zero(first.shape());
  return {first.shape(), first.support(), coeffs};
}

ExactDensity bias(const MultilinearForm& f) {
  const auto p = f.modulus();
  if (f.is_zero()) return ExactDensity::one(p);
  const auto dims = f.support_dims();
  const auto m = dims.size();
  // Outer vectors for every support factor but the last.
  std::size_t outer_dim = 0;
  for (std::size_t t = 0; t + 1 < m; ++t) outer_dim += dims[t];

  std::vector<bool> fixed(m, true);
  fixed[m - 1] = false;
  std::vector<const Residue*> vals(m, nullptr);
  std::uint64_t vanishing = 0;
  for (const auto& outer : enumerate_vectors(p, outer_dim)) {
    std::size_t at = 0;
    for (std::size_t t = 0; t + 1 < m; ++t) {
      vals[t] = outer.coords().data() + at;
      at += dims[t];
    }
    const auto induced = partial_contract(f.coeffs(), dims, fixed, vals, p);
    if (std::all_of(induced.begin(), induced.end(), [](Residue c) { return c == 0; })) ++vanishing;
  }
  return ExactDensity::fraction(p, vanishing, outer_dim);
}

AnalyticRank arank(const MultilinearForm& f) {
  auto b = bias(f);
  if (b.is_zero())
    throw PreconditionError("bias is zero (a nonzero form in one variable); analytic rank is undefined");
  const double value = -static_cast<double>(log_p(PowerMonomial{0, 0, 1}, b));
  return {b, value == 0.0 ? 0.0 : value};
}

ZeroFiberReport zero_fiber_identity_check(const MultilinearForm& f) {
  const auto& shape = f.shape();
  if (shape.arity() < 2) throw PreconditionError("zero-fiber identity needs arity k >= 2");
  const auto p = f.modulus();
  const std::size_t last = f.support().empty() ? shape.arity() - 1 : f.support().back();
  const std::size_t removed[] = {last};
  const Shape rest = shape.without(removed);
  std::vector<std::size_t> map(shape.arity());
  for (std::size_t i = 0; i < shape.arity(); ++i) map[i] = i < last ? i : i - 1;

  // A(x) = (f(x, e_1), ..., f(x, e_n)) on the remaining factors.
  std::vector<MultilinearForm> components;
  bool constant_nonzero = false;
  if (f.support().size() <= 1) {
    constant_nonzero = !f.is_zero();
  } else {
    const auto n = shape.dim(last);
    for (std::size_t l = 0; l < n; ++l) {
      FieldVec e(p, n);
      e.set(l, 1);
      const std::size_t factors[] = {last};
      const FieldVec values[] = {e};
      auto sliced = slice_form(f, factors, values);
      std::vector<std::size_t> sub_map = map;
      sub_map[last] = 0;  // unused: `last` is outside the sliced support
      components.push_back(reindex(sliced, rest, sub_map));
    }
  }

  std::uint64_t zeros = 0;
  if (!constant_nonzero) {
    for_each_point(rest, [&](std::uint64_t, std::span<const Residue> digits) {
      for (const auto& a : components)
        if (eval_digits(a, digits) != 0) return;
      ++zeros;
    });
  }

  const auto b = bias(f);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(p.value()),
                static_cast<unsigned long>(static_cast<std::int64_t>(rest.total_dim()) - b.log_p_denominator()));
  mpz_class bias_count = b.numerator() * scale;
  mpz_class zero_mpz;
  mpz_set_ui(zero_mpz.get_mpz_t(), static_cast<unsigned long>(zeros));
  return {zeros, bias_count, zero_mpz == bias_count};
}

std::int64_t prank_lower_bound(const MultilinearForm& f) {
  if (f.is_zero()) return 0;
  const auto b = bias(f);
  if (b.is_zero()) throw PreconditionError("bias is zero (a nonzero form in one variable); no partition rank");
  return ceil_log_p_inverse(b);
}

std::size_t prank_exact_k2(const MultilinearForm& f) {
  if (f.shape().arity() != 2) throw PreconditionError("prank_exact_k2 needs arity 2");
  if (f.is_zero()) return 0;
  if (f.support().size() != 2) throw PreconditionError("a nonzero form in one variable has no partition rank");
  return matrix_rank(f.modulus(), f.shape().dim(0), f.shape().dim(1), f.coeffs());
}

std::int64_t prank_flattening_upper_bound(const MultilinearForm& f) {
  if (f.is_zero()) return 0;
  const auto dims = f.support_dims();
  const auto total = f.coeffs().size();
  std::int64_t best = -1;
  for (std::size_t axis = 0; axis < dims.size(); ++axis) {
    const auto rows = dims[axis];
    const auto cols = total / rows;
    std::vector<Residue> matrix(total);
    std::vector<std::size_t> idx(dims.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t col = 0;
      for (std::size_t t = 0; t < dims.size(); ++t)
        if (t != axis) col = col * dims[t] + idx[t];
      matrix[idx[axis] * cols + col] = f.coeffs()[flat];
      next_index(idx, dims);
    }
    const auto r = static_cast<std::int64_t>(matrix_rank(f.modulus(), rows, cols, matrix));
    if (best < 0 || r < best) best = r;
  }
  return best;
}

namespace {

std::uint64_t encode_tensor(std::span<const Residue> coeffs, int p) {
  std::uint64_t index = 0;
  for (auto c : coeffs) index = index * static_cast<std::uint64_t>(p) + c;
  return index;
}

// Every product beta(x_I) * gamma(x_{S\I}) with the first support position in
// I, beta's first nonzero coefficient 1 and gamma nonzero, encoded.
std::vector<std::uint64_t> product_generators(const MultilinearForm& f) {
  const auto p = f.modulus();
  const auto dims = f.support_dims();
  const auto m = dims.size();
  const auto total = f.coeffs().size();
  std::vector<std::uint64_t> gens;
  for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
    if (!(mask & 1u)) continue;
    std::vector<std::size_t> beta_dims, gamma_dims;
    for (std::size_t t = 0; t < m; ++t) ((mask >> t) & 1u ? beta_dims : gamma_dims).push_back(dims[t]);
    const auto nb = product(beta_dims);
    const auto ng = product(gamma_dims);
    const auto beta_count = checked_power(p, nb);
    const auto gamma_count = checked_power(p, ng);
    if (beta_count * gamma_count > enumeration_budget())
      throw BudgetExceeded("too many product generators");
    // Position of each tensor entry inside beta and gamma.
    std::vector<std::size_t> at_beta(total), at_gamma(total);
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t b = 0, g = 0;
      for (std::size_t t = 0; t < m; ++t) {
        if ((mask >> t) & 1u) b = b * dims[t] + idx[t];
        else g = g * dims[t] + idx[t];
      }
      at_beta[flat] = b;
      at_gamma[flat] = g;
      next_index(idx, dims);
    }
    std::vector<Residue> tensor(total);
    for (const auto& beta : enumerate_vectors(p, nb)) {
      std::size_t lead = 0;
      while (lead < nb && beta[lead] == 0) ++lead;
      if (lead == nb || beta[lead] != 1) continue;
      for (const auto& gamma : enumerate_vectors(p, ng)) {
        if (gamma.is_zero()) continue;
        for (std::size_t flat = 0; flat < total; ++flat)
          tensor[flat] = p.mul(beta[at_beta[flat]], gamma[at_gamma[flat]]);
        gens.push_back(encode_tensor(tensor, p.value()));
      }
    }
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

}  // namespace

namespace {

PrankResult search_between(const MultilinearForm& f, std::int64_t lower, std::int64_t upper) {
  const auto p = f.modulus();
  PrankResult result{lower, upper};
  if (f.is_zero()) return {0, 0};
  try {
    const auto total = f.coeffs().size();
    const auto states = checked_power(p, total);
    const auto gens = product_generators(f);
    const auto target = encode_tensor(f.coeffs(), p.value());
    // Sums of r products are exactly the states at BFS distance <= r from 0.
    std::vector<std::uint8_t> seen(states, 0);
    std::vector<std::uint64_t> frontier{0};
    seen[0] = 1;
    std::uint64_t work = 0;
    for (std::int64_t level = 1; level < result.upper; ++level) {
      std::vector<std::uint64_t> next;
      for (auto s : frontier) {
        work += gens.size();
        if (work > 64 * enumeration_budget()) throw BudgetExceeded("partition rank search too large");
        for (auto g : gens) {
          const auto t = add_encoded(p, total, s, g);
          if (seen[t]) continue;
          seen[t] = 1;
          next.push_back(t);
        }
      }
      if (seen[target]) return {level, level};
      result.lower = std::max(result.lower, level + 1);
      frontier = std::move(next);
    }
    result.lower = result.upper;
  } catch (const BudgetExceeded&) {
    // Interval stays as computed so far.
  }
  return result;
}

}  // namespace

PrankResult prank_search(const MultilinearForm& f) {
  if (f.is_zero()) return {0, 0};
  if (f.support().size() < 2) throw PreconditionError("a nonzero form in one variable has no partition rank");
  return search_between(f, 0, prank_flattening_upper_bound(f));
}

PrankResult prank_exact_small(const MultilinearForm& f) {
  if (f.is_zero()) return {0, 0};
  if (f.support().size() < 2) throw PreconditionError("a nonzero form in one variable has no partition rank");
  const PrankResult bounds{prank_lower_bound(f), prank_flattening_upper_bound(f)};
  if (bounds.exact()) return bounds;
  return search_between(f, bounds.lower, bounds.upper);
}

}  // namespace mlv
