#include "mlv/field.hpp"

#include <atomic>
#include <ostream>
#include <string>

#include "mlv/errors.hpp"

namespace mlv {

namespace {

std::atomic<std::uint64_t> g_budget{std::uint64_t{1} << 24};

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

PrimeModulus::PrimeModulus(int p) : p_(p) {
  if (p < 2 || p > 17 || !is_prime(p))
    throw PreconditionError("modulus must be a prime in [2, 17], got " + std::to_string(p));
}

Residue PrimeModulus::inv(Residue a) const {
  if (a % p_ == 0) throw PreconditionError("inverse of zero in F_p");
  // Fermat: a^(p-2).
  Residue result = 1;
  for (int e = 0; e < p_ - 2; ++e) result = mul(result, a);
  return result;
}

std::uint64_t enumeration_budget() { return g_budget.load(); }

void set_enumeration_budget(std::uint64_t points) {
  if (points == 0) throw PreconditionError("enumeration budget must be positive");
  g_budget.store(points);
}

std::uint64_t checked_power(PrimeModulus p, std::size_t dim) {
  const auto budget = enumeration_budget();
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    n *= static_cast<std::uint64_t>(p.value());
    if (n > budget)
      throw BudgetExceeded(std::to_string(p.value()) + "^" + std::to_string(dim) +
                           " points exceeds the enumeration budget of " +
                           std::to_string(budget));
  }
  return n;
}

FieldVec::FieldVec(PrimeModulus p, std::size_t dim) : p_(p), coords_(dim, 0) {}

FieldVec::FieldVec(PrimeModulus p, std::vector<Residue> coords) : p_(p), coords_(std::move(coords)) {
  for (auto c : coords_)
    if (c >= p.value()) throw PreconditionError("coordinate not reduced mod p");
}

FieldVec::FieldVec(PrimeModulus p, std::initializer_list<int> coords) : p_(p) {
  coords_.reserve(coords.size());
  for (int c : coords) coords_.push_back(p.reduce(c));
}

bool FieldVec::is_zero() const {
  for (auto c : coords_)
    if (c != 0) return false;
  return true;
}

std::ostream& operator<<(std::ostream& os, const FieldVec& v) {
  os << '(';
  for (std::size_t i = 0; i < v.dim(); ++i) os << (i ? "," : "") << int(v[i]);
  return os << ')';
}

namespace {

void check_compatible(const FieldVec& a, const FieldVec& b) {
  if (!(a.modulus() == b.modulus())) throw PreconditionError("modulus mismatch");
  if (a.dim() != b.dim())
    throw PreconditionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
}

}  // namespace

FieldVec vec_add(const FieldVec& a, const FieldVec& b) {
  check_compatible(a, b);
  FieldVec r(a.modulus(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r.set(i, a[i] + b[i]);
  return r;
}

FieldVec vec_sub(const FieldVec& a, const FieldVec& b) {
  check_compatible(a, b);
  FieldVec r(a.modulus(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r.set(i, int(a[i]) - int(b[i]));
  return r;
}

FieldVec vec_scale(Residue lambda, const FieldVec& a) {
  FieldVec r(a.modulus(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r.set(i, int(lambda) * a[i]);
  return r;
}

Residue dot(const FieldVec& a, const FieldVec& b) {
  check_compatible(a, b);
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += int(a[i]) * b[i];
  return a.modulus().reduce(acc);
}

std::uint64_t encode(const FieldVec& v) {
  std::uint64_t index = 0;
  const auto p = static_cast<std::uint64_t>(v.modulus().value());
  for (auto c : v.coords()) index = index * p + c;
  return index;
}

FieldVec decode(PrimeModulus p, std::size_t dim, std::uint64_t index) {
  FieldVec v(p, dim);
  const auto base = static_cast<std::uint64_t>(p.value());
  for (std::size_t i = dim; i-- > 0;) {
    v.set(i, static_cast<std::int64_t>(index % base));
    index /= base;
  }
  return v;
}

std::uint64_t add_encoded(PrimeModulus p, std::size_t dim, std::uint64_t a, std::uint64_t b) {
  const auto base = static_cast<std::uint64_t>(p.value());
  if (base == 2) return a ^ b;
  std::uint64_t result = 0;
  std::uint64_t place = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    result += ((a % base + b % base) % base) * place;
    a /= base;
    b /= base;
    place *= base;
  }
  return result;
}

VectorEnumeration::iterator& VectorEnumeration::iterator::operator++() {
  ++index_;
  // Odometer step, last coordinate fastest.
  const int p = current_.modulus().value();
  for (std::size_t i = current_.dim(); i-- > 0;) {
    if (current_[i] + 1 < p) {
      current_.set(i, current_[i] + 1);
      return *this;
    }
    current_.set(i, 0);
  }
  return *this;
}

VectorEnumeration::VectorEnumeration(PrimeModulus p, std::size_t dim)
    : p_(p), dim_(dim), count_(checked_power(p, dim)) {}

Subspace::Subspace(PrimeModulus p, std::size_t ambient_dim) : p_(p), ambient_dim_(ambient_dim) {}

void Subspace::check(const FieldVec& v) const {
  if (!(v.modulus() == p_)) throw PreconditionError("modulus mismatch");
  if (v.dim() != ambient_dim_) throw PreconditionError("dimension mismatch");
}

FieldVec Subspace::reduce(const FieldVec& v) const {
  check(v);
  FieldVec r = v;
  for (std::size_t row = 0; row < basis_.size(); ++row) {
    const auto c = r[pivots_[row]];
    if (c != 0) r = vec_sub(r, vec_scale(c, basis_[row]));
  }
  return r;
}

bool Subspace::insert(const FieldVec& v) {
  FieldVec r = reduce(v);
  std::size_t pivot = 0;
  while (pivot < r.dim() && r[pivot] == 0) ++pivot;
  if (pivot == r.dim()) return false;
  r = vec_scale(p_.inv(r[pivot]), r);
  // Clear the new pivot column from existing rows to stay reduced.
  for (auto& row : basis_) {
    const auto c = row[pivot];
    if (c != 0) row = vec_sub(row, vec_scale(c, r));
  }
  std::size_t at = 0;
  while (at < pivots_.size() && pivots_[at] < pivot) ++at;
  basis_.insert(basis_.begin() + static_cast<std::ptrdiff_t>(at), r);
  pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(at), pivot);
  return true;
}

Subspace echelonize(PrimeModulus p, std::size_t dim, std::span<const FieldVec> vectors) {
  Subspace s(p, dim);
  for (const auto& v : vectors) s.insert(v);
  return s;
}

std::size_t matrix_rank(PrimeModulus p, std::size_t rows, std::size_t cols,
                        std::span<const Residue> entries) {
  if (entries.size() != rows * cols) throw PreconditionError("matrix entry count mismatch");
  Subspace s(p, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Residue> row(entries.begin() + static_cast<std::ptrdiff_t>(r * cols),
                             entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
    s.insert(FieldVec(p, std::move(row)));
  }
  return s.rank();
}

}  // namespace mlv
