#include <doctest.h>

#include <set>

#include "mlv/errors.hpp"
#include "mlv/field.hpp"

using namespace mlv;

TEST_CASE("prime modulus") {
  CHECK(PrimeModulus(2).value() == 2);
  CHECK(PrimeModulus(17).value() == 17);
  CHECK_THROWS_AS(PrimeModulus(4), PreconditionError);
  CHECK_THROWS_AS(PrimeModulus(19), PreconditionError);
  CHECK_THROWS_AS(PrimeModulus(1), PreconditionError);
  const PrimeModulus p(7);
  for (int a = 1; a < 7; ++a) CHECK(p.mul(static_cast<Residue>(a), p.inv(static_cast<Residue>(a))) == 1);
  CHECK(p.reduce(-1) == 6);
}

TEST_CASE("vec_add") {
  const PrimeModulus f2(2), f3(3);
  CHECK(vec_add(FieldVec(f2, {1, 1}), FieldVec(f2, {1, 0})) == FieldVec(f2, {0, 1}));
  const FieldVec v(f3, {2, 1});
  CHECK(vec_add(v, FieldVec(f3, 2)) == v);
  CHECK(vec_add(FieldVec(f3, {2, 1}), FieldVec(f3, {2, 2})) == FieldVec(f3, {1, 0}));
  CHECK_THROWS_AS(vec_add(FieldVec(f3, {1}), FieldVec(f3, {1, 1})), PreconditionError);
  CHECK_THROWS_AS(vec_add(FieldVec(f2, {1}), FieldVec(f3, {1})), PreconditionError);
}

TEST_CASE("enumerate_vectors") {
  const PrimeModulus f2(2), f3(3);
  std::vector<FieldVec> one(enumerate_vectors(f2, 1).begin(), enumerate_vectors(f2, 1).end());
  REQUIRE(one.size() == 2);
  CHECK(one[0] == FieldVec(f2, {0}));
  CHECK(one[1] == FieldVec(f2, {1}));
  std::vector<FieldVec> two;
  for (const auto& v : enumerate_vectors(f2, 2)) two.push_back(v);
  CHECK(two == std::vector<FieldVec>{FieldVec(f2, {0, 0}), FieldVec(f2, {0, 1}), FieldVec(f2, {1, 0}),
                                     FieldVec(f2, {1, 1})});
  std::vector<FieldVec> nine;
  for (const auto& v : enumerate_vectors(f3, 2)) nine.push_back(v);
  REQUIRE(nine.size() == 9);
  CHECK(nine.front() == FieldVec(f3, {0, 0}));
  CHECK(nine.back() == FieldVec(f3, {2, 2}));
}

TEST_CASE("enumerate_vectors yields p^dim distinct values in encode order") {
  for (int p : {2, 3, 5}) {
    for (std::size_t dim = 0; dim <= 4; ++dim) {
      const PrimeModulus m(p);
      std::set<std::vector<Residue>> seen;
      std::uint64_t i = 0;
      for (const auto& v : enumerate_vectors(m, dim)) {
        CHECK(encode(v) == i);
        CHECK(decode(m, dim, i) == v);
        seen.emplace(v.coords().begin(), v.coords().end());
        ++i;
      }
      std::uint64_t expect = 1;
      for (std::size_t t = 0; t < dim; ++t) expect *= static_cast<std::uint64_t>(p);
      CHECK(seen.size() == expect);
    }
  }
}

TEST_CASE("enumeration budget is enforced") {
  const auto saved = enumeration_budget();
  set_enumeration_budget(100);
  CHECK_THROWS_AS(enumerate_vectors(PrimeModulus(2), 7), BudgetExceeded);
  CHECK_NOTHROW(enumerate_vectors(PrimeModulus(2), 6));
  set_enumeration_budget(saved);
  CHECK_THROWS_AS(enumerate_vectors(PrimeModulus(2), 25), BudgetExceeded);
}

TEST_CASE("add_encoded agrees with vec_add") {
  for (int p : {2, 3, 5}) {
    const PrimeModulus m(p);
    for (const auto& a : enumerate_vectors(m, 3))
      for (const auto& b : enumerate_vectors(m, 3)) CHECK(add_encoded(m, 3, encode(a), encode(b)) == encode(vec_add(a, b)));
  }
}

TEST_CASE("echelonize") {
  const PrimeModulus f2(2);
  const std::vector<FieldVec> dup{FieldVec(f2, {1, 1}), FieldVec(f2, {1, 1})};
  const auto s = echelonize(f2, 2, dup);
  CHECK(s.rank() == 1);
  CHECK(s.basis().front() == FieldVec(f2, {1, 1}));
  CHECK(echelonize(f2, 2, {}).rank() == 0);
  const std::vector<FieldVec> three{FieldVec(f2, {1, 0, 1}), FieldVec(f2, {0, 1, 1}), FieldVec(f2, {1, 1, 0})};
  CHECK(echelonize(f2, 3, three).rank() == 2);
}

TEST_CASE("subspace_contains") {
  const PrimeModulus f2(2);
  const std::vector<FieldVec> gen{FieldVec(f2, {1, 1})};
  const auto s = echelonize(f2, 2, gen);
  CHECK(subspace_contains(s, FieldVec(f2, {0, 0})));
  CHECK_FALSE(subspace_contains(s, FieldVec(f2, {1, 0})));
  std::vector<FieldVec> all(enumerate_vectors(f2, 2).begin(), enumerate_vectors(f2, 2).end());
  const auto full = echelonize(f2, 2, all);
  for (const auto& v : all) CHECK(subspace_contains(full, v));
  CHECK_THROWS_AS(subspace_contains(s, FieldVec(f2, {1, 0, 0})), PreconditionError);
}

namespace {

bool is_reduced_echelon(const Subspace& s) {
  const auto& b = s.basis();
  const auto& piv = s.pivots();
  for (std::size_t r = 0; r < b.size(); ++r) {
    if (b[r].is_zero()) return false;
    if (r > 0 && piv[r] <= piv[r - 1]) return false;
    if (b[r][piv[r]] != 1) return false;
    for (std::size_t c = 0; c < piv[r]; ++c)
      if (b[r][c] != 0) return false;
    for (std::size_t o = 0; o < b.size(); ++o)
      if (o != r && b[o][piv[r]] != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("subspace size, echelon shape and idempotence on random spans") {
  std::uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const int p = trial % 2 ? 3 : 2;
    const PrimeModulus m(p);
    const std::size_t dim = 1 + next() % 4;
    const std::size_t count = next() % 5;
    std::vector<FieldVec> gens;
    for (std::size_t g = 0; g < count; ++g) {
      FieldVec v(m, dim);
      for (std::size_t i = 0; i < dim; ++i) v.set(i, static_cast<std::int64_t>(next() % p));
      gens.push_back(v);
    }
    const auto s = echelonize(m, dim, gens);
    CHECK(is_reduced_echelon(s));
    std::uint64_t inside = 0;
    for (const auto& v : enumerate_vectors(m, dim)) inside += s.contains(v);
    std::uint64_t expect = 1;
    for (std::size_t r = 0; r < s.rank(); ++r) expect *= static_cast<std::uint64_t>(p);
    CHECK(inside == expect);
    CHECK(echelonize(m, dim, s.basis()) == s);
    for (const auto& g : gens) CHECK(s.contains(g));
  }
}

TEST_CASE("matrix_rank") {
  const PrimeModulus f2(2);
  const std::vector<Residue> id{1, 0, 0, 1};
  CHECK(matrix_rank(f2, 2, 2, id) == 2);
  const std::vector<Residue> zero(4, 0);
  CHECK(matrix_rank(f2, 2, 2, zero) == 0);
  const std::vector<Residue> outer{1, 1, 1, 1};
  CHECK(matrix_rank(f2, 2, 2, outer) == 1);
}
