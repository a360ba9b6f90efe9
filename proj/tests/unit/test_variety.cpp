#include <doctest.h>

#include "../oracles.hpp"
#include "mlv/errors.hpp"
#include "mlv/generate.hpp"
#include "mlv/variety.hpp"

using namespace mlv;

namespace {

const PrimeModulus F2(2), F3(3);

Point point(PrimeModulus p, std::initializer_list<std::initializer_list<int>> parts) {
  Point x;
  for (auto part : parts) x.emplace_back(p, part);
  return x;
}

Variety xy_zero(std::size_t n = 1) {
  const Shape s(F2, {n, n});
  std::vector<Residue> c(n * n, 0);
  c[0] = 1;
  return {s, {MultilinearForm(s, {0, 1}, c)}};
}

Shape random_shape(Rng& rng, PrimeModulus p, std::size_t k, std::size_t max_total) {
  std::vector<std::size_t> dims(k, 1);
  std::size_t total = k;
  while (total < max_total && rng.below(3) != 0) {
    ++dims[rng.below(k)];
    ++total;
  }
  return {p, dims};
}

PointSet from_bits(const Shape& s, const std::vector<bool>& bits) {
  PointSet out(s);
  for (std::uint64_t z = 0; z < bits.size(); ++z)
    if (bits[z]) out.insert(z);
  return out;
}

}  // namespace

TEST_CASE("membership") {
  const Shape s(F2, {1, 1});
  const Variety all(s);
  for (std::uint64_t z = 0; z < 4; ++z) CHECK(membership(all, s.point_at(z)));
  CHECK_FALSE(membership(xy_zero(), point(F2, {{1}, {1}})));
  CHECK(membership(xy_zero(), point(F2, {{1}, {0}})));
  CHECK_THROWS_AS(membership(xy_zero(), point(F2, {{1}})), PreconditionError);
}

TEST_CASE("density") {
  const Shape s(F2, {1, 1});
  CHECK(density(Variety(s)) == ExactDensity::one(F2));
  CHECK(density(xy_zero()).to_string() == "3/4");
  CHECK(density(Variety(s, {MultilinearForm(s, {0}, {1})})).to_string() == "1/2");
  CHECK(density(Variety::empty(s)).is_zero());
}

TEST_CASE("slice_variety") {
  const Shape s(F2, {1, 1});
  const std::size_t first[] = {0};
  const FieldVec one[] = {FieldVec(F2, {1})};
  const auto whole = slice_variety(Variety(s), first, one);
  CHECK(whole.codim() == 0);
  CHECK(whole.shape() == Shape(F2, {1}));
  const auto y = slice_variety(xy_zero(), first, one);
  CHECK(density(y).to_string() == "1/2");
  CHECK(y.codim() == 1);
  const auto gone = slice_variety(Variety(s, {MultilinearForm(s, {0}, {1})}), first, one);
  CHECK(gone.is_empty_marker());
  CHECK(density(gone).is_zero());
}

TEST_CASE("intersect") {
  const Shape s(F2, {1, 1});
  CHECK(intersect(xy_zero(), Variety(s)) == xy_zero());
  CHECK(intersect(xy_zero(), xy_zero()).codim() == 1);
  const Variety a(s, {MultilinearForm(s, {0}, {1})}), b(s, {MultilinearForm(s, {1}, {1})});
  CHECK(density(intersect(a, b)).to_string() == "1/4");
  CHECK_THROWS_AS(intersect(a, Variety(Shape(F2, {1, 2}))), PreconditionError);
}

TEST_CASE("canonicalization drops zero and dependent forms") {
  const Shape s(F3, {2, 2});
  const MultilinearForm f(s, {0, 1}, {1, 2, 0, 1});
  const MultilinearForm g(s, {0, 1}, {2, 1, 0, 2});  // 2f
  const MultilinearForm h(s, {0}, {1, 1});
  const Variety v(s, {f, MultilinearForm::zero(s), g, h, MultilinearForm(s, {0, 1}, {0, 0, 0, 0})});
  CHECK(v.codim() == 2);
  CHECK(members(v) == members(Variety(s, {f, h})));
}

TEST_CASE("members and density agree with the brute-force oracle") {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = trial % 2 ? F3 : F2;
    const auto k = 1 + rng.below(3);
    const auto shape = random_shape(rng, p, k, 6);
    const auto v = random_variety(rng, shape, rng.below(4));
    const auto bits = oracle::member_bits(v);
    CHECK(members(v) == from_bits(shape, bits));
    CHECK(density(v) == ExactDensity::fraction(p, oracle::point_count(v), shape.total_dim()));
  }
}

TEST_CASE("slice density matches fiber counts, and slices never add forms") {
  Rng rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = trial % 2 ? F3 : F2;
    const auto shape = random_shape(rng, p, 2 + rng.below(2), 5);
    const auto v = random_variety(rng, shape, 1 + rng.below(3));
    const auto bits = oracle::member_bits(v);
    std::vector<std::size_t> fixed;
    for (std::size_t i = 0; i < shape.arity(); ++i)
      if (rng.below(2)) fixed.push_back(i);
    if (fixed.empty() || fixed.size() == shape.arity()) fixed = {0};
    std::vector<FieldVec> values;
    for (auto i : fixed) values.push_back(rng.vec(p, shape.dim(i)));
    const auto u = slice_variety(v, fixed, values);
    CHECK(u.codim() <= v.codim());
    std::uint64_t fiber = 0;
    for (std::uint64_t z = 0; z < shape.point_count(); ++z) {
      const auto x = shape.point_at(z);
      bool match = true;
      for (std::size_t j = 0; j < fixed.size(); ++j) match = match && x[fixed[j]] == values[j];
      if (match && bits[z]) ++fiber;
    }
    CHECK(density(u) == ExactDensity::fraction(p, fiber, u.shape().total_dim()));
  }
}

TEST_CASE("intersect is idempotent and commutative on point sets") {
  Rng rng(57);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = trial % 2 ? F3 : F2;
    const auto shape = random_shape(rng, p, 2 + rng.below(2), 5);
    const auto a = random_variety(rng, shape, rng.below(3));
    const auto b = random_variety(rng, shape, rng.below(3));
    CHECK(members(intersect(a, a)) == members(a));
    CHECK(members(intersect(a, b)) == members(intersect(b, a)));
    auto both = members(a);
    const auto mb = members(b);
    for (std::uint64_t z = 0; z < shape.point_count(); ++z)
      if (!mb.contains(z)) both.erase(z);
    CHECK(members(intersect(a, b)) == both);
  }
}

TEST_CASE("directional_conv") {
  const Shape s(F2, {3});
  PointSet everything(s);
  for (std::uint64_t z = 0; z < 8; ++z) everything.insert(z);
  CHECK(directional_conv(everything, 0, s.point_at(5)) == ExactDensity::one(F2));
  // U = {x : x_1 = 0}
  const auto u = members(Variety(s, {MultilinearForm(s, {0}, {1, 0, 0})}));
  CHECK(directional_conv(u, 0, Point{FieldVec(F2, {0, 1, 1})}).to_string() == "1/2");
  CHECK(directional_conv(u, 0, Point{FieldVec(F2, {1, 1, 0})}).is_zero());
}

TEST_CASE("iterated convolution positivity matches the oracle") {
  Rng rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = trial % 2 ? F3 : F2;
    const auto shape = random_shape(rng, p, 1 + rng.below(3), 5);
    PointSet s(shape);
    std::vector<bool> bits(shape.point_count());
    for (std::uint64_t z = 0; z < bits.size(); ++z)
      if (rng.below(3) != 0) {
        bits[z] = true;
        s.insert(z);
      }
    const auto conv = oracle::iterated_conv(shape, bits);
    const ConvolutionTables tables(s);
    for (std::uint64_t z = 0; z < bits.size(); ++z) {
      CHECK(tables.positive(z) == (conv[z] > 0));
      const auto w = tables.witness(z);
      CHECK(w.has_value() == (conv[z] > 0));
      if (w) CHECK(check_witness(shape, *w, s));
    }
  }
}

TEST_CASE("iterated_conv_witness") {
  const Shape s(F2, {2, 2});
  const Variety full(s);
  const PointSet none(s);
  const auto w = iterated_conv_witness(full, none, s.point_at(13));
  REQUIRE(w.has_value());
  for (const auto& level : w->offsets)
    for (auto o : level) CHECK(o == 0);
  CHECK(w->is_flat());

  const Shape line(F2, {3});
  const Variety sub(line, {MultilinearForm(line, {0}, {1, 1, 0})});
  const auto inside = members(sub);
  for (auto x : inside.indices()) {
    const auto wx = iterated_conv_witness(sub, PointSet(line), line.point_at(x));
    REQUIRE(wx.has_value());
    CHECK(inside.contains(wx->corners[0]));
    CHECK(inside.contains(wx->corners[1]));
  }

  // W = {x_1 y_1 = 0} with one bad point; every x in W keeps a witness.
  const auto v = xy_zero(2);
  const auto mv = members(v);
  PointSet bad(v.shape());
  bad.insert(mv.indices().back());
  for (auto x : mv.indices()) {
    const auto wx = iterated_conv_witness(v, bad, v.shape().point_at(x));
    REQUIRE(wx.has_value());
    for (auto c : wx->corners) {
      CHECK(mv.contains(c));
      CHECK_FALSE(bad.contains(c));
    }
  }
  PointSet outside(v.shape());
  outside.insert(15);  // ((1,1),(1,1)) is not in W
  CHECK_THROWS_AS(iterated_conv_witness(v, outside, v.shape().point_at(0)), PreconditionError);
}

TEST_CASE("conv_fill_check") {
  const Shape s(F2, {3});
  const Variety full(s);
  const auto empty_bad = conv_fill_check(full, PointSet(s));
  CHECK(empty_bad.success);
  CHECK(empty_bad.points_checked == 8);
  PointSet two(s);
  two.insert(3);
  two.insert(6);
  const auto r = conv_fill_check(full, two);
  CHECK(r.success);
  CHECK(r.witnesses.size() == 8);
  PointSet three = two;
  three.insert(1);
  CHECK_THROWS_AS(conv_fill_check(full, three), PreconditionError);
}

TEST_CASE("conv_fill_check succeeds whenever the size hypothesis holds") {
  Rng rng(61);
  int nontrivial = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = trial % 2 ? F3 : F2;
    const auto shape = random_shape(rng, p, 1 + rng.below(2), 7);
    const auto w = random_variety(rng, shape, rng.below(2));
    const auto mw = members(w);
    const auto pts = mw.indices();
    PointSet bad(shape);
    for (auto x : pts) {
      if (rng.below(4) != 0) continue;
      bad.insert(x);
      if (!conv_fill_hypothesis(shape, bad.count(), w.codim())) {
        bad.erase(x);
        break;
      }
    }
    nontrivial += bad.count() > 0;
    const auto r = conv_fill_check(w, bad);
    CHECK(r.success);
    CHECK(r.witnesses.size() == pts.size());
    for (const auto& wit : r.witnesses) {
      CHECK(check_witness(shape, wit, mw));
      for (auto c : wit.corners) CHECK_FALSE(bad.contains(c));
    }
  }
  CHECK(nontrivial > 10);
}
