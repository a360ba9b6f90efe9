#include <doctest.h>

#include "mlv/construct.hpp"
#include "mlv/errors.hpp"
#include "mlv/generate.hpp"
#include "mlv/harness.hpp"
#include "mlv/io.hpp"

using namespace mlv;

namespace {
const PrimeModulus F2(2), F3(3);
}

TEST_CASE("tensor format") {
  const Shape s(F3, {2, 1, 2});
  const MultilinearForm f(s, {0, 2}, {1, 2, 0, 1});
  const auto j = form_to_json(f);
  CHECK(j.at("support") == json::array({1, 3}));
  CHECK(j.at("k") == 3);
  CHECK(form_from_json(j) == f);
  CHECK(dump(form_to_json(form_from_json(j))) == dump(j));

  const auto text = R"({"p":2,"k":2,"dims":[1,1],"support":[1,2],"coeffs":[1]})";
  CHECK(form_from_json(parse_json(text)) == MultilinearForm(Shape(F2, {1, 1}), {0, 1}, {1}));
  CHECK_THROWS_AS(form_from_json(parse_json(R"({"p":2,"dims":[1],"support":[1],"coeffs":[2]})")), ParseError);
  CHECK_THROWS_AS(form_from_json(parse_json(R"({"p":2,"dims":[1],"support":[2],"coeffs":[1]})")), ParseError);
  CHECK_THROWS_AS(form_from_json(parse_json(R"({"p":4,"dims":[1],"support":[1],"coeffs":[1]})")), ParseError);
  CHECK_THROWS_AS(form_from_json(parse_json(R"({"p":2,"k":2,"dims":[1],"support":[1],"coeffs":[1]})")), ParseError);
  CHECK_THROWS_AS(form_from_json(parse_json(R"({"p":2,"dims":[2],"support":[1],"coeffs":[1]})")), ParseError);
  CHECK_THROWS_AS(parse_json("{"), ParseError);
}

TEST_CASE("variety, map and point set formats round-trip") {
  Rng rng(91);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = trial % 2 ? F3 : F2;
    const Shape s(p, {1 + rng.below(2), 1 + rng.below(2), 1 + rng.below(2)});
    const auto v = random_variety(rng, s, rng.below(4));
    const auto j = variety_to_json(v);
    CHECK(variety_from_json(j) == v);
    CHECK(dump(variety_to_json(variety_from_json(parse_json(dump(j))))) == dump(j));

    const MultilinearMap m(s, {0, 1, 2}, {random_form(rng, s, {0, 1, 2}), random_form(rng, s, {0, 1, 2})});
    const auto back = map_from_json(map_to_json(m));
    CHECK(back.components() == m.components());

    const auto ps = members(v);
    CHECK(point_set_from_json(point_set_to_json(ps)) == ps);
  }
  const auto e = Variety::empty(Shape(F2, {2}));
  CHECK(variety_to_json(e).at("empty") == true);
  CHECK(variety_from_json(variety_to_json(e)).is_empty_marker());
}

TEST_CASE("certificate round-trips exactly") {
  Rng rng(93);
  for (int trial = 0; trial < 10; ++trial) {
    const Shape s(F2, {2, 1 + rng.below(2), 1 + rng.below(2)});
    const auto v = random_variety(rng, s, 1 + rng.below(2));
    const auto cert = find_subvariety(v);
    RunConfig config{.command = "find-sub", .seed = 5, .p = 2, .dims = s.dims(), .rng = kRngId};
    const auto text = dump(certificate_to_json(cert, config));
    const auto back = certificate_from_json(parse_json(text));
    CHECK(dump(certificate_to_json(back, config)) == text);
    CHECK(back.output == cert.output);
    CHECK(back.ledger.size() == cert.ledger.size());
    CHECK(verify_certificate(v, back).all());
    CHECK(run_config_from_json(parse_json(text).at("config")).dims == s.dims());
  }
}

TEST_CASE("densities serialize as exact fractions") {
  const auto d = ExactDensity::parse(F3, "5/27");
  CHECK(density_to_json(d) == "5/27");
  CHECK(density_from_json(F3, density_to_json(d)) == d);
}
