#include <doctest.h>

#include "mlv/density.hpp"
#include "mlv/errors.hpp"

using namespace mlv;

TEST_CASE("exact density normalization and arithmetic") {
  const PrimeModulus f2(2), f3(3);
  const auto a = ExactDensity::fraction(f2, 12, 4);  // 12/16 = 3/4
  CHECK(a.numerator() == 3);
  CHECK(a.log_p_denominator() == 2);
  CHECK(a.to_string() == "3/4");
  CHECK(ExactDensity::parse(f2, "3/4") == a);
  CHECK(ExactDensity::parse(f2, "6/8") == a);
  CHECK_THROWS_AS(ExactDensity::parse(f2, "1/3"), ParseError);
  CHECK_THROWS_AS(ExactDensity::parse(f2, "x"), ParseError);
  CHECK(a * a == ExactDensity::parse(f2, "9/16"));
  CHECK(ExactDensity::parse(f2, "1/4") + ExactDensity::parse(f2, "1/2") == a);
  CHECK(ExactDensity::parse(f3, "1/3") < ExactDensity::parse(f3, "4/9"));
  CHECK(ExactDensity::zero(f3).is_zero());
  CHECK(ExactDensity::one(f3).to_double() == 1.0);
}

TEST_CASE("ceil and floor of logarithms are exact") {
  const PrimeModulus f2(2), f3(3);
  CHECK(ceil_log_p_inverse(ExactDensity::parse(f2, "1/4")) == 2);
  CHECK(ceil_log_p_inverse(ExactDensity::parse(f2, "3/4")) == 1);
  CHECK(ceil_log_p_inverse(ExactDensity::one(f2)) == 0);
  CHECK(ceil_log_p_inverse(ExactDensity::parse(f3, "1/27")) == 3);
  CHECK(ceil_log_p_inverse(ExactDensity::parse(f3, "2/27")) == 3);
  CHECK(ceil_log_p_inverse(ExactDensity::parse(f3, "10/27")) == 1);
  const auto c = ExactDensity::parse(f2, "1/4");
  CHECK(floor_log_p(PowerMonomial{0, 2, -1}, c) == 4);
  CHECK(floor_log_p(PowerMonomial{-1, 0, 0}, c) == -1);
  CHECK(floor_log_p(PowerMonomial{-3, 0, 5}, c) == -13);
}

TEST_CASE("compare agrees with brute-force rational comparison") {
  const PrimeModulus f3(3);
  const auto c = ExactDensity::parse(f3, "5/27");
  // m(c) = 2^-1 3^2 (5/27)^1 = 45/54 = 5/6
  const PowerMonomial m{-1, 2, 1};
  CHECK(compare(5, -1, m, c) > 0);    // 5/3 > 5/6
  CHECK(compare(5, -2, m, c) < 0);    // 5/9 < 5/6
  CHECK(compare(0, 0, m, c) < 0);
  const auto e = ExactDensity::parse(f3, "1/9");
  CHECK(compare(1, 0, PowerMonomial{0, 2, 1}, e) == 0);
}
