#include "support.hpp"

#include "germkit/core.hpp"

using namespace germkit;

TEST_CASE("rationals are reduced") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(to_string(parse_rational("-10/4")) == "-5/2");
  CHECK(to_string(parse_rational("7")) == "7");
  CHECK(floor_q(Rational(-1, 3)) == -1);
  CHECK(is_dyadic(Rational(3, 8)));
  CHECK_FALSE(is_dyadic(Rational(1, 3)));
  CHECK(val2(Rational(12, 5)) == 2);
  CHECK(val2(Rational(5, 8)) == -3);
}

TEST_CASE("dyadic canonical form") {
  Dyadic d = parse_dyadic("13/2^5");
  CHECK(d.value() == Rational(13, 32));
  Dyadic e = Dyadic::from_rational(Rational(6, 8));
  CHECK(e.num == 3);
  CHECK(e.exp == 2);
  CHECK(to_string(e) == to_string(parse_dyadic(to_string(e))));
  CHECK(testing::error_kind([] { Dyadic::from_rational(Rational(1, 3)); }) != "");
}

TEST_CASE("points canonicalize") {
  CHECK(to_string(parse_point("0.01(01)", 2)) == "0.(01)");
  CHECK(to_string(parse_point("0.(1010)", 2)) == "0.(10)");
  CHECK(to_string(parse_point("0.001(1)", 2)) == "0.00(1)");
  CHECK(to_string(parse_point("0.1(0)", 2)) == "0.1(0)");
  CHECK(testing::error_kind([] { parse_point("0.2(1)", 2); }) == "ParseError");
  CHECK(testing::error_kind([] { parse_point("0.1", 2); }) == "ParseError");
}

TEST_CASE("canonicalize is idempotent and preserves the point") {
  auto rng = testing::rng(11);
  for (int i = 0; i < 500; ++i) {
    int d = 2 + (int)(rng() % 3);
    Word pre, period;
    for (int k = (int)(rng() % 6); k > 0; --k)
      pre += char(rng() % d);
    for (int k = 1 + (int)(rng() % 6); k > 0; --k)
      period += char(rng() % d);
    RationalPoint raw{0, pre, period};
    RationalPoint c = canonicalize_point(0, pre, period, d);
    CHECK(canonicalize_point(c, d) == c);
    for (std::size_t n = 0; n < 40; ++n)
      REQUIRE(c.letter(n) == raw.letter(n));
    CHECK(primitive_root(c.period) == c.period);
    CHECK(parse_point(to_string(c), d) == c);
  }
}

TEST_CASE("tail class is invariant under prefix replacement") {
  auto rng = testing::rng(12);
  for (int i = 0; i < 300; ++i) {
    RationalPoint p = gen::random_point(rng, 2, 1, 5, 4);
    RootedWord gamma{0, p.unroll(rng() % 6)};
    Word delta;
    for (int k = (int)(rng() % 5); k > 0; --k)
      delta += char(rng() % 2);
    RationalPoint q = apply_prefix_replacement(p, gamma, {0, delta}, 2);
    CHECK(tail_class(q) == tail_class(p));
  }
}

TEST_CASE("binary expansions") {
  CHECK(to_string(rational_to_point(Rational(1, 3))) == "0.(01)");
  CHECK(to_string(rational_to_point(Rational(5, 7))) == "0.(101)");
  CHECK(to_string(rational_to_point(Rational(1, 2))) == "0.1(0)");
  auto rng = testing::rng(13);
  for (int i = 0; i < 300; ++i) {
    Rational q = gen::random_circle_point(rng);
    CHECK(point_to_rational(rational_to_point(q)) == q);
  }
}

TEST_CASE("lexicographic order agrees with unrolled prefixes") {
  auto rng = testing::rng(14);
  for (int i = 0; i < 300; ++i) {
    auto p = gen::random_point(rng, 3), q = gen::random_point(rng, 3);
    Word a = p.unroll(64), b = q.unroll(64);
    Order want = a < b ? Order::LT : (a == b ? Order::EQ : Order::GT);
    CHECK(compare_lex(p, q) == want);
  }
}

TEST_CASE("least rotation and primitive root") {
  CHECK(word_to_digits(least_rotation(word_from_digits("101", 2))) == "011");
  CHECK(word_to_digits(primitive_root(word_from_digits("0101", 2))) == "01");
  CHECK(tail_class(parse_point("0.1(10)", 2)) == tail_class(parse_point("0.(01)", 2)));
}
