#include "support.hpp"

#include "germkit/germtheory.hpp"
#include "germkit/plmap.hpp"

using namespace germkit;

namespace {

Rational random_real(gen::Rng &rng, long lo, long hi) {
  long den = 1 + (long)(rng() % 24);
  long num = lo * den + (long)(rng() % (unsigned long)((hi - lo) * den + 1));
  return make_rational(num, den);
}

} // namespace

TEST_CASE("affine pieces need power-of-two slopes") {
  AffinePiece p = affine_from_intervals(0, Rational(1, 2), Rational(1, 4), Rational(1, 2));
  CHECK(p.slope_exp == -1);
  CHECK(p.eval(Rational(1, 2)) == Rational(1, 2));
  CHECK(testing::error_kind([] { affine_from_intervals(0, 1, 0, 3); }) == "InvalidElement");
}

TEST_CASE("Tbar group laws") {
  auto rng = testing::rng(21);
  for (int i = 0; i < 100; ++i) {
    TbarElement f = gen::random_tbar(rng), g = gen::random_tbar(rng);
    CHECK(compose(f, invert(f)) == TbarElement::identity());
    Rational t = random_real(rng, -2, 2);
    CHECK(compose(f, g).eval(t) == f.eval(g.eval(t)));
    CHECK(f.eval(t + 1) == f.eval(t) + 1);
    CHECK(shift(f, 3).eval(t) == f.eval(t) + 3);
    CHECK(f.eval_inverse(f.eval(t)) == t);
    TbarElement m = mod_translations(f);
    Rational diff = m.eval(0) - f.eval(0);
    CHECK(diff.get_den() == 1);
    CHECK(m.eval(0) >= 0);
    CHECK(m.eval(0) < 1);
    CHECK(parse_tbar(to_string(f)) == f);
  }
}

TEST_CASE("Tbar generators") {
  auto gens = tbar_generators();
  REQUIRE(gens.size() == 4);
  CHECK(compose(gens[0], gens[1]) == TbarElement::identity());
  CHECK(compose(gens[2], gens[3]) == TbarElement::identity());
  CHECK(TbarElement::translation(2).is_translation());
  CHECK_FALSE(gens[0].is_translation());
}

TEST_CASE("Thompson T on the circle") {
  auto rng = testing::rng(22);
  for (int i = 0; i < 100; ++i) {
    PLCircleMap f = gen::random_t(rng), g = gen::random_t(rng);
    CHECK(is_in_T(f));
    CHECK(compose(f, invert(f)).is_identity());
    Rational t = gen::random_circle_point(rng);
    CHECK(compose(f, g).eval(t) == f.eval(g.eval(t)));
    CHECK(parse_circle_map(to_string(f)) == f);
  }
  CHECK(PLCircleMap::rotation(Rational(1, 4)).eval(Rational(7, 8)) == Rational(1, 8));
}

TEST_CASE("circle maps with rational breakpoints") {
  PLCircleMap f0 = example2_f0();
  CHECK_FALSE(is_in_T(f0));
  CHECK(f0.eval(Rational(2, 3)) == Rational(1, 3));
  CHECK(f0.slope_exponents_at(Rational(2, 3)) == std::pair<long, long>{-1, 1});
  CHECK(parse_circle_map(to_string(f0)) == f0);
  CHECK(parse_circle_map(testing::slurp(testing::fixtures() / "valid/f0.t")) == f0);
}

TEST_CASE("TA agrees with its circle map") {
  auto rng = testing::rng(23);
  for (int i = 0; i < 60; ++i) {
    PLCircleMap c = gen::random_t(rng);
    TAElement f = TAElement::from_circle(c);
    CHECK(is_in_T(f));
    CHECK(to_circle_map(f) == c);
    Rational t = gen::random_circle_point(rng);
    CHECK(f.eval(t) == c.eval(t));
  }
}

TEST_CASE("TA group laws and round trip") {
  auto rng = testing::rng(24);
  for (int i = 0; i < 60; ++i) {
    TAElement f = gen::random_ta(rng), g = gen::random_ta(rng);
    CHECK(compose(f, invert(f)).is_identity());
    Rational t = gen::random_circle_point(rng);
    CHECK(compose(f, g).eval(t) == f.eval(g.eval(t)));
    CHECK(parse_ta(to_string(f)) == f);
    for (const auto &p : sing(f))
      CHECK(is_dyadic(p));
  }
}

TEST_CASE("TA fixtures") {
  TAElement f = parse_ta(testing::slurp(testing::fixtures() / "valid/spiral-half.ta"));
  CHECK(sing(f) == std::vector<Rational>{Rational(1, 2)});
  CHECK_FALSE(is_in_T(f));
  CHECK(f.eval(Rational(1, 2)) == Rational(1, 2));
  auto [below, above] = germ_tbar_pair(f, Rational(1, 2));
  CHECK(below.is_translation());
  CHECK_FALSE(above.is_translation());
  TAElement x0 = parse_ta(testing::slurp(testing::fixtures() / "valid/x0.ta"));
  CHECK(is_in_T(x0));
  CHECK(sing(x0).empty());
  CHECK(x0.eval(Rational(1, 2)) == Rational(1, 4));
  CHECK(above_point(Rational(1, 2)) == parse_point("0.1(0)", 2));
  CHECK(below_point(Rational(1, 2)) == parse_point("0.0(1)", 2));
}

TEST_CASE("A elements") {
  auto rng = testing::rng(25);
  for (int i = 0; i < 40; ++i) {
    TbarElement f = gen::random_tbar(rng), g = gen::random_tbar(rng);
    AElement a = AElement::from_tbar(f), b = AElement::from_tbar(g);
    Rational t = random_real(rng, -3, 3);
    CHECK(a.eval(t) == f.eval(t));
    CHECK(compose(a, b).eval(t) == f.eval(g.eval(t)));
    CHECK(compose(a, invert(a)) == AElement());
    CHECK(a.eval_inverse(a.eval(t)) == t);
  }
}
