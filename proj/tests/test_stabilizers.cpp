#include "support.hpp"

#include "germkit/stabilizers.hpp"

using namespace germkit;

namespace {

RationalPoint pt(const char *s) { return parse_point(s, 2); }

bool fixes_cone_pointwise(const VElement &h, const RootedWord &a, gen::Rng &rng) {
  for (int k = 0; k < 20; ++k) {
    RationalPoint x = canonicalize_point(gen::random_point(rng).prepend(a), 2);
    if (h.evaluate(x) != x)
      return false;
  }
  return true;
}

} // namespace

TEST_CASE("spiral generators") {
  CHECK(to_string(spiral_generator(pt("0.(1)"))) == "V[d=2,r=1]{ 00->0; 01->10; 1->11 }");
  CHECK(to_string(spiral_generator(pt("0.(0)"))) == "V[d=2,r=1]{ 0->00; 10->01; 11->1 }");
  VElement t01 = spiral_generator(pt("0.(01)"));
  CHECK(t01.evaluate(pt("0.(01)")) == pt("0.(01)"));
  CHECK(germ_exponent(t01, pt("0.(01)")) == 1);
  CHECK(to_string(basin(t01, pt("0.(01)")), 1) == "01");
  VElement t = spiral_generator(pt("0.(1)"));
  CHECK(to_string(basin(t, pt("0.(1)")), 1) == "1");
  CHECK(to_string(basin(power(t, 2), pt("0.(1)")), 1) == "1");
  VElement avoid = spiral_generator(pt("0.(1)"), 2, 1, {pt("0.1(0)")});
  CHECK(avoid.evaluate(pt("0.1(0)")) == pt("0.1(0)"));
  CHECK(germ_exponent(avoid, pt("0.(1)")) == 1);
}

TEST_CASE("HNN decomposition of Fix(1bar)") {
  auto rng = testing::rng(91);
  RationalPoint s = pt("0.(1)");
  VElement t = spiral_generator(s);
  RootedWord a = basin(t, s);
  for (int i = 0; i < 50; ++i) {
    VElement g = gen::random_fix(rng, s);
    REQUIRE(g.evaluate(s) == s);
    HNNWitness w = hnn_decompose(g, s, t);
    CHECK(w.i == germ_exponent(g, s));
    CHECK(w.j >= 0);
    VElement back = reassemble(w, t);
    CHECK(back == g);
    for (int k = 0; k < 50; ++k) {
      RationalPoint x = gen::random_point(rng);
      CHECK(back.evaluate(x) == g.evaluate(x));
    }
    CHECK(fixes_cone_pointwise(w.h, a, rng));
  }
  CHECK(hnn_decompose(power(t, 2), s, t).i == 2);
  CHECK(testing::error_kind([&] { hnn_decompose(parse_v("V[d=2,r=1]{ 0->1; 1->0 }"), s, t); }) == "NotFixed");
}

TEST_CASE("HNN chains peel one point at a time") {
  auto rng = testing::rng(92);
  std::vector<RationalPoint> pts{pt("0.(1)"), pt("0.(0)")};
  for (int i = 0; i < 20; ++i) {
    VElement g = compose(gen::random_fix(rng, pts[0]), gen::random_fix(rng, pts[0]));
    if (g.evaluate(pts[1]) != pts[1])
      continue;
    HNNChain ch = hnn_decompose_chain(g, pts);
    REQUIRE(ch.witnesses.size() == 2);
    VElement inner = reassemble(ch.witnesses[1], ch.generators[1]);
    CHECK(inner == ch.witnesses[0].h);
    CHECK(reassemble(ch.witnesses[0], ch.generators[0]) == g);
  }
}

TEST_CASE("ascending HNN structure") {
  auto rng = testing::rng(93);
  RationalPoint s = pt("0.(1)");
  VElement t = spiral_generator(s);
  auto hs = basin_complement_generators(t, s);
  std::vector<VElement> samples;
  for (int i = 0; i < 10; ++i)
    samples.push_back(gen::random_fix(rng, s));
  AscendingReport ok = verify_ascending(t, s, hs, samples);
  CHECK(ok.ok());
  AscendingReport id = verify_ascending(VElement::identity(), s, basin(t, s), hs);
  CHECK_FALSE(id.t_outside_h);
  VElement bad = compose(t, parse_v("V[d=2,r=1]{ 0->10; 10->0; 11->11 }"));
  AscendingReport broken = verify_ascending(bad, s, basin(t, s), hs);
  CHECK_FALSE(broken.conjugates_inside);
}
