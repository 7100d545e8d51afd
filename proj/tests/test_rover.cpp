#include "support.hpp"

#include <set>

#include "germkit/rover.hpp"

using namespace germkit;

namespace {

RNElement fixture(const char *name) {
  return parse_rn(testing::slurp(testing::fixtures() / "automata" / name));
}

const RationalPoint kOne = RationalPoint{0, "", std::string(1, char(1))};

} // namespace

TEST_CASE("Roever generators") {
  RNElement b = fixture("roever-b.rn"), c = fixture("roever-c.rn"), d = fixture("roever-d.rn");
  CHECK(sing(b) == std::vector<RationalPoint>{kOne});
  for (const auto *g : {&b, &c, &d}) {
    CHECK(g->evaluate(kOne) == kOne);
    CHECK(germ_order(*g, kOne, 8) == 2);
    CHECK(compose(*g, *g).is_identity());
  }
  CHECK(germ_equal(compose(b, c), d, kOne));
  CHECK_FALSE(germ_equal(b, c, kOne));
  CHECK_FALSE(germ_trivial(b, kOne));
}

TEST_CASE("t permutes the germs of b, c, d") {
  RNElement b = fixture("roever-b.rn"), c = fixture("roever-c.rn"), d = fixture("roever-d.rn");
  RNElement t = fixture("roever-t.rn"), ti = invert(t);
  CHECK(t.evaluate(kOne) == kOne);
  auto conj = [&](const RNElement &g) { return compose(t, compose(g, ti)); };
  CHECK(germ_equal(conj(b), d, kOne));
  CHECK(germ_equal(conj(d), c, kOne));
  CHECK(germ_equal(conj(c), b, kOne));
  CHECK(to_string(conj(b)) == "RN[d=2,r=1; SS=grigorchuk]{ 0->10 : 1; 10->0 : 1; 11->11 : c }");
}

TEST_CASE("local fixer agrees near the point") {
  RNElement f = parse_rn("RN[d=2,r=1; SS=grigorchuk]{ 0->0 : b; 1->1 : b }");
  LocalFixer lf = local_fixer(f, kOne);
  CHECK(to_string(lf.element) == "RN[d=2,r=1; SS=grigorchuk]{ e->e : d }");
  CHECK(to_string(lf.neighborhood, 1) == "1");
  auto rng = testing::rng(51);
  for (int i = 0; i < 50; ++i) {
    RationalPoint x = gen::random_point(rng).prepend(lf.neighborhood);
    x = canonicalize_point(x, 2);
    CHECK(lf.element.evaluate(x) == f.evaluate(x));
  }
}

TEST_CASE("RN group laws") {
  AutomatonRef g = resolve_automaton("grigorchuk");
  auto rng = testing::rng(52);
  for (int i = 0; i < 150; ++i) {
    RNElement f = gen::random_rn(rng, g), h = gen::random_rn(rng, g);
    CHECK(compose(f, invert(f)).is_identity());
    RationalPoint x = gen::random_point(rng);
    CHECK(compose(f, h).evaluate(x) == f.evaluate(h.evaluate(x)));
    CHECK(invert(f).evaluate(f.evaluate(x)) == x);
  }
}

TEST_CASE("RN round trip") {
  AutomatonRef g = resolve_automaton("grigorchuk");
  auto rng = testing::rng(53);
  for (int i = 0; i < 1000; ++i) {
    RNElement f = gen::random_rn(rng, g);
    REQUIRE(parse_rn(to_string(f)) == f);
  }
}

TEST_CASE("sing containment in the Roever group") {
  AutomatonRef g = resolve_automaton("grigorchuk");
  auto rng = testing::rng(54);
  for (int i = 0; i < 200; ++i) {
    RNElement k = gen::random_rn(rng, g), h = gen::random_rn(rng, g);
    std::set<RationalPoint> allowed;
    RNElement hi = invert(h);
    for (const auto &p : sing(k))
      allowed.insert(hi.evaluate(p));
    for (const auto &p : sing(h))
      allowed.insert(p);
    for (const auto &p : sing(compose(k, h)))
      CHECK(allowed.count(p));
  }
}

TEST_CASE("automata resolve from files and names") {
  CHECK(resolve_automaton("grigorchuk") == resolve_automaton("grigorchuk"));
  AutomatonRef f = resolve_automaton((testing::fixtures() / "automata/grigorchuk.ss").string());
  CHECK(f->size() == 5);
  CHECK(testing::error_kind([] { parse_rn("RN[d=2,r=1; SS=grigorchuk]{ 0->0 : b }"); }) == "InvalidElement");
  CHECK(testing::error_kind([] { resolve_automaton("no-such-automaton"); }) != "");
}
