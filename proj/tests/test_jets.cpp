#include "support.hpp"

#include "oracles.hpp"

using namespace germkit;

namespace {

Jet random_tangent(gen::Rng &rng, int r) {
  std::vector<Rational> c{Rational(1)};
  for (int i = 2; i <= r; ++i)
    c.push_back(make_rational((long)(rng() % 11) - 5, 1 + (long)(rng() % 4)));
  return Jet(c);
}

Jet random_jet(gen::Rng &rng, int r) {
  Jet j = random_tangent(rng, r);
  std::vector<Rational> c = j.coeffs();
  c[0] = make_rational(1 + (long)(rng() % 5), 1 + (long)(rng() % 3));
  return Jet(c);
}

} // namespace

TEST_CASE("conjugator of x + x^2") {
  Jet k = solve_conjugacy(Jet({1, 1, 0}));
  CHECK(k.a(2) == 1);
  CHECK(k.a(3) == Rational(2, 3));
  CHECK(to_string(k) == "J[r=3]{ 1, 1, 2/3 }");
  CHECK(parse_jet(testing::slurp(testing::fixtures() / "valid/h.jet")) == Jet({1, 1, 0}));
}

TEST_CASE("conjugacy identity at degree 10") {
  auto rng = testing::rng(71);
  const int r = 10;
  oracle::Series g(r + 1, Rational(0)), gi(r + 1, Rational(0));
  g[1] = 2;
  gi[1] = Rational(1, 2);
  for (int i = 0; i < 20; ++i) {
    Jet h = random_tangent(rng, r);
    Jet k = solve_conjugacy(h);
    auto lhs = oracle::compose(oracle::series(k), oracle::series(h), r);
    auto rhs = oracle::compose(gi, oracle::compose(oracle::series(k), g, r), r);
    CHECK(lhs == rhs);
    CHECK(k.a(1) == 1);
  }
}

TEST_CASE("composition agrees with series substitution") {
  auto rng = testing::rng(72);
  for (int i = 0; i < 100; ++i) {
    int r = 1 + (int)(rng() % 8);
    Jet f = random_jet(rng, r), g = random_jet(rng, r);
    auto want = oracle::compose(oracle::series(f), oracle::series(g), r);
    CHECK(oracle::series(compose(f, g)) == want);
    CHECK(compose(f, invert(f)) == Jet::identity(r));
    CHECK(parse_jet(to_string(f)) == f);
  }
}

TEST_CASE("derived subgroup") {
  auto rng = testing::rng(73);
  for (int i = 0; i < 50; ++i) {
    Jet f = random_jet(rng, 5), g = random_jet(rng, 5);
    CHECK(is_in_derived(commutator(f, g)));
  }
  CHECK_FALSE(is_in_derived(Jet::linear(4, 2)));
  CHECK(is_in_derived(Jet::identity(4)));
  CHECK(testing::error_kind([] { Jet({Rational(-1), Rational(0)}); }) == "InvalidElement");
}
