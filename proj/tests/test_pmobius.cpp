#include "support.hpp"

#include "oracles.hpp"

using namespace germkit;

namespace {

Rational small(gen::Rng &rng, long lo, long hi, long den) {
  return make_rational(lo * den + (long)(rng() % (unsigned long)((hi - lo) * den)), den);
}

PProjMap random_pm(gen::Rng &rng, bool affine) {
  PProjMap f;
  for (int k = 1 + (int)(rng() % 2); k > 0; --k) {
    Rational p = small(rng, -3, 2, 4);
    Rational q = p + make_rational(1 + (long)(rng() % 4), 2);
    PProjMap b;
    if (affine) {
      Rational m = (p + q) / 2;
      b = PProjMap::affine_bump(p, m, m + (q - m) * make_rational(1 + (long)(rng() % 3), 4), q);
    } else {
      b = PProjMap::bump(p, q, make_rational(1 + (long)(rng() % 5), 1 + (long)(rng() % 3)));
    }
    f = compose(b, f);
  }
  return f;
}

} // namespace

TEST_CASE("phi of the example map") {
  PProjMap f = parse_pproj(testing::slurp(testing::fixtures() / "valid/phi-example.pm"));
  CHECK(phi_hat(f) == 4);
  CHECK(oracle::derivative_jump_product(f) == 4);
  CHECK(parse_pproj(to_string(f)) == f);
}

TEST_CASE("phi is a homomorphism") {
  auto rng = testing::rng(81);
  for (int i = 0; i < 200; ++i) {
    PProjMap f = random_pm(rng, false), g = random_pm(rng, false);
    CHECK(phi_hat(compose(f, g)) == phi_hat(f) * phi_hat(g));
    CHECK(phi_hat(f) == oracle::derivative_jump_product(f));
    Rational t = small(rng, -4, 4, 7);
    CHECK(compose(f, g).eval(t) == f.eval(g.eval(t)));
    CHECK(invert(f).eval(f.eval(t)) == t);
  }
}

TEST_CASE("phi is trivial on piecewise-affine maps") {
  auto rng = testing::rng(82);
  for (int i = 0; i < 50; ++i)
    CHECK(phi_hat(random_pm(rng, true)) == 1);
  CHECK(phi_hat(PProjMap::identity()) == 1);
}

TEST_CASE("bumps fix their endpoints") {
  PProjMap b = PProjMap::bump(0, 1, 3);
  CHECK(b.eval(0) == 0);
  CHECK(b.eval(1) == 1);
  CHECK(b.eval(Rational(1, 2)) == Rational(3, 4));
  CHECK(b.eval(5) == 5);
  CHECK(testing::error_kind([] { parse_pproj("PM[N=2]{ [0,1]: (1,0,-2,1) }"); }) == "InvalidElement");
}
