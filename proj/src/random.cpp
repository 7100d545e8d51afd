#include "germkit/random.hpp"

#include <algorithm>

#include "germkit/germtheory.hpp"

namespace germkit::gen {

namespace {

int uniform(Rng &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Word random_word(Rng &rng, int d, int len) {
  Word w;
  for (int i = 0; i < len; ++i)
    w += char(uniform(rng, 0, d - 1));
  return w;
}

// complete antichain obtained by splitting random leaves
std::vector<RootedWord> random_antichain(Rng &rng, int d, int r, int splits) {
  std::vector<RootedWord> leaves;
  for (int i = 0; i < r; ++i)
    leaves.push_back({i, ""});
  for (int s = 0; s < splits; ++s) {
    std::size_t k = uniform(rng, 0, (int)leaves.size() - 1);
    RootedWord w = leaves[k];
    leaves.erase(leaves.begin() + k);
    for (int x = 0; x < d; ++x)
      leaves.push_back(w.child(x));
  }
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

} // namespace

RationalPoint random_point(Rng &rng, int d, int r, int max_pre, int max_period) {
  Word pre = random_word(rng, d, uniform(rng, 0, max_pre));
  Word per = random_word(rng, d, uniform(rng, 1, max_period));
  return canonicalize_point(uniform(rng, 0, r - 1), pre, per, d);
}

RationalPoint random_spiral_point(Rng &rng, int d, int max_base) {
  Word base = random_word(rng, d, uniform(rng, 0, max_base));
  int t = uniform(rng, 0, 1) ? d - 1 : 0;
  return canonicalize_point(0, base, Word(1, char(t)), d);
}

Rational random_circle_point(Rng &rng, int max_pre, int max_period) {
  Rational t = point_to_rational(random_point(rng, 2, 1, max_pre, max_period));
  return t == 1 ? Rational(0) : t;
}

VElement random_v(Rng &rng, int d, int r, int splits) {
  auto dom = random_antichain(rng, d, r, splits);
  auto ran = random_antichain(rng, d, r, splits);
  std::shuffle(ran.begin(), ran.end(), rng);
  std::vector<PlainRule> rules;
  for (std::size_t i = 0; i < dom.size(); ++i)
    rules.push_back({dom[i], ran[i]});
  return VElement(d, r, rules);
}

PLCircleMap random_t(Rng &rng, int splits) {
  auto dom = random_antichain(rng, 2, 1, splits);
  auto ran = random_antichain(rng, 2, 1, splits);
  std::size_t n = dom.size(), k = uniform(rng, 0, (int)n - 1);
  std::vector<AffinePiece> pieces;
  for (std::size_t i = 0; i < n; ++i) {
    const Word &a = dom[i].letters, &b = ran[(i + k) % n].letters;
    Rational lo = cone_left(a), hi = lo + pow2(-(long)a.size());
    Rational c = cone_left(b), dd = c + pow2(-(long)b.size());
    pieces.push_back(affine_from_intervals(lo, hi, c, dd));
  }
  return PLCircleMap(pieces);
}

TbarElement random_tbar(Rng &rng, int length) {
  auto gens = tbar_generators();
  TbarElement f;
  for (int i = 0; i < length; ++i)
    f = compose(gens[uniform(rng, 0, (int)gens.size() - 1)], f);
  return f;
}

std::vector<GermPrescription> random_prescription(Rng &rng, int max_points) {
  int n = uniform(rng, 1, max_points);
  std::vector<GermPrescription> out;
  while ((int)out.size() < n) {
    RationalPoint p = random_spiral_point(rng);
    bool fresh = std::none_of(out.begin(), out.end(), [&](const auto &g) { return g.point == p; });
    if (!fresh)
      continue;
    TbarElement f = mod_translations(random_tbar(rng, uniform(rng, 1, 4)));
    if (f.is_translation())
      continue;
    out.push_back({p, f});
  }
  return out;
}

VAElement random_va(Rng &rng, int max_spirals, int splits) {
  VAElement f = random_v(rng, 2, 1, splits).as_va();
  int k = uniform(rng, 0, max_spirals);
  if (k > 0)
    f = compose(f, realize_portrait(random_prescription(rng, k)));
  return compose(f, random_v(rng, 2, 1, splits).as_va());
}

TAElement random_ta(Rng &rng, int max_spirals, int splits) {
  TAElement f = TAElement::from_circle(random_t(rng, splits));
  int k = uniform(rng, 0, max_spirals);
  for (int i = 0; i < k; ++i) {
    Rational p = point_to_rational(random_point(rng, 2, 1, 4, 1));
    p -= Rational(floor_q(p));
    RationalPoint side = uniform(rng, 0, 1) ? above_point(p) : below_point(p);
    TbarElement germ = random_tbar(rng, uniform(rng, 1, 3));
    f = compose(f, TAElement(elementary_from_tbar(side, germ)));
  }
  return compose(f, TAElement::from_circle(random_t(rng, splits)));
}

PLCircleMap random_example2(Rng &rng, int length, int splits) {
  PLCircleMap f0 = example2_f0(), f0i = invert(f0);
  PLCircleMap g = random_t(rng, splits);
  for (int i = 0; i < length; ++i) {
    g = compose(uniform(rng, 0, 1) ? f0 : f0i, g);
    g = compose(random_t(rng, splits), g);
  }
  return g;
}

RNElement random_rn(Rng &rng, const AutomatonRef &a, int splits, int max_word) {
  VElement v = random_v(rng, a->d(), 1, splits);
  std::vector<int> states;
  for (std::size_t s = 0; s < a->size(); ++s)
    if (!a->acts_trivially((int)s))
      states.push_back((int)s);
  std::vector<RNRule> rules;
  for (const auto &pr : v.rules()) {
    AutomatonWord w;
    int len = states.empty() ? 0 : uniform(rng, 0, max_word);
    for (int i = 0; i < len; ++i)
      w.push_back({states[uniform(rng, 0, (int)states.size() - 1)], uniform(rng, 0, 1) == 1});
    rules.push_back({pr.from, pr.to, w});
  }
  return RNElement(a, 1, rules);
}

VElement random_fix(Rng &rng, const RationalPoint &s, int splits) {
  VElement g = random_v(rng, 2, 1, splits);
  RationalPoint q = g.evaluate(s);
  auto b = transport({q}, {s}, 2, 1);
  if (!b)
    throw internal_error("no transport back to " + to_string(s));
  return compose(*b, g);
}

} // namespace germkit::gen
