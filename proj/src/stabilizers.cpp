#include "germkit/stabilizers.hpp"

#include <algorithm>

namespace germkit {

namespace {

bool identity_on(const VElement &g, const RootedWord &a) {
  auto pieces = g.on_cone(a);
  return pieces.size() == 1 && pieces[0].from == a && pieces[0].to == a;
}

RootedWord relative(const RootedWord &base, const RootedWord &w) {
  return base.extend(w.letters);
}

} // namespace

VElement spiral_generator(const RationalPoint &s0, int d, int r,
                          const std::vector<RationalPoint> &avoid) {
  RationalPoint s = canonicalize_point(s0, d);
  RootedWord p{s.root, ""};
  for (std::size_t m = 0;; ++m) {
    p = {s.root, s.unroll(m)};
    bool clear = true;
    for (const auto &x : avoid)
      if (x != s && x.in_cone(p))
        clear = false;
    if (clear)
      break;
    if (m > 4096)
      throw Error("DomainError", "avoided points accumulate at " + to_string(s, r));
  }
  RationalPoint psi = canonicalize_point(s.drop(p.size()), d);
  Word alpha = psi.pre;
  if (alpha.empty())
    alpha = psi.period;
  Word image = alpha + psi.period;
  auto paired = pair_cones(cone_complement({{0, alpha}}, d, 1), cone_complement({{0, image}}, d, 1), d);
  if (!paired)
    throw internal_error("spiral generator complements do not pair");
  std::vector<PlainRule> rules;
  for (const auto &c : cone_complement({p}, d, r))
    rules.push_back({c, c});
  rules.push_back({p.extend(alpha), p.extend(image)});
  for (const auto &pr : *paired)
    rules.push_back({relative(p, pr.from), relative(p, pr.to)});
  return VElement(d, r, rules);
}

RootedWord basin(const VElement &t, const RationalPoint &s) {
  if (t.evaluate(s) != s)
    throw not_fixed(to_string(s, t.r()) + " is not fixed");
  std::size_t limit = 4 * (s.pre.size() + s.period.size()) + 256;
  for (std::size_t m = 0; m <= limit; ++m) {
    RootedWord a{s.root, s.unroll(m)};
    auto pieces = t.on_cone(a);
    if (pieces.size() != 1 || pieces[0].from != a)
      continue;
    const RootedWord &to = pieces[0].to;
    if (to.size() <= a.size() || !a.is_prefix_of(to))
      continue;
    Word gamma = to.letters.substr(a.size());
    if (canonicalize_point(s.root, a.letters, gamma, t.d()) == s)
      return a;
  }
  throw Error("DomainError", to_string(s, t.r()) + " is not an attracting fixed point");
}

VElement reassemble(const HNNWitness &w, const VElement &t) {
  return compose(power(t, w.i + w.j), compose(w.h, power(t, -w.j)));
}

HNNWitness hnn_decompose(const VElement &g, const RationalPoint &s, const VElement &t) {
  if (g.evaluate(s) != s)
    throw not_fixed(to_string(s, g.r()) + " is not fixed");
  RootedWord a = basin(t, s);
  long et = germ_exponent(t, s), eg = germ_exponent(g, s);
  if (eg % et != 0)
    throw Error("DomainError", "germ of g at " + to_string(s, g.r()) + " is not a power of t");
  HNNWitness w;
  w.i = eg / et;
  auto h_for = [&](long j) {
    return compose(power(t, -(w.i + j)), compose(g, power(t, j)));
  };
  auto good = [&](long j) { return identity_on(h_for(j), a); };
  if (good(0)) {
    w.h = h_for(0);
    return w;
  }
  long hi = 1;
  while (!good(hi)) {
    hi *= 2;
    if (hi > (1l << 20))
      throw internal_error("no j found for the HNN decomposition");
  }
  long lo = hi / 2; // good(lo) false
  while (hi - lo > 1) {
    long mid = (lo + hi) / 2;
    (good(mid) ? hi : lo) = mid;
  }
  w.j = hi;
  w.h = h_for(hi);
  return w;
}

HNNChain hnn_decompose_chain(const VElement &g, const std::vector<RationalPoint> &points) {
  HNNChain out;
  VElement cur = g;
  for (const auto &s : points) {
    VElement t = spiral_generator(s, g.d(), g.r(), points);
    HNNWitness w = hnn_decompose(cur, s, t);
    cur = w.h;
    out.generators.push_back(t);
    out.witnesses.push_back(w);
  }
  return out;
}

AscendingReport verify_ascending(const VElement &t, const RationalPoint &s,
                                 const std::vector<VElement> &h_generators,
                                 const std::vector<VElement> &samples, int bound) {
  RootedWord a;
  try {
    a = basin(t, s);
  } catch (const Error &e) {
    AscendingReport rep;
    rep.t_outside_h = false;
    rep.failures.push_back(std::string("basin: ") + e.what());
    return rep;
  }
  return verify_ascending(t, s, a, h_generators, samples, bound);
}

AscendingReport verify_ascending(const VElement &t, const RationalPoint &s, const RootedWord &a,
                                 const std::vector<VElement> &h_generators,
                                 const std::vector<VElement> &samples, int bound) {
  AscendingReport rep;
  VElement tp = t;
  for (int i = 1; i <= bound; ++i) {
    if (identity_on(tp, a)) {
      rep.t_outside_h = false;
      rep.failures.push_back("t^" + std::to_string(i) + " fixes the basin");
      break;
    }
    tp = compose(tp, t);
  }
  VElement tinv = invert(t);
  for (std::size_t k = 0; k < h_generators.size(); ++k) {
    const auto &h = h_generators[k];
    if (!identity_on(h, a)) {
      rep.conjugates_inside = false;
      rep.failures.push_back("generator " + std::to_string(k) + " is not the identity on the basin");
      continue;
    }
    if (!identity_on(compose(tinv, compose(h, t)), a)) {
      rep.conjugates_inside = false;
      rep.failures.push_back("t^-1 h t leaves H for generator " + std::to_string(k));
    }
  }
  for (std::size_t k = 0; k < samples.size(); ++k) {
    try {
      HNNWitness w = hnn_decompose(samples[k], s, t);
      if (!(reassemble(w, t) == samples[k]) || !identity_on(w.h, a)) {
        rep.covers = false;
        rep.failures.push_back("sample " + std::to_string(k) + " does not reassemble");
      }
    } catch (const Error &e) {
      rep.covers = false;
      rep.failures.push_back("sample " + std::to_string(k) + ": " + e.what());
    }
  }
  return rep;
}

std::vector<VElement> basin_complement_generators(const VElement &t, const RationalPoint &s) {
  RootedWord a = basin(t, s);
  int d = t.d(), r = t.r();
  std::vector<VElement> out;
  auto comp = cone_complement({a}, d, r);
  for (const auto &w : comp) {
    // x0-like map and a cyclic letter shift on C_w, identity elsewhere
    std::vector<PlainRule> x0, shift;
    for (const auto &c : comp)
      if (c != w) {
        x0.push_back({c, c});
        shift.push_back({c, c});
      }
    x0.push_back({a, a});
    shift.push_back({a, a});
    auto rest = pair_cones(cone_complement({{0, std::string(2, char(0))}}, d, 1),
                           cone_complement({{0, std::string(1, char(0))}}, d, 1), d);
    if (!rest)
      throw internal_error("complements of 00 and 0 do not pair");
    x0.push_back({w.extend(std::string(2, char(0))), w.child(0)});
    for (const auto &pr : *rest)
      x0.push_back({relative(w, pr.from), relative(w, pr.to)});
    for (int x = 0; x < d; ++x)
      shift.push_back({w.child(x), w.child((x + 1) % d)});
    out.push_back(VElement(d, r, x0));
    out.push_back(VElement(d, r, shift));
  }
  return out;
}

} // namespace germkit
