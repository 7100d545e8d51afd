// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "germkit/germcomplex.hpp"
#include "germkit/presentations.hpp"
#include "germkit/random.hpp"
#include "germkit/stabilizers.hpp"
#include "oracles.hpp"

using namespace germkit;

namespace {

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::filesystem::path kFixtures = GERMKIT_FIXTURES;

struct Outcome {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string &what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

Outcome presentations() {
  Outcome o;
  auto has = [](const std::vector<PipelineStep> &steps, long g, long r) {
    for (const auto &s : steps)
      if (s.size == PresSize{g, r})
        return true;
    return false;
  };
  auto ta = pipeline_ta(), va = pipeline_va();
  o.expect(has(ta, 6, 24), "A != (6, 24)");
  o.expect(wreath_c2(kPresT) == PresSize{3, 9}, "T wr Z2 != (3, 9)");
  o.expect(extension(kPresT, kPresT) == PresSize{4, 14}, "T x T != (4, 14)");
  o.expect(has(ta, 15, 88), "TA intermediate != (15, 88)");
  o.expect(ta.back().size == PresSize{2, 90}, "TA final = " + to_string(ta.back().size));
  o.expect(has(va, 34, 237), "VA intermediate != (34, 237)");
  o.expect(va.back().size == PresSize{2, 239}, "VA final = " + to_string(va.back().size));
  o.expect(fix_v(0) == PresSize{2, 7}, "fix_v(0) != (2, 7)");
  return o;
}

Outcome jets() {
  Outcome o;
  Jet k = solve_conjugacy(Jet({1, 1, 0}));
  o.expect(k.a(2) == 1 && k.a(3) == Rational(2, 3), "conjugator of x + x^2 is " + to_string(k));
  gen::Rng rng(2001);
  const int r = 10;
  oracle::Series g(r + 1, Rational(0)), gi(r + 1, Rational(0));
  g[1] = 2;
  gi[1] = Rational(1, 2);
  for (int i = 0; i < 20; ++i) {
    std::vector<Rational> c{Rational(1)};
    for (int j = 2; j <= r; ++j)
      c.push_back(make_rational((long)(rng() % 11) - 5, 1 + (long)(rng() % 4)));
    Jet h(c);
    Jet kk = solve_conjugacy(h);
    auto lhs = oracle::compose(oracle::series(kk), oracle::series(h), r);
    auto rhs = oracle::compose(gi, oracle::compose(oracle::series(kk), g, r), r);
    o.expect(lhs == rhs, "k o h != g^-1 o k o g for " + to_string(h));
  }
  return o;
}

Outcome sigma_example2() {
  Outcome o;
  Instance ex = Instance::example2();
  const TailClass c13{std::string{char(0), char(1)}};
  auto s0 = sigma(ex, example2_f0());
  o.expect(s0.size() == 1 && s0.count(c13) && s0.at(c13) == 2, "sigma(f0) != 2");
  gen::Rng rng(2002);
  auto value = [&](const PLCircleMap &f) {
    auto s = sigma(ex, f);
    return s.count(c13) ? s.at(c13) : Integer(0);
  };
  for (int i = 0; i < 200; ++i) {
    PLCircleMap g = gen::random_example2(rng), h = gen::random_example2(rng);
    o.expect(value(compose(g, h)) == value(g) + value(h), "sigma(gh) != sigma(g) + sigma(h)");
  }
  for (int i = 0; i < 50; ++i)
    o.expect(sigma(ex, gen::random_t(rng)).empty(), "sigma nonzero on T");
  for (int i = 0; i < 50; ++i) {
    PLCircleMap g = gen::random_example2(rng), h = gen::random_example2(rng);
    o.expect(sigma(ex, compose(compose(g, h), compose(invert(g), invert(h)))).empty(),
             "sigma nonzero on a commutator");
  }
  return o;
}

Outcome sing_containment() {
  Outcome o;
  gen::Rng rng(2003);
  Instance ta = Instance::ta(), va = Instance::va();
  AutomatonRef grig = resolve_automaton("grigorchuk");
  Instance rn = Instance::rn(grig);
  auto check = [&](const Instance &inst, const InstanceElement &k, const InstanceElement &h) {
    std::set<RationalPoint> allowed;
    InstanceElement hi = inst.invert(h);
    for (const auto &p : inst.sing(k))
      allowed.insert(inst.evaluate(hi, p));
    for (const auto &p : inst.sing(h))
      allowed.insert(p);
    for (const auto &p : inst.sing(inst.compose(k, h)))
      o.expect(allowed.count(p) > 0, inst.name() + ": sing(kh) escapes at " + to_string(p));
  };
  for (int i = 0; i < 200; ++i) {
    check(ta, gen::random_ta(rng), gen::random_ta(rng));
    check(va, gen::random_va(rng), gen::random_va(rng));
    check(rn, gen::random_rn(rng, grig), gen::random_rn(rng, grig));
  }
  return o;
}

Outcome nucleus_grigorchuk() {
  Outcome o;
  MealyAutomaton g = builtin_automaton("grigorchuk");
  auto nu = nucleus(g);
  std::set<std::string> names;
  std::set<std::vector<std::vector<int>>> got;
  for (const auto &w : nu) {
    names.insert(to_string(g, w));
    oracle::States s;
    for (const auto &x : w)
      s.push_back(x.state);
    got.insert(oracle::signature(g, s, 8));
  }
  o.expect(names == std::set<std::string>{"1", "a", "b", "c", "d"}, "nucleus has unexpected names");
  o.expect(got == oracle::brute_nucleus(g, 6, 8), "nucleus differs from the depth-6 oracle");
  return o;
}

Outcome activity() {
  Outcome o;
  MealyAutomaton g = builtin_automaton("grigorchuk");
  for (const char *s : {"a", "b", "c", "d"})
    o.expect(activity_degree(g, parse_word(g, s)).bounded(), std::string(s) + " not bounded");
  MealyAutomaton od = builtin_automaton("odometer");
  o.expect(activity_degree(od, parse_word(od, "tau")).bounded(), "odometer not bounded");
  MealyAutomaton p = builtin_automaton("polynomial");
  AutomatonWord y = parse_word(p, "y");
  Activity ay = activity_degree(p, y);
  o.expect(ay.kind == Activity::Kind::Polynomial && ay.degree == 1, "y is " + to_string(ay));
  MealyAutomaton e = builtin_automaton("exponential");
  AutomatonWord x = parse_word(e, "x");
  o.expect(activity_degree(e, x).kind == Activity::Kind::Exponential, "x not exponential");
  for (int k = 0; k <= 12; ++k) {
    o.expect(theta(p, y, k) == k && oracle::count_active(p, {y[0].state}, k) == k,
             "theta_" + std::to_string(k) + "(y) != k");
    o.expect(theta(e, x, k) == Integer(1) << k && oracle::count_active(e, {x[0].state}, k) == 1l << k,
             "theta_" + std::to_string(k) + "(x) != 2^k");
  }
  return o;
}

Outcome roever() {
  Outcome o;
  auto rn = [](const char *n) { return parse_rn(slurp(kFixtures / "automata" / n)); };
  RNElement b = rn("roever-b.rn"), c = rn("roever-c.rn"), d = rn("roever-d.rn"), t = rn("roever-t.rn");
  RationalPoint one = parse_point("0.(1)", 2);
  for (const auto *g : {&b, &c, &d})
    o.expect(germ_order(*g, one, 8) == 2, "germ order != 2 for " + to_string(*g));
  o.expect(germ_equal(compose(b, c), d, one), "germ(b) germ(c) != germ(d)");
  RNElement ti = invert(t);
  auto conj = [&](const RNElement &g) { return compose(t, compose(g, ti)); };
  o.expect(germ_equal(conj(b), d, one) && germ_equal(conj(d), c, one) && germ_equal(conj(c), b, one),
           "t-conjugation is not the 3-cycle b -> d -> c -> b");
  o.expect(abelian_quotient(roever_germ_presentation()).trivial(), "abelian quotient not trivial");
  return o;
}

Outcome germ_complex() {
  Outcome o;
  SimplicialComplex k23;
  k23.vertices = {"a0", "a1", "b0", "b1", "b2"};
  for (int a = 0; a < 2; ++a)
    for (int b = 2; b < 5; ++b)
      k23.facets.push_back({a, b});
  o.expect(reduced_homology(k23, 2)[1] == 2, "K_{2,3} H~1 != 2");
  Instance va = Instance::va();
  std::vector<RationalPoint> pool{parse_point("0.(1)", 2), parse_point("0.(0)", 2),
                                  parse_point("0.(01)", 2), parse_point("0.1(0)", 2),
                                  parse_point("0.01(1)", 2)};
  std::vector<std::vector<RationalPoint>> windows;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    windows.push_back({pool[i]});
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      windows.push_back({pool[i], pool[j]});
      for (std::size_t k = j + 1; k < pool.size(); ++k)
        windows.push_back({pool[i], pool[j], pool[k]});
    }
  }
  for (int c = 2; c <= 4; ++c) {
    for (const auto &pts : windows) {
      Window w = instance_window(va, pts, c);
      std::size_t n = pts.size();
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        Vertex v(n, kTrivial);
        for (std::size_t i = 0; i < n; ++i)
          if (mask >> i & 1)
            v[i] = kHidden;
        std::size_t m = morse(v);
        auto h = reduced_homology(descending_link(w, v), 2);
        o.expect(m < 2 || h[0] == 0, "H~0 != 0 at Morse level " + std::to_string(m));
        o.expect(m < 3 || h[1] == 0, "H~1 != 0 at Morse level " + std::to_string(m));
      }
    }
  }
  return o;
}

Outcome hnn() {
  Outcome o;
  gen::Rng rng(2009);
  RationalPoint s = parse_point("0.(1)", 2);
  VElement t = spiral_generator(s);
  RootedWord a = basin(t, s);
  for (int i = 0; i < 50; ++i) {
    VElement g = gen::random_fix(rng, s);
    HNNWitness w = hnn_decompose(g, s, t);
    VElement back = reassemble(w, t);
    for (int k = 0; k < 50; ++k) {
      RationalPoint x = gen::random_point(rng);
      o.expect(back.evaluate(x) == g.evaluate(x), "t^(i+j) h t^-j differs from g at " + to_string(x));
      RationalPoint y = canonicalize_point(gen::random_point(rng).prepend(a), 2);
      o.expect(w.h.evaluate(y) == y, "h moves a point of the basin");
    }
  }
  return o;
}

Outcome phi() {
  Outcome o;
  PProjMap f = parse_pproj(slurp(kFixtures / "valid/phi-example.pm"));
  o.expect(phi_hat(f) == 4, "phi_hat(example) = " + to_string(phi_hat(f)));
  gen::Rng rng(2010);
  auto q = [&](long lo, long span, long den) { return make_rational(lo * den + (long)(rng() % (span * den)), den); };
  auto random_pm = [&](bool affine) {
    PProjMap m;
    for (int k = 1 + (int)(rng() % 2); k > 0; --k) {
      Rational p = q(-3, 5, 4), r = p + make_rational(1 + (long)(rng() % 4), 2);
      if (affine) {
        Rational mid = (p + r) / 2;
        m = compose(PProjMap::affine_bump(p, mid, mid + (r - mid) * make_rational(1 + (long)(rng() % 3), 4), r), m);
      } else {
        m = compose(PProjMap::bump(p, r, make_rational(1 + (long)(rng() % 5), 1 + (long)(rng() % 3))), m);
      }
    }
    return m;
  };
  for (int i = 0; i < 200; ++i) {
    PProjMap g = random_pm(false), h = random_pm(false);
    o.expect(phi_hat(compose(g, h)) == phi_hat(g) * phi_hat(h), "phi_hat(gh) != phi_hat(g) phi_hat(h)");
  }
  for (int i = 0; i < 50; ++i)
    o.expect(phi_hat(random_pm(true)) == 1, "phi_hat != 1 on a piecewise-affine map");
  return o;
}

Outcome portraits() {
  Outcome o;
  gen::Rng rng(2011);
  for (int i = 0; i < 30; ++i) {
    auto spec = gen::random_prescription(rng);
    VAElement g = realize_portrait(spec);
    auto got = portrait(g);
    std::map<RationalPoint, TbarElement> want, have;
    for (const auto &p : spec)
      want[p.point] = mod_translations(p.germ);
    for (const auto &p : got)
      have[p.point] = mod_translations(p.germ);
    o.expect(want == have, "recomputed portrait differs");
    auto sg = sing(g);
    std::set<RationalPoint> s(sg.begin(), sg.end()), pts;
    for (const auto &p : spec)
      pts.insert(p.point);
    o.expect(s == pts, "sing differs from the prescribed points");
  }
  return o;
}

Outcome validators() {
  Outcome o;
  for (const auto &e : std::filesystem::directory_iterator(kFixtures / "valid")) {
    std::string ext = e.path().extension();
    if (ext == ".va") {
      VAElement f = parse_va_unchecked(slurp(e.path()));
      o.expect(validate(f).ok() && conjugacy_identity_holds(f), e.path().filename().string() + " rejected");
    } else if (ext == ".ta") {
      CircleText t = parse_circle_text(slurp(e.path()));
      o.expect(validate(t).ok(), e.path().filename().string() + " rejected");
    }
  }
  int rejected = 0, total = 0;
  for (const auto &e : std::filesystem::directory_iterator(kFixtures / "corrupt")) {
    std::string stem = e.path().stem(), check = stem.substr(3);
    ++total;
    ValidationReport rep = e.path().extension() == ".va" ? validate(parse_va_unchecked(slurp(e.path())))
                                                          : validate(parse_circle_text(slurp(e.path())));
    if (rep.failed(check))
      ++rejected;
    else
      o.expect(false, stem + " not rejected by " + check);
  }
  o.expect(total == 10 && rejected == 10, std::to_string(rejected) + "/" + std::to_string(total) + " rejected");
  return o;
}

} // namespace

int main() {
  struct Criterion {
    const char *name;
    double limit_s;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{
      {"presentation pipelines", 1, presentations},
      {"jet recursion", 1, jets},
      {"sigma on the one-third instance", 5, sigma_example2},
      {"sing containment", 10, sing_containment},
      {"Grigorchuk nucleus", 5, nucleus_grigorchuk},
      {"activity classification", 5, activity},
      {"Roever germ structure", 10, roever},
      {"germ complex connectivity", 30, germ_complex},
      {"HNN decomposition", 10, hnn},
      {"phi on piecewise-projective maps", 5, phi},
      {"portrait realization", 10, portraits},
      {"validator soundness", 5, validators},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception &e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > all[i].limit_s) {
      o.ok = false;
      o.detail = "took " + std::to_string(secs) + " s";
    }
    failed += !o.ok;
    std::printf("%s %2zu %-34s %8.3f s%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, all[i].name, secs,
                o.ok ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
