#include "support.hpp"

#include "oracles.hpp"

using namespace germkit;

namespace {

oracle::States states_of(const AutomatonWord &w) {
  oracle::States s;
  for (const auto &g : w) {
    REQUIRE_FALSE(g.inv);
    s.push_back(g.state);
  }
  return s;
}

std::vector<int> as_ints(const Word &w) { return {w.begin(), w.end()}; }

} // namespace

TEST_CASE("builtin automata round trip") {
  for (const auto &name : builtin_automaton_names()) {
    MealyAutomaton a = builtin_automaton(name);
    MealyAutomaton b = parse_automaton(to_string(a));
    CHECK(to_string(b) == to_string(a));
    CHECK(a.acts_trivially(a.trivial_state()));
  }
  CHECK(testing::error_kind([] { parse_automaton("SS[d=2]{ a=(a,z)(01) }"); }) == "ParseError");
}

TEST_CASE("action is a homomorphism") {
  MealyAutomaton a = builtin_automaton("grigorchuk");
  auto rng = testing::rng(41);
  for (int i = 0; i < 200; ++i) {
    AutomatonWord u, v;
    for (int k = (int)(rng() % 4); k > 0; --k)
      u.push_back({(int)(rng() % 5), false});
    for (int k = (int)(rng() % 4); k > 0; --k)
      v.push_back({(int)(rng() % 5), false});
    Word x;
    for (int k = 0; k < 10; ++k)
      x += char(rng() % 2);
    CHECK(act(a, product(a, u, v), x) == act(a, u, act(a, v, x)));
    CHECK(as_ints(act(a, u, x)) == oracle::act_states(a, states_of(u), as_ints(x)));
    CHECK(act(a, inverse(u), act(a, u, x)) == x);
  }
}

TEST_CASE("Grigorchuk relations") {
  MealyAutomaton a = builtin_automaton("grigorchuk");
  auto w = [&](const char *s) { return parse_word(a, s); };
  CHECK(is_trivial(a, w("a*a")));
  CHECK(is_trivial(a, w("b*c*d")));
  CHECK(equal(a, w("b*c"), w("d")));
  AutomatonWord ab = w("a*b"), p8, p16;
  for (int i = 0; i < 8; ++i)
    p8 = product(a, p8, ab);
  p16 = product(a, p8, p8);
  CHECK_FALSE(is_trivial(a, p8));
  CHECK(is_trivial(a, p16));
  // the oracle sees the same on level 10
  oracle::States s8;
  for (int i = 0; i < 8; ++i)
    s8.insert(s8.end(), {a.index("a"), a.index("b")});
  CHECK(oracle::signature(a, s8, 10) != oracle::signature(a, {}, 10));
}

TEST_CASE("nucleus of contracting groups") {
  MealyAutomaton g = builtin_automaton("grigorchuk");
  auto nu = nucleus(g);
  std::vector<std::string> names;
  for (const auto &w : nu)
    names.push_back(to_string(g, w));
  CHECK(names == std::vector<std::string>{"1", "a", "b", "c", "d"});

  std::set<std::vector<std::vector<int>>> got;
  for (const auto &w : nu)
    got.insert(oracle::signature(g, states_of(w), 8));
  CHECK(got == oracle::brute_nucleus(g, 6, 8));

  MealyAutomaton od = builtin_automaton("odometer");
  CHECK(nucleus(od).size() == 3);
  MealyAutomaton gs = builtin_automaton("gupta-sidki");
  CHECK(nucleus(gs).size() == 5);
  CHECK(testing::error_kind([] { nucleus(builtin_automaton("polynomial"), {}, 500); }) == "Exceeded");
}

TEST_CASE("minimization merges equal states") {
  MealyAutomaton a = parse_automaton("SS[d=2]{ a=(1,1)(01); b=(1,1)(01); c=(a,b) }");
  WordAutomaton w = explore(a, {{{a.index("a"), false}}, {{a.index("b"), false}}});
  auto cls = minimize(w);
  CHECK(cls[w.index.at({{a.representative(a.index("a")), false}})] ==
        cls[w.index.at({{a.representative(a.index("b")), false}})]);
  CHECK(a.representative(a.index("a")) == a.representative(a.index("b")));
}

TEST_CASE("activity and theta against direct counting") {
  struct Case {
    const char *aut, *state, *kind;
  };
  for (Case c : {Case{"grigorchuk", "b", "bounded"}, Case{"grigorchuk", "a", "finitary"},
                 Case{"odometer", "tau", "bounded"}, Case{"polynomial", "y", "polynomial(1)"},
                 Case{"exponential", "x", "exponential"}}) {
    MealyAutomaton a = builtin_automaton(c.aut);
    AutomatonWord w = parse_word(a, c.state);
    CHECK(to_string(activity_degree(a, w)) == c.kind);
    for (int k = 0; k <= 10; ++k)
      CHECK(theta(a, w, k) == oracle::count_active(a, states_of(w), k));
  }
  MealyAutomaton y = builtin_automaton("polynomial");
  CHECK(theta(y, parse_word(y, "y"), 12) == 12);
  MealyAutomaton x = builtin_automaton("exponential");
  CHECK(theta(x, parse_word(x, "x"), 12) == 4096);
}

TEST_CASE("active rays") {
  MealyAutomaton g = builtin_automaton("grigorchuk");
  for (const char *s : {"b", "c", "d"})
    CHECK(active_rays(g, parse_word(g, s)) == std::vector<RationalPoint>{parse_point("0.(1)", 2)});
  CHECK(active_rays(g, parse_word(g, "a")).empty());
  MealyAutomaton x = builtin_automaton("exponential");
  CHECK(testing::error_kind([&] { active_rays(x, parse_word(x, "x")); }) == "NotBounded");
}

TEST_CASE("eventually periodic points under automaton action") {
  MealyAutomaton g = builtin_automaton("grigorchuk");
  auto rng = testing::rng(42);
  for (int i = 0; i < 200; ++i) {
    RationalPoint p = gen::random_point(rng);
    AutomatonWord w;
    for (int k = (int)(rng() % 4); k > 0; --k)
      w.push_back({(int)(rng() % 5), false});
    RationalPoint q = act(g, w, p);
    CHECK(as_ints(q.unroll(30)) == oracle::act_states(g, states_of(w), as_ints(p.unroll(30))));
  }
}
