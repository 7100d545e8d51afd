#include "germkit/rover.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "germkit/text.hpp"

namespace germkit {

namespace {

RNRule child_rule(const MealyAutomaton &a, const RNRule &r, int x) {
  AutomatonWord sec;
  int y = act_letter(a, r.g, x, &sec);
  return {r.from.child(x), r.to.child(y), sec};
}

// merge d sibling rules into their parent when some single generator reproduces them
bool try_merge(const MealyAutomaton &a, std::vector<RNRule> &rules) {
  std::map<RootedWord, std::vector<std::size_t>> by_parent;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto &f = rules[i].from;
    if (f.letters.empty() || rules[i].to.letters.empty())
      continue;
    by_parent[{f.root, f.letters.substr(0, f.size() - 1)}].push_back(i);
  }
  int d = a.d();
  for (const auto &[parent, idx] : by_parent) {
    if ((int)idx.size() != d)
      continue;
    std::vector<const RNRule *> kids(d);
    for (std::size_t i : idx)
      kids[(unsigned char)rules[i].from.letters.back()] = &rules[i];
    const RootedWord &t0 = kids[0]->to;
    RootedWord tparent{t0.root, t0.letters.substr(0, t0.size() - 1)};
    bool same_parent = true;
    std::vector<int> img(d);
    for (int x = 0; x < d; ++x) {
      const auto &t = kids[x]->to;
      if (t.root != tparent.root || t.size() != t0.size() ||
          t.letters.compare(0, t.size() - 1, tparent.letters) != 0)
        same_parent = false;
      else
        img[x] = (unsigned char)t.letters.back();
    }
    if (!same_parent)
      continue;
    std::optional<AutomatonWord> found;
    bool all_trivial = true;
    for (int x = 0; x < d; ++x)
      all_trivial = all_trivial && kids[x]->g.empty() && img[x] == x;
    if (all_trivial) {
      found = AutomatonWord{};
    } else {
      for (std::size_t s = 0; s < a.size() && !found; ++s) {
        if (a.acts_trivially((int)s) || a.representative((int)s) != (int)s)
          continue;
        for (bool inv : {false, true}) {
          AutomatonWord cand = reduce(a, {{(int)s, inv}});
          bool ok = true;
          for (int x = 0; x < d && ok; ++x) {
            AutomatonWord sec;
            if (act_letter(a, cand, x, &sec) != img[x] || !equal(a, sec, kids[x]->g))
              ok = false;
          }
          if (ok) {
            found = cand;
            break;
          }
        }
      }
    }
    if (!found)
      continue;
    RNRule merged{parent, tparent, *found};
    std::vector<RNRule> out;
    for (std::size_t i = 0; i < rules.size(); ++i)
      if (std::find(idx.begin(), idx.end(), i) == idx.end())
        out.push_back(rules[i]);
    out.push_back(merged);
    rules = std::move(out);
    return true;
  }
  return false;
}

} // namespace

RNElement::RNElement(AutomatonRef a, int r, std::vector<RNRule> rules)
    : aut_(std::move(a)), r_(r) {
  if (!aut_)
    throw invalid("RN element needs an automaton");
  int d = aut_->d();
  std::vector<RootedWord> from, to;
  for (auto &rule : rules) {
    rule.g = reduce(*aut_, rule.g);
    if (!rule.g.empty() && is_trivial(*aut_, rule.g))
      rule.g.clear();
    from.push_back(rule.from);
    to.push_back(rule.to);
  }
  std::string why;
  if (!cones_partition_space(from, d, r, &why))
    throw invalid("RN domains: " + why);
  if (!cones_partition_space(to, d, r, &why))
    throw invalid("RN images: " + why);
  while (try_merge(*aut_, rules)) {
  }
  std::sort(rules.begin(), rules.end(),
            [](const RNRule &x, const RNRule &y) { return x.from < y.from; });
  rules_ = std::move(rules);
}

RNElement RNElement::identity(AutomatonRef a, int r) {
  std::vector<RNRule> rules;
  for (int i = 0; i < r; ++i)
    rules.push_back({{i, ""}, {i, ""}, {}});
  return RNElement(std::move(a), r, rules);
}

RNElement RNElement::from_v(AutomatonRef a, const VElement &v) {
  if (v.d() != a->d())
    throw Error("DomainError", "alphabet mismatch between V element and automaton");
  std::vector<RNRule> rules;
  for (const auto &pr : v.rules())
    rules.push_back({pr.from, pr.to, {}});
  return RNElement(std::move(a), v.r(), rules);
}

RNElement RNElement::from_word(AutomatonRef a, const AutomatonWord &g, int r) {
  std::vector<RNRule> rules;
  for (int i = 0; i < r; ++i)
    rules.push_back({{i, ""}, {i, ""}, g});
  return RNElement(std::move(a), r, rules);
}

RationalPoint RNElement::evaluate(const RationalPoint &x) const {
  for (const auto &rule : rules_) {
    if (!x.in_cone(rule.from))
      continue;
    RationalPoint rest = act(*aut_, rule.g, x.drop(rule.from.size()));
    return canonicalize_point(rest.prepend(rule.to), d());
  }
  throw internal_error("point outside every RN domain");
}

bool RNElement::is_identity() const {
  for (const auto &rule : rules_)
    if (rule.from != rule.to || !rule.g.empty())
      return false;
  return true;
}

bool RNElement::operator==(const RNElement &o) const {
  return compose(invert(o), *this).is_identity();
}

RNElement compose(const RNElement &f2, const RNElement &f1) {
  if (f2.automaton_ref() != f1.automaton_ref() && to_string(f2.automaton()) != to_string(f1.automaton()))
    throw Error("DomainError", "RN elements over different automata");
  if (f2.r() != f1.r())
    throw Error("DomainError", "RN elements with different root counts");
  const MealyAutomaton &a = f1.automaton();
  std::vector<RNRule> todo = f1.rules(), out;
  while (!todo.empty()) {
    RNRule r = todo.back();
    todo.pop_back();
    const RNRule *hit = nullptr;
    bool split = false;
    for (const auto &q : f2.rules()) {
      if (q.from.is_prefix_of(r.to)) {
        hit = &q;
        break;
      }
      if (r.to.is_prefix_of(q.from)) {
        split = true;
        break;
      }
    }
    if (hit) {
      Word delta = r.to.letters.substr(hit->from.size());
      AutomatonWord sec = section(a, hit->g, delta);
      Word moved = act(a, hit->g, delta);
      out.push_back({r.from, hit->to.extend(moved), product(a, sec, r.g)});
    } else if (split) {
      for (int x = 0; x < a.d(); ++x)
        todo.push_back(child_rule(a, r, x));
    } else {
      throw internal_error("RN composition found no matching rule");
    }
  }
  return RNElement(f1.automaton_ref(), f1.r(), out);
}

RNElement invert(const RNElement &f) {
  std::vector<RNRule> out;
  for (const auto &r : f.rules())
    out.push_back({r.to, r.from, inverse(r.g)});
  return RNElement(f.automaton_ref(), f.r(), out);
}

RNElement power(const RNElement &f, long n) {
  RNElement base = n < 0 ? invert(f) : f;
  RNElement acc = RNElement::identity(f.automaton_ref(), f.r());
  for (long i = 0; i < std::labs(n); ++i)
    acc = compose(acc, base);
  return acc;
}

std::vector<RationalPoint> sing(const RNElement &f) {
  std::set<RationalPoint> out;
  for (const auto &r : f.rules())
    for (const auto &ray : active_rays(f.automaton(), r.g))
      out.insert(canonicalize_point(ray.prepend(r.from), f.d()));
  return {out.begin(), out.end()};
}

LocalFixer local_fixer(const RNElement &f, const RationalPoint &p) {
  auto all = sing(f);
  if (std::find(all.begin(), all.end(), p) == all.end())
    throw Error("DomainError", to_string(p, f.r()) + " is not a singular point");
  const RNRule *rule = nullptr;
  for (const auto &r : f.rules())
    if (p.in_cone(r.from))
      rule = &r;
  if (all.size() == 1)
    return {f, rule->from};
  const MealyAutomaton &a = f.automaton();
  RationalPoint psi = p.drop(rule->from.size());
  for (std::size_t m = 0;; ++m) {
    Word gamma = psi.unroll(m);
    RootedWord nb = rule->from.extend(gamma);
    bool alone = true;
    for (const auto &q : all)
      if (q != p && q.in_cone(nb))
        alone = false;
    if (!alone)
      continue;
    RootedWord img = rule->to.extend(act(a, rule->g, gamma));
    std::vector<RNRule> rules{{nb, img, section(a, rule->g, gamma)}};
    auto paired = pair_cones(cone_complement({nb}, f.d(), f.r()),
                             cone_complement({img}, f.d(), f.r()), f.d());
    if (!paired)
      throw internal_error("complements of the local fixer do not pair");
    for (const auto &pr : *paired)
      rules.push_back({pr.from, pr.to, {}});
    return {RNElement(f.automaton_ref(), f.r(), rules), nb};
  }
}

bool germ_trivial(const RNElement &h, const RationalPoint &p) {
  if (h.evaluate(p) != p)
    throw not_fixed(to_string(p, h.r()) + " is not fixed");
  const MealyAutomaton &a = h.automaton();
  for (const auto &r : h.rules()) {
    if (!p.in_cone(r.from))
      continue;
    if (r.from != r.to)
      return false;
    RationalPoint psi = p.drop(r.from.size());
    AutomatonWord cur = r.g;
    for (char c : psi.pre) {
      if (is_trivial(a, cur))
        return true;
      AutomatonWord nxt;
      act_letter(a, cur, (unsigned char)c, &nxt);
      cur = std::move(nxt);
    }
    std::set<std::pair<AutomatonWord, std::size_t>> seen;
    std::size_t pos = 0;
    while (seen.insert({cur, pos}).second) {
      if (is_trivial(a, cur))
        return true;
      AutomatonWord nxt;
      act_letter(a, cur, (unsigned char)psi.period[pos], &nxt);
      cur = std::move(nxt);
      pos = (pos + 1) % psi.period.size();
    }
    return false;
  }
  throw internal_error("point outside every RN domain");
}

bool germ_equal(const RNElement &g1, const RNElement &g2, const RationalPoint &p) {
  if (g1.evaluate(p) != p || g2.evaluate(p) != p)
    throw not_fixed(to_string(p, g1.r()) + " is not fixed by both elements");
  return germ_trivial(compose(invert(g2), g1), p);
}

std::optional<long> germ_order(const RNElement &g, const RationalPoint &p, long max_n) {
  if (g.evaluate(p) != p)
    throw not_fixed(to_string(p, g.r()) + " is not fixed");
  RNElement acc = g;
  for (long n = 1; n <= max_n; ++n) {
    if (germ_trivial(acc, p))
      return n;
    acc = compose(acc, g);
  }
  return std::nullopt;
}

namespace {

std::string word_text(const RootedWord &w, int r) {
  std::string s = to_string(w, r);
  if (w.letters.empty())
    s += "e";
  return s;
}

RootedWord parse_rn_word(const std::string &s, int d, int r) {
  std::string t = text::trim(s);
  if (!t.empty() && t.back() == 'e')
    t.pop_back();
  return parse_rooted_word(t, d, r);
}

} // namespace

std::string to_string(const RNElement &f) {
  std::string s = "RN[d=" + std::to_string(f.d()) + ",r=" + std::to_string(f.r()) +
                  "; SS=" + (f.automaton().label().empty() ? "?" : f.automaton().label()) + "]{";
  bool first = true;
  for (const auto &r : f.rules()) {
    s += first ? " " : "; ";
    first = false;
    s += word_text(r.from, f.r()) + "->" + word_text(r.to, f.r()) + " : " +
         to_string(f.automaton(), r.g);
  }
  return s + " }";
}

AutomatonRef resolve_automaton(const std::string &name) {
  static std::map<std::string, AutomatonRef> cache;
  if (auto it = cache.find(name); it != cache.end())
    return it->second;
  AutomatonRef a;
  auto names = builtin_automaton_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) {
    a = std::make_shared<const MealyAutomaton>(builtin_automaton(name));
  } else {
    std::ifstream in(name);
    if (!in)
      throw Error("DomainError", "unknown automaton '" + name + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    MealyAutomaton m = parse_automaton(ss.str());
    if (m.label().empty()) {
      std::string stem = name.substr(name.find_last_of('/') + 1);
      stem = stem.substr(0, stem.find('.'));
      std::vector<std::string> ns;
      std::vector<std::vector<int>> ps;
      std::vector<std::vector<std::string>> nx;
      for (std::size_t i = 0; i < m.size(); ++i) {
        ns.push_back(m.state((int)i).name);
        ps.push_back(m.state((int)i).perm);
        std::vector<std::string> t;
        for (int j : m.state((int)i).next)
          t.push_back(m.state(j).name);
        nx.push_back(t);
      }
      m = MealyAutomaton(m.d(), ns, ps, nx, stem);
    }
    a = std::make_shared<const MealyAutomaton>(m);
  }
  cache[name] = a;
  return a;
}

RNElement parse_rn(const std::string &src) {
  auto h = text::parse_header(src);
  if (h.name != "RN")
    text::fail(src, 0, "expected RN[d=..,r=..; SS=..]{...}");
  int d = text::param_int(h, "d", 2);
  int r = text::param_int(h, "r", 1);
  auto it = h.params.find("SS");
  if (it == h.params.end())
    text::fail(src, 0, "missing SS=<automaton>");
  AutomatonRef a;
  try {
    a = resolve_automaton(it->second);
  } catch (const Error &e) {
    text::fail(src, 0, e.what());
  }
  if (a->d() != d)
    text::fail(src, 0, "automaton alphabet differs from d");
  std::vector<RNRule> rules;
  for (const auto &item : text::split_top(h.body, ';')) {
    if (item.s.empty())
      continue;
    auto arrow = item.s.find("->");
    if (arrow == std::string::npos)
      text::fail(src, item.offset, "expected 'alpha->beta : word'");
    auto colon = item.s.find(':', arrow);
    std::string rhs = item.s.substr(arrow + 2, colon == std::string::npos ? std::string::npos
                                                                          : colon - arrow - 2);
    try {
      RNRule rule;
      rule.from = parse_rn_word(item.s.substr(0, arrow), d, r);
      rule.to = parse_rn_word(rhs, d, r);
      if (colon != std::string::npos)
        rule.g = parse_word(*a, item.s.substr(colon + 1));
      rules.push_back(rule);
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      text::fail(src, item.offset, e.what());
    }
  }
  return RNElement(a, r, rules);
}

} // namespace germkit
