#include "germkit/selfsim.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <regex>
#include <set>

#include "germkit/text.hpp"

namespace germkit {

namespace {

bool is_identity_perm(const std::vector<int> &p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != (int)i)
      return false;
  return true;
}

std::vector<int> inverse_perm(const std::vector<int> &p) {
  std::vector<int> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    q[p[i]] = (int)i;
  return q;
}

// Moore refinement on an explicit automaton
std::vector<int> refine(const std::vector<std::vector<int>> &perm,
                        const std::vector<std::vector<int>> &next) {
  std::size_t n = perm.size();
  std::vector<int> cls(n);
  {
    std::map<std::vector<int>, int> ids;
    for (std::size_t i = 0; i < n; ++i)
      cls[i] = ids.emplace(perm[i], (int)ids.size()).first->second;
  }
  for (;;) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> nc(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<int> sig{cls[i]};
      for (int j : next[i])
        sig.push_back(cls[j]);
      nc[i] = ids.emplace(sig, (int)ids.size()).first->second;
    }
    bool same = true;
    // class counts only grow; equal counts mean a stable partition
    std::set<int> a(cls.begin(), cls.end()), b(nc.begin(), nc.end());
    if (a.size() != b.size())
      same = false;
    cls = nc;
    if (same)
      return cls;
  }
}

} // namespace

MealyAutomaton::MealyAutomaton(int d, const std::vector<std::string> &names,
                               const std::vector<std::vector<int>> &perms,
                               const std::vector<std::vector<std::string>> &next,
                               std::string label)
    : d_(d), label_(std::move(label)) {
  if (d < 2)
    throw Error("DomainError", "alphabet size must be at least 2");
  std::vector<std::string> all = names;
  std::vector<std::vector<int>> ps = perms;
  std::vector<std::vector<std::string>> ns = next;
  if (std::find(all.begin(), all.end(), "1") == all.end()) {
    all.push_back("1");
    std::vector<int> id(d);
    std::iota(id.begin(), id.end(), 0);
    ps.push_back(id);
    ns.push_back(std::vector<std::string>(d, "1"));
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!by_name_.emplace(all[i], (int)i).second)
      throw Error("DomainError", "duplicate state " + all[i]);
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    MealyState s{all[i], ps[i], {}};
    if ((int)s.perm.size() != d || (int)ns[i].size() != d)
      throw Error("DomainError", "state " + all[i] + " needs " + std::to_string(d) + " entries");
    std::vector<int> seen(d, 0);
    for (int x : s.perm) {
      if (x < 0 || x >= d || seen[x]++)
        throw Error("DomainError", "state " + all[i] + " has an invalid permutation");
    }
    for (const auto &t : ns[i]) {
      auto it = by_name_.find(t);
      if (it == by_name_.end())
        throw Error("DomainError", "unknown state '" + t + "' in transitions of " + all[i]);
      s.next.push_back(it->second);
    }
    states_.push_back(s);
  }
  trivial_ = by_name_.at("1");
  if (!is_identity_perm(states_[trivial_].perm))
    throw Error("DomainError", "state 1 must be trivial");
  for (int t : states_[trivial_].next)
    if (t != trivial_)
      throw Error("DomainError", "state 1 must be trivial");

  std::size_t n = states_.size();
  std::vector<std::vector<int>> perm(n), nx(n);
  for (std::size_t i = 0; i < n; ++i) {
    perm[i] = states_[i].perm;
    nx[i] = states_[i].next;
  }
  auto cls = refine(perm, nx);
  rep_.assign(n, -1);
  trivial_acts_.assign(n, false);
  std::map<int, int> first;
  for (std::size_t i = 0; i < n; ++i)
    first.emplace(cls[i], (int)i);
  for (std::size_t i = 0; i < n; ++i) {
    rep_[i] = first[cls[i]];
    trivial_acts_[i] = cls[i] == cls[trivial_];
  }
  // s s = 1 ?
  involution_.assign(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    std::set<std::pair<int, int>> seen;
    std::deque<std::pair<int, int>> todo{{(int)s, (int)s}};
    bool ok = true;
    while (!todo.empty() && ok) {
      auto [i, j] = todo.front();
      todo.pop_front();
      if (!seen.insert({i, j}).second)
        continue;
      for (int x = 0; x < d; ++x) {
        int y = states_[j].perm[x];
        if (states_[i].perm[y] != x) {
          ok = false;
          break;
        }
        todo.push_back({states_[i].next[y], states_[j].next[x]});
      }
    }
    involution_[s] = ok;
  }
}

int MealyAutomaton::index(const std::string &name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end())
    throw Error("ParseError", "unknown state '" + name + "'");
  return it->second;
}

namespace {

std::vector<int> parse_perm(const std::string &s, int d) {
  std::vector<int> p(d);
  std::iota(p.begin(), p.end(), 0);
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '(')
      throw Error("ParseError", "bad permutation '" + s + "'");
    auto j = s.find(')', i);
    if (j == std::string::npos)
      throw Error("ParseError", "bad permutation '" + s + "'");
    std::vector<int> cyc;
    for (std::size_t k = i + 1; k < j; ++k) {
      if (!std::isdigit((unsigned char)s[k]) || s[k] - '0' >= d)
        throw Error("ParseError", "bad letter in permutation '" + s + "'");
      cyc.push_back(s[k] - '0');
    }
    for (std::size_t k = 0; k < cyc.size(); ++k)
      p[cyc[k]] = cyc[(k + 1) % cyc.size()];
    i = j + 1;
  }
  std::vector<int> seen(d, 0);
  for (int x : p)
    if (seen[x]++)
      throw Error("ParseError", "permutation '" + s + "' repeats a letter");
  return p;
}

std::string perm_text(const std::vector<int> &p) {
  std::string s;
  std::vector<bool> done(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (done[i] || p[i] == (int)i)
      continue;
    s += "(";
    for (std::size_t j = i; !done[j]; j = p[j]) {
      done[j] = true;
      s += char('0' + j);
    }
    s += ")";
  }
  return s;
}

} // namespace

MealyAutomaton parse_automaton(const std::string &src) {
  auto h = text::parse_header(src);
  if (h.name != "SS")
    text::fail(src, 0, "expected SS[d=..]{...}");
  int d = text::param_int(h, "d", 2);
  std::string label;
  if (auto it = h.params.find("name"); it != h.params.end())
    label = it->second;
  static const std::regex entry(R"(^([A-Za-z_][A-Za-z0-9_]*|1)\s*=\s*\(([^()]*)\)\s*((\([0-9]+\)\s*)*)$)");
  std::vector<std::string> names;
  std::vector<std::vector<int>> perms;
  std::vector<std::vector<std::string>> next;
  for (const auto &item : text::split_top(h.body, ';')) {
    if (item.s.empty())
      continue;
    std::smatch m;
    if (!std::regex_match(item.s, m, entry))
      text::fail(src, item.offset, "expected 'name=(s0,...,s_{d-1})(cycles)'");
    names.push_back(m[1]);
    std::vector<std::string> ns;
    for (const auto &t : text::split_top(text::Span{m[2].str(), 0}, ','))
      ns.push_back(t.s);
    next.push_back(ns);
    std::string cyc = m[3];
    cyc.erase(std::remove_if(cyc.begin(), cyc.end(), ::isspace), cyc.end());
    try {
      perms.push_back(parse_perm(cyc, d));
    } catch (const Error &e) {
      text::fail(src, item.offset, e.what());
    }
  }
  try {
    return MealyAutomaton(d, names, perms, next, label);
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    text::fail(src, h.body.offset, e.what());
  }
}

std::string to_string(const MealyAutomaton &a) {
  std::string s = "SS[d=" + std::to_string(a.d());
  if (!a.label().empty())
    s += ",name=" + a.label();
  s += "]{";
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((int)i == a.trivial_state())
      continue;
    const auto &st = a.state((int)i);
    s += first ? " " : "; ";
    first = false;
    s += st.name + "=(";
    for (int x = 0; x < a.d(); ++x)
      s += (x ? "," : "") + a.state(st.next[x]).name;
    s += ")" + perm_text(st.perm);
  }
  return s + " }";
}

namespace {

const std::map<std::string, std::string> &builtins() {
  static const std::map<std::string, std::string> m{
      {"grigorchuk", "SS[d=2,name=grigorchuk]{ a=(1,1)(01); b=(a,c); c=(a,d); d=(1,b) }"},
      {"gupta-sidki",
       "SS[d=3,name=gupta-sidki]{ a=(1,1,1)(012); A=(1,1,1)(021); t=(a,A,t); T=(A,a,T) }"},
      {"odometer", "SS[d=2,name=odometer]{ tau=(1,tau)(01) }"},
      {"exponential", "SS[d=2,name=exponential]{ x=(x,x)(01) }"},
      {"polynomial", "SS[d=2,name=polynomial]{ tau=(1,tau)(01); y=(y,tau) }"},
  };
  return m;
}

} // namespace

MealyAutomaton builtin_automaton(const std::string &name) {
  auto it = builtins().find(name);
  if (it == builtins().end())
    throw Error("DomainError", "unknown automaton '" + name + "'");
  return parse_automaton(it->second);
}

std::vector<std::string> builtin_automaton_names() {
  std::vector<std::string> out;
  for (const auto &[k, v] : builtins())
    out.push_back(k);
  return out;
}

// ---- words ----

AutomatonWord parse_word(const MealyAutomaton &a, const std::string &s) {
  AutomatonWord w;
  std::string t = text::trim(s);
  if (t.empty() || t == "1")
    return w;
  static const std::regex tok(R"(^\s*([A-Za-z_][A-Za-z0-9_]*|1)\s*(\^\s*(-?[0-9]+))?\s*$)");
  for (const auto &part : text::split_top(text::Span{t, 0}, '*')) {
    std::smatch m;
    if (!std::regex_match(part.s, m, tok))
      throw Error("ParseError", "bad automaton word '" + s + "'");
    int st = a.index(m[1]);
    long e = m[3].matched ? std::stol(m[3]) : 1;
    for (long k = 0; k < std::labs(e); ++k)
      w.push_back({st, e < 0});
  }
  return reduce(a, w);
}

std::string to_string(const MealyAutomaton &a, const AutomatonWord &w) {
  if (w.empty())
    return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i)
      s += "*";
    s += a.state(w[i].state).name;
    if (w[i].inv)
      s += "^-1";
  }
  return s;
}

AutomatonWord reduce(const MealyAutomaton &a, AutomatonWord w) {
  AutomatonWord out;
  for (Gen g : w) {
    g.state = a.representative(g.state);
    if (a.acts_trivially(g.state))
      continue;
    if (a.is_involution(g.state))
      g.inv = false;
    if (!out.empty() && out.back().state == g.state &&
        (out.back().inv != g.inv || a.is_involution(g.state))) {
      out.pop_back();
      continue;
    }
    out.push_back(g);
  }
  return out;
}

AutomatonWord inverse(const AutomatonWord &w) {
  AutomatonWord out(w.rbegin(), w.rend());
  for (auto &g : out)
    g.inv = !g.inv;
  return out;
}

AutomatonWord product(const MealyAutomaton &a, const AutomatonWord &v, const AutomatonWord &w) {
  AutomatonWord x = v;
  x.insert(x.end(), w.begin(), w.end());
  return reduce(a, x);
}

int act_letter(const MealyAutomaton &a, const AutomatonWord &w, int x, AutomatonWord *section) {
  AutomatonWord sec(w.size());
  int y = x;
  for (std::size_t i = w.size(); i-- > 0;) {
    const auto &st = a.state(w[i].state);
    if (!w[i].inv) {
      sec[i] = {st.next[y], false};
      y = st.perm[y];
    } else {
      int z = inverse_perm(st.perm)[y];
      sec[i] = {st.next[z], true};
      y = z;
    }
  }
  if (section)
    *section = reduce(a, sec);
  return y;
}

Word act(const MealyAutomaton &a, const AutomatonWord &w, const Word &x) {
  Word out;
  AutomatonWord cur = w;
  for (char c : x) {
    AutomatonWord nxt;
    out.push_back((char)act_letter(a, cur, (unsigned char)c, &nxt));
    cur = std::move(nxt);
  }
  return out;
}

AutomatonWord section(const MealyAutomaton &a, const AutomatonWord &w, const Word &x) {
  AutomatonWord cur = reduce(a, w);
  for (char c : x) {
    AutomatonWord nxt;
    act_letter(a, cur, (unsigned char)c, &nxt);
    cur = std::move(nxt);
  }
  return cur;
}

RationalPoint act(const MealyAutomaton &a, const AutomatonWord &w, const RationalPoint &p) {
  Word pre;
  AutomatonWord cur = reduce(a, w);
  for (char c : p.pre) {
    AutomatonWord nxt;
    pre.push_back((char)act_letter(a, cur, (unsigned char)c, &nxt));
    cur = std::move(nxt);
  }
  std::map<std::pair<AutomatonWord, std::size_t>, std::size_t> seen;
  Word out;
  std::size_t pos = 0;
  for (;;) {
    auto key = std::make_pair(cur, pos);
    if (auto it = seen.find(key); it != seen.end()) {
      Word head = out.substr(0, it->second), per = out.substr(it->second);
      return canonicalize_point(p.root, pre + head, per, a.d());
    }
    seen.emplace(key, out.size());
    if (seen.size() > kDefaultMaxStates)
      throw internal_error("orbit of a periodic point did not close");
    AutomatonWord nxt;
    out.push_back((char)act_letter(a, cur, (unsigned char)p.period[pos], &nxt));
    cur = std::move(nxt);
    pos = (pos + 1) % p.period.size();
  }
}

std::vector<int> permutation(const MealyAutomaton &a, const AutomatonWord &w) {
  std::vector<int> p(a.d());
  for (int x = 0; x < a.d(); ++x)
    p[x] = act_letter(a, w, x);
  return p;
}

WordAutomaton explore(const MealyAutomaton &a, const std::vector<AutomatonWord> &seeds,
                      std::size_t max_states) {
  WordAutomaton out;
  std::deque<int> todo;
  auto add = [&](const AutomatonWord &w) {
    auto [it, fresh] = out.index.emplace(w, (int)out.words.size());
    if (fresh) {
      if (out.words.size() >= max_states)
        throw Error("Undecided", "more than " + std::to_string(max_states) +
                                     " section states; raise --max-size");
      out.words.push_back(w);
      out.perm.emplace_back();
      out.next.emplace_back();
      todo.push_back(it->second);
    }
    return it->second;
  };
  for (const auto &s : seeds)
    add(reduce(a, s));
  while (!todo.empty()) {
    int i = todo.front();
    todo.pop_front();
    std::vector<int> perm(a.d()), next(a.d());
    for (int x = 0; x < a.d(); ++x) {
      AutomatonWord sec;
      perm[x] = act_letter(a, out.words[i], x, &sec);
      next[x] = add(sec);
    }
    out.perm[i] = perm;
    out.next[i] = next;
  }
  return out;
}

std::vector<int> minimize(const WordAutomaton &w) { return refine(w.perm, w.next); }

bool is_trivial(const MealyAutomaton &a, const AutomatonWord &w, std::size_t max_states) {
  auto r = reduce(a, w);
  if (r.empty())
    return true;
  auto wa = explore(a, {r}, max_states);
  for (const auto &p : wa.perm)
    if (!is_identity_perm(p))
      return false;
  return true;
}

bool equal(const MealyAutomaton &a, const AutomatonWord &v, const AutomatonWord &w,
           std::size_t max_states) {
  return is_trivial(a, product(a, inverse(v), w), max_states);
}

namespace {

bool shorter(const AutomatonWord &x, const AutomatonWord &y) {
  if (x.size() != y.size())
    return x.size() < y.size();
  return x < y;
}

// classes of the quotient graph lying on a cycle, then everything reachable from them
std::set<int> cyclic_closure(const std::vector<int> &cls, const WordAutomaton &wa) {
  int nc = 0;
  for (int c : cls)
    nc = std::max(nc, c + 1);
  std::vector<std::set<int>> adj(nc);
  for (std::size_t i = 0; i < wa.words.size(); ++i)
    for (int j : wa.next[i])
      adj[cls[i]].insert(cls[j]);
  auto reach = [&](int s) {
    std::set<int> seen;
    std::vector<int> st(adj[s].begin(), adj[s].end());
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      if (!seen.insert(u).second)
        continue;
      for (int v : adj[u])
        st.push_back(v);
    }
    return seen;
  };
  std::set<int> out;
  for (int c = 0; c < nc; ++c) {
    auto r = reach(c);
    if (r.count(c)) {
      out.insert(c);
      out.insert(r.begin(), r.end());
    }
  }
  return out;
}

} // namespace

std::vector<AutomatonWord> nucleus(const MealyAutomaton &a, std::vector<AutomatonWord> gens,
                                   std::size_t max_size, int max_iter) {
  if (gens.empty())
    for (std::size_t i = 0; i < a.size(); ++i)
      gens.push_back({{(int)i, false}});
  for (auto &g : gens)
    g = reduce(a, g);
  std::size_t ng = gens.size();
  for (std::size_t i = 0; i < ng; ++i)
    gens.push_back(inverse(gens[i]));
  std::vector<AutomatonWord> cur;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<AutomatonWord> seeds = gens;
    seeds.push_back({});
    for (const auto &x : cur)
      for (const auto &y : cur)
        seeds.push_back(product(a, x, y));
    WordAutomaton wa;
    try {
      wa = explore(a, seeds, std::max<std::size_t>(max_size * 4, 1000));
    } catch (const Error &e) {
      if (e.kind() != "Undecided")
        throw;
      throw Error("Exceeded", "nucleus search exceeds max_size = " + std::to_string(max_size));
    }
    auto cls = minimize(wa);
    auto keep = cyclic_closure(cls, wa);
    std::map<int, AutomatonWord> rep;
    for (std::size_t i = 0; i < wa.words.size(); ++i) {
      if (!keep.count(cls[i]))
        continue;
      auto f = rep.find(cls[i]);
      if (f == rep.end() || shorter(wa.words[i], f->second))
        rep[cls[i]] = wa.words[i];
    }
    if (rep.size() > max_size)
      throw Error("Exceeded", "nucleus candidate exceeds max_size = " + std::to_string(max_size));
    std::vector<AutomatonWord> next;
    for (const auto &[c, w] : rep)
      next.push_back(w);
    std::sort(next.begin(), next.end(), shorter);
    if (next.size() == cur.size())
      return next;
    cur = next;
  }
  throw Error("Exceeded", "nucleus not stable after max_iter = " + std::to_string(max_iter));
}

namespace {

struct Quotient {
  int start;
  std::vector<std::vector<int>> perm, next; // per class
  std::vector<bool> trivial;
};

Quotient quotient(const MealyAutomaton &a, const AutomatonWord &w) {
  auto wa = explore(a, {reduce(a, w)});
  auto cls = minimize(wa);
  int nc = *std::max_element(cls.begin(), cls.end()) + 1;
  Quotient q;
  q.start = cls[0];
  q.perm.assign(nc, {});
  q.next.assign(nc, {});
  for (std::size_t i = 0; i < wa.words.size(); ++i) {
    q.perm[cls[i]] = wa.perm[i];
    std::vector<int> nx;
    for (int j : wa.next[i])
      nx.push_back(cls[j]);
    q.next[cls[i]] = nx;
  }
  q.trivial.assign(nc, true);
  for (int c = 0; c < nc; ++c)
    if (!is_identity_perm(q.perm[c]))
      q.trivial[c] = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (int c = 0; c < nc; ++c)
      if (q.trivial[c])
        for (int j : q.next[c])
          if (!q.trivial[j]) {
            q.trivial[c] = false;
            changed = true;
            break;
          }
  }
  return q;
}

// strongly connected components (Tarjan) on nontrivial classes
struct Sccs {
  std::vector<int> comp;      // class -> component (-1 for trivial)
  std::vector<bool> cyclic;   // component has an internal edge
  std::vector<bool> multiple; // some node has two internal out-edges
  int count = 0;
};

Sccs sccs(const Quotient &q) {
  int n = (int)q.perm.size();
  Sccs r;
  r.comp.assign(n, -1);
  std::vector<int> idx(n, -1), low(n, 0), st;
  std::vector<bool> on(n, false);
  int counter = 0;
  std::function<void(int)> dfs = [&](int v) {
    idx[v] = low[v] = counter++;
    st.push_back(v);
    on[v] = true;
    for (int u : q.next[v]) {
      if (q.trivial[u])
        continue;
      if (idx[u] < 0) {
        dfs(u);
        low[v] = std::min(low[v], low[u]);
      } else if (on[u]) {
        low[v] = std::min(low[v], idx[u]);
      }
    }
    if (low[v] == idx[v]) {
      for (;;) {
        int u = st.back();
        st.pop_back();
        on[u] = false;
        r.comp[u] = r.count;
        if (u == v)
          break;
      }
      ++r.count;
    }
  };
  for (int v = 0; v < n; ++v)
    if (!q.trivial[v] && idx[v] < 0)
      dfs(v);
  r.cyclic.assign(r.count, false);
  r.multiple.assign(r.count, false);
  for (int v = 0; v < n; ++v) {
    if (q.trivial[v])
      continue;
    int internal = 0;
    for (int u : q.next[v])
      if (!q.trivial[u] && r.comp[u] == r.comp[v])
        ++internal;
    if (internal > 0)
      r.cyclic[r.comp[v]] = true;
    if (internal > 1)
      r.multiple[r.comp[v]] = true;
  }
  return r;
}

} // namespace

Activity activity_degree(const MealyAutomaton &a, const AutomatonWord &w) {
  Quotient q = quotient(a, w);
  Activity act;
  if (q.trivial[q.start])
    return act;
  Sccs s = sccs(q);
  // reachable components from the start
  int n = (int)q.perm.size();
  std::vector<bool> seen(n, false);
  std::vector<int> st{q.start};
  while (!st.empty()) {
    int v = st.back();
    st.pop_back();
    if (seen[v])
      continue;
    seen[v] = true;
    for (int u : q.next[v])
      if (!q.trivial[u])
        st.push_back(u);
  }
  for (int v = 0; v < n; ++v)
    if (seen[v] && s.multiple[s.comp[v]]) {
      act.kind = Activity::Kind::Exponential;
      act.degree = -1;
      return act;
    }
  // longest chain of cyclic components along the condensation DAG
  std::map<int, int> memo;
  std::function<int(int)> chain = [&](int c) -> int {
    if (auto it = memo.find(c); it != memo.end())
      return it->second;
    int best = 0;
    for (int v = 0; v < n; ++v) {
      if (q.trivial[v] || s.comp[v] != c)
        continue;
      for (int u : q.next[v])
        if (!q.trivial[u] && s.comp[u] != c)
          best = std::max(best, chain(s.comp[u]));
    }
    int r = best + (s.cyclic[c] ? 1 : 0);
    memo[c] = r;
    return r;
  };
  int cycles = chain(s.comp[q.start]);
  if (cycles == 0)
    return act;
  act.kind = Activity::Kind::Polynomial;
  act.degree = cycles - 1;
  return act;
}

std::string to_string(const Activity &x) {
  switch (x.kind) {
  case Activity::Kind::Finitary:
    return "finitary";
  case Activity::Kind::Exponential:
    return "exponential";
  default:
    return x.degree == 0 ? "bounded" : "polynomial(" + std::to_string(x.degree) + ")";
  }
}

Integer theta(const MealyAutomaton &a, const AutomatonWord &w, int k) {
  Quotient q = quotient(a, w);
  std::map<int, Integer> level{{q.start, 1}};
  for (int j = 0; j < k; ++j) {
    std::map<int, Integer> nl;
    for (const auto &[c, m] : level)
      for (int u : q.next[c])
        nl[u] += m;
    level = std::move(nl);
  }
  Integer total = 0;
  for (const auto &[c, m] : level)
    if (!is_identity_perm(q.perm[c]))
      total += m;
  return total;
}

std::vector<RationalPoint> active_rays(const MealyAutomaton &a, const AutomatonWord &w) {
  Activity act = activity_degree(a, w);
  if (!act.bounded())
    throw Error("NotBounded", to_string(a, w) + " has " + to_string(act) + " activity");
  Quotient q = quotient(a, w);
  std::set<RationalPoint> out;
  if (q.trivial[q.start])
    return {};
  Sccs s = sccs(q);
  // walk non-cyclic classes to the first cyclic one, then follow its cycle
  std::function<void(int, Word)> walk = [&](int v, Word path) {
    if (s.cyclic[s.comp[v]]) {
      Word per;
      int u = v;
      do {
        int nxt = -1;
        for (int x = 0; x < a.d(); ++x) {
          int t = q.next[u][x];
          if (!q.trivial[t] && s.comp[t] == s.comp[v]) {
            per.push_back((char)x);
            nxt = t;
            break;
          }
        }
        u = nxt;
      } while (u != v);
      out.insert(canonicalize_point(0, path, per, a.d()));
      return;
    }
    for (int x = 0; x < a.d(); ++x) {
      int t = q.next[v][x];
      if (!q.trivial[t])
        walk(t, path + char(x));
    }
  };
  walk(q.start, "");
  return {out.begin(), out.end()};
}

} // namespace germkit
