#pragma once

// Independent reference computations. These work from raw data (state tables,
// coefficient lists, piece lists) and do not call the library algorithms they
// are used to check.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "germkit/germcomplex.hpp"
#include "germkit/jets.hpp"
#include "germkit/pmobius.hpp"
#include "germkit/selfsim.hpp"

namespace oracle {

using germkit::Integer;
using germkit::Rational;

// ---- automata: elements are lists of states, rightmost acts first

using States = std::vector<int>;

inline std::vector<int> act_states(const germkit::MealyAutomaton &a, const States &g,
                                   std::vector<int> w) {
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    int cur = *it;
    for (auto &x : w) {
      int y = a.state(cur).perm[x];
      cur = a.state(cur).next[x];
      x = y;
    }
  }
  return w;
}

inline States section_states(const germkit::MealyAutomaton &a, const States &g,
                             const std::vector<int> &v) {
  States s = g;
  std::vector<int> w = v;
  for (std::size_t k = s.size(); k-- > 0;) {
    for (auto &x : w) {
      int y = a.state(s[k]).perm[x];
      s[k] = a.state(s[k]).next[x];
      x = y;
    }
  }
  return s;
}

inline std::vector<std::vector<int>> all_words(int d, int len) {
  std::vector<std::vector<int>> out{{}};
  for (int i = 0; i < len; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto &w : out)
      for (int x = 0; x < d; ++x) {
        next.push_back(w);
        next.back().push_back(x);
      }
    out = std::move(next);
  }
  return out;
}

// action on every word of the given length
inline std::vector<std::vector<int>> signature(const germkit::MealyAutomaton &a, const States &g,
                                               int len) {
  std::vector<std::vector<int>> sig;
  for (const auto &w : all_words(a.d(), len))
    sig.push_back(act_states(a, g, w));
  return sig;
}

// distinct actions (on words of length sig_len) among all depth-`depth`
// sections of all pairwise products of states
inline std::set<std::vector<std::vector<int>>>
brute_nucleus(const germkit::MealyAutomaton &a, int depth, int sig_len) {
  std::set<std::vector<std::vector<int>>> out;
  auto words = all_words(a.d(), depth);
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t t = 0; t < a.size(); ++t)
      for (const auto &v : words)
        out.insert(signature(a, section_states(a, {(int)s, (int)t}, v), sig_len));
  return out;
}

// words v of length k whose section moves some first letter
inline long count_active(const germkit::MealyAutomaton &a, const States &g, int k) {
  long n = 0;
  for (const auto &v : all_words(a.d(), k)) {
    States s = section_states(a, g, v);
    for (int x = 0; x < a.d(); ++x)
      if (act_states(a, s, {x})[0] != x) {
        ++n;
        break;
      }
  }
  return n;
}

// ---- truncated power series

using Series = std::vector<Rational>; // index i = coefficient of x^i, index 0 unused

inline Series mul(const Series &f, const Series &g, int r) {
  Series h(r + 1, Rational(0));
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size() && i + j <= (std::size_t)r; ++j)
      h[i + j] += f[i] * g[j];
  return h;
}

// f(g(x)) mod x^(r+1)
inline Series compose(const Series &f, const Series &g, int r) {
  Series out(r + 1, Rational(0)), pw(r + 1, Rational(0));
  pw[0] = 1;
  for (int i = 1; i <= r; ++i) {
    pw = mul(pw, g, r);
    for (int k = 0; k <= r; ++k)
      out[k] += f[i] * pw[k];
  }
  return out;
}

inline Series series(const germkit::Jet &j) {
  Series s{Rational(0)};
  for (const auto &c : j.coeffs())
    s.push_back(c);
  return s;
}

// ---- complexes

// rank of H~ of a join of discrete sets: only in degree k-1, equal to prod(n_i - 1)
inline Integer join_top_rank(const std::vector<std::size_t> &sizes) {
  Integer p = 1;
  for (auto n : sizes)
    p *= Integer((unsigned long)n) - 1;
  return p;
}

// H~_1 of a graph: E - V + components
inline long graph_h1(std::size_t vertices, const std::vector<std::pair<int, int>> &edges) {
  std::vector<int> parent(vertices);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  long comps = (long)vertices;
  for (auto [u, v] : edges) {
    int a = find(u), b = find(v);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return (long)edges.size() - (long)vertices + comps;
}

// cubes of the product of stars whose vertices all have at most n hidden
// coordinates: per point, 1 + g cells avoid hidden, 2 + g touch it
inline Integer sublevel_cube_count(const std::vector<std::size_t> &germ_counts, std::size_t n) {
  std::vector<Integer> by_hidden{1};
  for (auto g : germ_counts) {
    std::vector<Integer> next(by_hidden.size() + 1, 0);
    for (std::size_t h = 0; h < by_hidden.size(); ++h) {
      next[h] += by_hidden[h] * Integer((unsigned long)(1 + g));
      next[h + 1] += by_hidden[h] * Integer((unsigned long)(2 + g));
    }
    by_hidden = next;
  }
  Integer total = 0;
  for (std::size_t h = 0; h <= n && h < by_hidden.size(); ++h)
    total += by_hidden[h];
  return total;
}

// ---- piecewise-projective maps: product of right/left derivative ratios,
// identity outside the pieces

inline Rational mobius_derivative(const germkit::MobiusPiece &p, const Rational &t) {
  Rational den = p.c * t + p.d;
  return (p.a * p.d - p.b * p.c) / (den * den);
}

inline Rational derivative_jump_product(const germkit::PProjMap &f) {
  std::map<Rational, std::pair<Rational, Rational>> at; // point -> (left, right)
  for (const auto &p : f.pieces()) {
    at.try_emplace(p.lo, Rational(1), Rational(1));
    at.try_emplace(p.hi, Rational(1), Rational(1));
    at[p.lo].second = mobius_derivative(p, p.lo);
    at[p.hi].first = mobius_derivative(p, p.hi);
  }
  Rational prod = 1;
  for (const auto &[x, lr] : at)
    prod *= lr.second / lr.first;
  return prod;
}

// ---- circle maps: slope-exponent jumps over breakpoints with a given binary tail

inline long slope_jump_sum(const germkit::PLCircleMap &f, const germkit::TailClass &c) {
  const auto &ps = f.pieces();
  long sum = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto &right = ps[i];
    const auto &left = ps[(i + ps.size() - 1) % ps.size()];
    Rational x = right.lo;
    if (germkit::tail_class(germkit::rational_to_point(x)) != c)
      continue;
    sum += right.slope_exp - left.slope_exp;
  }
  return sum;
}

} // namespace oracle
