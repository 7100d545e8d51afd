#include "germkit/germcomplex.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>

namespace germkit {

namespace {

// mod-translation classes of Tbar words of length <= c, identity excluded
std::vector<TbarElement> tbar_ball(int c) {
  auto gens = tbar_generators();
  std::map<std::string, TbarElement> seen;
  std::vector<TbarElement> frontier{TbarElement::identity()};
  seen[to_string(TbarElement::identity())] = TbarElement::identity();
  for (int len = 0; len < c; ++len) {
    std::vector<TbarElement> next;
    for (const auto &f : frontier)
      for (const auto &g : gens) {
        TbarElement h = mod_translations(compose(g, f));
        if (seen.emplace(to_string(h), h).second)
          next.push_back(h);
      }
    frontier = std::move(next);
  }
  std::vector<TbarElement> out;
  for (const auto &[k, f] : seen)
    if (!f.is_translation())
      out.push_back(f);
  return out;
}

long max_cells() {
  if (const char *s = std::getenv("GERMKIT_MAX_CELLS")) {
    try {
      return std::stol(s);
    } catch (const std::exception &) {
    }
  }
  return 200000;
}

using SparseRow = std::vector<std::pair<std::size_t, Rational>>; // sorted by column

// row - f * pivot
SparseRow axpy(const SparseRow &row, const Rational &f, const SparseRow &pivot) {
  SparseRow out;
  out.reserve(row.size() + pivot.size());
  std::size_t i = 0, j = 0;
  while (i < row.size() || j < pivot.size()) {
    if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
      out.push_back(row[i++]);
    } else if (i == row.size() || pivot[j].first < row[i].first) {
      out.push_back({pivot[j].first, -f * pivot[j].second});
      ++j;
    } else {
      Rational v = row[i].second - f * pivot[j].second;
      if (v != 0)
        out.push_back({row[i].first, v});
      ++i;
      ++j;
    }
  }
  return out;
}

// rank over Q by reduction on the last nonzero column of each row
long rank_q(std::vector<SparseRow> rows) {
  std::map<std::size_t, SparseRow> pivots;
  for (auto &row : rows) {
    while (!row.empty()) {
      auto it = pivots.find(row.back().first);
      if (it == pivots.end()) {
        pivots.emplace(row.back().first, std::move(row));
        break;
      }
      row = axpy(row, row.back().second / it->second.back().second, it->second);
    }
  }
  return (long)pivots.size();
}

struct CubeSets {
  std::vector<std::size_t> hidden, edge; // window indices
};

CubeSets cube_sets(const Cube &c) {
  CubeSets s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].kind == CubeCoord::Kind::Fixed && c[i].value == kHidden)
      s.hidden.push_back(i);
    else if (c[i].kind != CubeCoord::Kind::Fixed)
      s.edge.push_back(i);
  }
  return s;
}

} // namespace

Window make_window(std::vector<RationalPoint> points, std::vector<std::vector<std::string>> germs) {
  if (points.size() != germs.size())
    throw Error("DomainError", "window needs one germ list per point");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a] < points[b]; });
  Window w;
  for (auto i : order) {
    if (!w.points.empty() && w.points.back() == points[i])
      throw Error("DomainError", "window point " + to_string(points[i]) + " repeated");
    auto g = germs[i];
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.empty())
      throw Error("DomainError", "empty germ list at " + to_string(points[i]));
    w.points.push_back(points[i]);
    w.germs.push_back(g);
  }
  return w;
}

std::vector<std::string> truncated_germs(const Instance &inst, const RationalPoint &p, int c) {
  std::vector<std::string> out;
  switch (inst.kind()) {
  case InstanceKind::VA:
    for (const auto &f : tbar_ball(c))
      out.push_back(to_string(f));
    break;
  case InstanceKind::TA: {
    std::vector<std::string> side{"id"};
    for (const auto &f : tbar_ball(c))
      side.push_back(to_string(f));
    for (const auto &a : side)
      for (const auto &b : side)
        if (a != "id" || b != "id")
          out.push_back("(" + a + " | " + b + ")");
    break;
  }
  case InstanceKind::Example2:
    if (inst.value_rank(inst.orbit(p)) > 0)
      for (int k = -c; k <= c; ++k)
        if (k != 0)
          out.push_back("r-l=" + std::to_string(k));
    break;
  case InstanceKind::RN:
    inst.value_rank(inst.orbit(p)); // throws for automata without known germ data
    if (p.period == Word(1, char(1)))
      out = {"b", "c", "d"};
    break;
  }
  return out;
}

Window instance_window(const Instance &inst, const std::vector<RationalPoint> &points, int c) {
  std::vector<std::vector<std::string>> germs;
  for (const auto &p : points)
    germs.push_back(truncated_germs(inst, p, c));
  return make_window(points, germs);
}

std::size_t morse(const Vertex &v) { return std::count(v.begin(), v.end(), kHidden); }

std::size_t dimension(const Cube &c) {
  return std::count_if(c.begin(), c.end(),
                       [](const CubeCoord &x) { return x.kind != CubeCoord::Kind::Fixed; });
}

std::vector<Vertex> cube_vertices(const Cube &c) {
  std::vector<Vertex> out{{}};
  for (const auto &x : c) {
    std::vector<int> opts;
    switch (x.kind) {
    case CubeCoord::Kind::Fixed:
      opts = {x.value};
      break;
    case CubeCoord::Kind::EdgeTrivialHidden:
      opts = {kTrivial, kHidden};
      break;
    case CubeCoord::Kind::EdgeHiddenGerm:
      opts = {kHidden, x.value};
      break;
    }
    std::vector<Vertex> next;
    for (const auto &v : out)
      for (int o : opts) {
        Vertex w = v;
        w.push_back(o);
        next.push_back(w);
      }
    out = std::move(next);
  }
  return out;
}

bool is_singular(const Cube &c) {
  for (const auto &x : c)
    if (x.kind == CubeCoord::Kind::EdgeHiddenGerm ||
        (x.kind == CubeCoord::Kind::Fixed && x.value >= 0))
      return true;
  return false;
}

std::string to_string(const Cube &c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i)
      s += ", ";
    const auto &x = c[i];
    switch (x.kind) {
    case CubeCoord::Kind::Fixed:
      s += x.value == kTrivial ? "1" : x.value == kHidden ? "*" : "g" + std::to_string(x.value);
      break;
    case CubeCoord::Kind::EdgeTrivialHidden:
      s += "1-*";
      break;
    case CubeCoord::Kind::EdgeHiddenGerm:
      s += "*-g" + std::to_string(x.value);
      break;
    }
  }
  return s + ")";
}

SimplicialComplex join_of_discrete(const std::vector<std::size_t> &sizes) {
  SimplicialComplex c;
  std::vector<int> base;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    base.push_back((int)c.vertices.size());
    for (std::size_t j = 0; j < sizes[i]; ++j)
      c.vertices.push_back(std::to_string(i) + ":" + std::to_string(j));
  }
  if (sizes.empty() || std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) {
    // a join with an empty factor is the join of the remaining ones
    std::vector<std::size_t> rest;
    for (auto s : sizes)
      if (s)
        rest.push_back(s);
    if (rest.size() == sizes.size())
      return c;
    return join_of_discrete(rest);
  }
  std::vector<std::vector<int>> facets{{}};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::vector<std::vector<int>> next;
    for (const auto &f : facets)
      for (std::size_t j = 0; j < sizes[i]; ++j) {
        auto g = f;
        g.push_back(base[i] + (int)j);
        next.push_back(g);
      }
    facets = std::move(next);
  }
  c.facets = facets;
  return c;
}

SimplicialComplex descending_link(const Window &w, const Vertex &v) {
  if (v.size() != w.points.size())
    throw Error("DomainError", "vertex does not match the window");
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> hidden;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == kHidden) {
      sizes.push_back(w.germs[i].size() + 1);
      hidden.push_back(i);
    }
  SimplicialComplex c = join_of_discrete(sizes);
  c.vertices.clear();
  for (auto i : hidden) {
    std::string p = to_string(w.points[i]);
    c.vertices.push_back(p + ":1");
    for (const auto &g : w.germs[i])
      c.vertices.push_back(p + ":" + g);
  }
  return c;
}

std::vector<long> reduced_homology(const SimplicialComplex &c, int maxdim) {
  // faces by dimension, -1 (empty face) through maxdim + 1
  std::vector<std::set<std::vector<int>>> faces(maxdim + 3);
  if (!c.facets.empty())
    faces[0].insert(std::vector<int>{});
  for (const auto &f : c.facets) {
    std::size_t n = f.size();
    for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
      std::vector<int> s;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1)
          s.push_back(f[i]);
      if ((int)s.size() <= maxdim + 2)
        faces[s.size()].insert(s);
    }
  }
  std::vector<std::vector<std::vector<int>>> fl(faces.size());
  for (std::size_t k = 0; k < faces.size(); ++k)
    fl[k].assign(faces[k].begin(), faces[k].end());
  // rank of boundary from faces of size k to size k-1
  auto boundary_rank = [&](std::size_t k) -> long {
    if (k == 0 || k >= fl.size() || fl[k].empty() || fl[k - 1].empty())
      return 0;
    std::map<std::vector<int>, std::size_t> idx;
    for (std::size_t i = 0; i < fl[k - 1].size(); ++i)
      idx[fl[k - 1][i]] = i;
    std::vector<SparseRow> m(fl[k].size());
    for (std::size_t i = 0; i < fl[k].size(); ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        auto g = fl[k][i];
        g.erase(g.begin() + j);
        m[i].push_back({idx[g], Rational((j % 2) ? -1 : 1)});
      }
      std::sort(m[i].begin(), m[i].end(),
                [](const auto &x, const auto &y) { return x.first < y.first; });
    }
    return rank_q(std::move(m));
  };
  std::vector<long> out;
  for (int d = 0; d <= maxdim; ++d) {
    std::size_t k = d + 1; // face size
    long cells = (long)fl[k].size();
    out.push_back(cells - boundary_rank(k) - boundary_rank(k + 1));
  }
  return out;
}

std::vector<Cube> sublevel_cubes(const Window &w, std::size_t n) {
  std::vector<std::vector<std::pair<CubeCoord, int>>> options;
  for (const auto &g : w.germs) {
    std::vector<std::pair<CubeCoord, int>> o;
    o.push_back({{CubeCoord::Kind::Fixed, kTrivial}, 0});
    for (int i = 0; i < (int)g.size(); ++i)
      o.push_back({{CubeCoord::Kind::Fixed, i}, 0});
    o.push_back({{CubeCoord::Kind::Fixed, kHidden}, 1});
    o.push_back({{CubeCoord::Kind::EdgeTrivialHidden, 0}, 1});
    for (int i = 0; i < (int)g.size(); ++i)
      o.push_back({{CubeCoord::Kind::EdgeHiddenGerm, i}, 1});
    options.push_back(o);
  }
  std::vector<Cube> out;
  Cube cur;
  long cap = max_cells();
  auto rec = [&](auto &self, std::size_t i, std::size_t weight) -> void {
    if (weight > n)
      return;
    if (i == options.size()) {
      out.push_back(cur);
      if ((long)out.size() > cap)
        throw Error("Inconclusive", "more than " + std::to_string(cap) + " cubes");
      return;
    }
    for (const auto &[c, wt] : options[i]) {
      cur.push_back(c);
      self(self, i + 1, weight + wt);
      cur.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

bool cube_stabilizer_membership(const Instance &inst, const InstanceElement &g, const Window &w,
                                const Cube &c) {
  auto sets = cube_sets(c);
  std::set<RationalPoint> m, mp;
  for (auto i : sets.hidden) {
    m.insert(w.points[i]);
    mp.insert(w.points[i]);
  }
  for (auto i : sets.edge)
    mp.insert(w.points[i]);
  for (const auto &x : inst.sing(g))
    if (!m.count(x))
      return false;
  auto preserved = [&](const std::set<RationalPoint> &s) {
    for (const auto &x : s)
      if (!s.count(inst.evaluate(g, x)))
        return false;
    return true;
  };
  return preserved(m) && preserved(mp);
}

OrbitCount count_cube_orbits(const Instance &inst, const Window &w, std::size_t n, int bfs_depth) {
  int d = 2;
  switch (inst.kind()) {
  case InstanceKind::VA:
    break;
  case InstanceKind::RN:
    d = std::get<RNElement>(inst.identity()).d();
    break;
  default:
    throw Error("UnsupportedOrbit", "cube orbit counting needs a V-like base group");
  }
  std::vector<Cube> cubes;
  for (auto &c : sublevel_cubes(w, n))
    if (!is_singular(c))
      cubes.push_back(c);

  using Key = std::pair<std::vector<TailClass>, std::vector<TailClass>>;
  auto key_of = [&](const CubeSets &s) {
    Key k;
    for (auto i : s.hidden)
      k.first.push_back(tail_class(w.points[i]));
    for (auto i : s.edge)
      k.second.push_back(tail_class(w.points[i]));
    std::sort(k.first.begin(), k.first.end());
    std::sort(k.second.begin(), k.second.end());
    return k;
  };
  // ordered tuples of points realizing the sets, in every tail-compatible order
  auto related = [&](const CubeSets &a, const CubeSets &b) -> bool {
    std::vector<RationalPoint> xs;
    for (auto i : a.hidden)
      xs.push_back(w.points[i]);
    for (auto i : a.edge)
      xs.push_back(w.points[i]);
    if (xs.empty())
      return true;
    std::vector<std::size_t> ph = b.hidden, pe = b.edge;
    std::sort(ph.begin(), ph.end());
    do {
      std::sort(pe.begin(), pe.end());
      do {
        std::vector<RationalPoint> ys;
        for (auto i : ph)
          ys.push_back(w.points[i]);
        for (auto i : pe)
          ys.push_back(w.points[i]);
        bool compatible = true;
        for (std::size_t i = 0; i < xs.size(); ++i)
          compatible = compatible && tail_class(xs[i]) == tail_class(ys[i]);
        if (compatible && transport(xs, ys, d, 1, bfs_depth))
          return true;
      } while (std::next_permutation(pe.begin(), pe.end()));
    } while (std::next_permutation(ph.begin(), ph.end()));
    return false;
  };

  OrbitCount out;
  std::map<Key, std::vector<std::size_t>> reps; // representative cube indices per key
  std::size_t undecided = 0;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    auto s = cube_sets(cubes[i]);
    auto &list = reps[key_of(s)];
    bool found = false;
    for (auto r : list)
      if (related(cube_sets(cubes[r]), s)) {
        found = true;
        break;
      }
    if (found)
      continue;
    if (!list.empty())
      ++undecided;
    list.push_back(i);
    std::size_t dim = dimension(cubes[i]);
    if (out.by_dimension.size() <= dim)
      out.by_dimension.resize(dim + 1, 0);
    ++out.by_dimension[dim];
    ++out.total;
    out.representatives.push_back(cubes[i]);
  }
  if (undecided)
    throw Error("Inconclusive", std::to_string(undecided) +
                                    " cube pairs with equal tail invariants were not connected "
                                    "within depth " + std::to_string(bfs_depth));
  return out;
}

} // namespace germkit
