#include "germkit/plmap.hpp"

#include <algorithm>
#include <functional>
#include <regex>

#include "germkit/text.hpp"

namespace germkit {

namespace {

Rational frac(const Rational &t) { return t - Rational(floor_q(t)); }

bool is_pow2(const Rational &s) {
  return s > 0 && is_dyadic(s) && mpz_popcount(s.get_num_mpz_t()) == 1;
}

const AffinePiece *piece_at(const std::vector<AffinePiece> &ps, const Rational &t) {
  for (const auto &p : ps)
    if (p.lo <= t && t < p.hi)
      return &p;
  if (!ps.empty() && t == ps.back().hi)
    return &ps.back();
  return nullptr;
}

// number of binary digits of a dyadic in [0,1)
long bits(const Rational &p) { return p == 0 ? 0 : std::max(0L, -val2(p)); }

Word binary_word(const Rational &x, long len) {
  Integer v = Integer(x * pow2(len));
  Word w(len, 0);
  for (long i = len - 1; i >= 0; --i) {
    w[i] = mpz_odd_p(v.get_mpz_t()) ? 1 : 0;
    v >>= 1;
  }
  return w;
}

RootedWord cone_of(const Rational &lo, long level) { return {0, binary_word(lo, level)}; }

} // namespace

// ---- PLCircleMap ----

PLCircleMap::PLCircleMap(std::vector<AffinePiece> pieces) {
  std::vector<AffinePiece> ps;
  for (auto p : pieces) {
    if (!(p.lo < p.hi))
      throw invalid("empty circle piece");
    if (!is_dyadic(p.offset))
      throw invalid("offset " + to_string(p.offset) + " is not dyadic");
    Rational c = p.eval(p.lo);
    p.offset -= Rational(floor_q(c));
    c = p.eval(p.lo);
    if (p.eval(p.hi) > 1) {
      Rational m = (Rational(1) - p.offset) / p.slope();
      ps.push_back({p.lo, m, p.slope_exp, p.offset});
      ps.push_back({m, p.hi, p.slope_exp, p.offset - 1});
    } else {
      ps.push_back(p);
    }
  }
  std::sort(ps.begin(), ps.end(),
            [](const AffinePiece &x, const AffinePiece &y) { return x.lo < y.lo; });
  if (ps.empty() || ps.front().lo != 0 || ps.back().hi != 1)
    throw invalid("circle pieces must cover [0,1]");
  for (std::size_t i = 0; i + 1 < ps.size(); ++i)
    if (ps[i].hi != ps[i + 1].lo)
      throw invalid("circle pieces overlap or leave a gap at " + to_string(ps[i].hi));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto &x = ps[i], &y = ps[(i + 1) % ps.size()];
    if (frac(x.eval(x.hi)) != frac(y.eval(y.lo)))
      throw invalid("circle map discontinuous at " + to_string(x.hi));
  }
  std::vector<std::pair<Rational, Rational>> images;
  for (const auto &p : ps)
    images.push_back({p.eval(p.lo), p.eval(p.hi)});
  std::sort(images.begin(), images.end());
  Rational cur = 0;
  for (const auto &[c, d] : images) {
    if (c != cur)
      throw invalid("circle map is not a bijection near " + to_string(cur));
    cur = d;
  }
  if (cur != 1)
    throw invalid("circle map is not a bijection");
  for (const auto &p : ps) {
    if (!pieces_.empty() && pieces_.back().same_map(p))
      pieces_.back().hi = p.hi;
    else
      pieces_.push_back(p);
  }
}

PLCircleMap PLCircleMap::rotation(const Rational &a) {
  if (!is_dyadic(a))
    throw invalid("rotation amount must be dyadic");
  return PLCircleMap({{0, 1, 0, frac(a)}});
}

Rational PLCircleMap::eval(const Rational &t) const {
  Rational x = frac(t);
  return frac(piece_at(pieces_, x)->eval(x));
}

std::vector<Rational> PLCircleMap::breakpoints() const {
  std::vector<Rational> out;
  if (pieces_.front().slope_exp != pieces_.back().slope_exp)
    out.push_back(0);
  for (std::size_t i = 1; i < pieces_.size(); ++i)
    if (pieces_[i].slope_exp != pieces_[i - 1].slope_exp)
      out.push_back(pieces_[i].lo);
  return out;
}

std::pair<long, long> PLCircleMap::slope_exponents_at(const Rational &q) const {
  Rational x = frac(q);
  long right = piece_at(pieces_, x)->slope_exp;
  long left = pieces_.back().slope_exp;
  for (const auto &p : pieces_)
    if (p.lo < x && x <= p.hi)
      left = p.slope_exp;
  return {left, right};
}

namespace {

// g^{-1}(y) for y in [0,1)
Rational circle_preimage(const PLCircleMap &g, const Rational &y) {
  for (const auto &p : g.pieces()) {
    Rational c = p.eval(p.lo), d = p.eval(p.hi);
    if (c <= y && y < d)
      return (y - p.offset) / p.slope();
  }
  throw internal_error("circle preimage not found");
}

} // namespace

PLCircleMap compose(const PLCircleMap &f, const PLCircleMap &g) {
  std::vector<Rational> cuts{0, 1};
  for (const auto &p : g.pieces())
    cuts.push_back(p.lo);
  for (const auto &q : f.pieces())
    cuts.push_back(circle_preimage(g, q.lo));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<AffinePiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Rational mid = (cuts[i] + cuts[i + 1]) / 2;
    const AffinePiece *pg = piece_at(g.pieces(), mid);
    const AffinePiece *pf = piece_at(f.pieces(), frac(pg->eval(mid)));
    Rational shift = -Rational(floor_q(pg->eval(mid)));
    out.push_back({cuts[i], cuts[i + 1], pf->slope_exp + pg->slope_exp,
                   pf->slope() * (pg->offset + shift) + pf->offset});
  }
  return PLCircleMap(out);
}

PLCircleMap invert(const PLCircleMap &f) {
  std::vector<AffinePiece> out;
  for (const auto &p : f.pieces())
    out.push_back({p.eval(p.lo), p.eval(p.hi), -p.slope_exp, -p.offset / p.slope()});
  return PLCircleMap(out);
}

bool is_in_T(const PLCircleMap &f) {
  for (const auto &p : f.pieces())
    if (!is_dyadic(p.lo))
      return false;
  return true;
}

namespace {

std::string interval_text(const Rational &a, const Rational &b, const Rational &c,
                          const Rational &d) {
  return "[" + to_string(a) + "," + to_string(b) + "]->[" + to_string(c) + "," +
         to_string(d) + "]";
}

std::string maps_text(const std::vector<IntervalMap> &ms) {
  std::string s;
  bool first = true;
  for (const auto &m : ms) {
    s += first ? " " : "; ";
    first = false;
    s += interval_text(m.a, m.b, m.c, m.d);
  }
  return s + " ";
}

} // namespace

std::string to_string(const PLCircleMap &f) {
  std::vector<IntervalMap> ms;
  for (const auto &p : f.pieces())
    ms.push_back({p.lo, p.hi, p.eval(p.lo), p.eval(p.hi)});
  return "T{" + maps_text(ms) + "}";
}

PLCircleMap parse_circle_map(const std::string &src) {
  CircleText t = parse_circle_text(src);
  if (!t.spirals.empty())
    throw invalid("spiral clauses are not allowed in a plain circle map");
  std::vector<AffinePiece> ps;
  for (const auto &m : t.regular)
    ps.push_back(affine_from_intervals(m.a, m.b, m.c, m.d));
  return PLCircleMap(ps);
}

// ---- AElement ----

namespace {

bool a_periodic_ends(long n, const std::vector<AffinePiece> &ps) {
  auto at = [&](const Rational &t) { return piece_at(ps, t)->eval(t); };
  return at(Rational(n + 1)) == at(Rational(n)) + 1 &&
         at(Rational(-n)) == at(Rational(-n - 1)) + 1;
}

std::vector<AffinePiece> merge_line(const std::vector<AffinePiece> &ps) {
  std::vector<AffinePiece> out;
  for (const auto &p : ps) {
    if (!out.empty() && out.back().same_map(p))
      out.back().hi = p.hi;
    else
      out.push_back(p);
  }
  return out;
}

std::vector<AffinePiece> restrict_line(const std::vector<AffinePiece> &ps, const Rational &lo,
                                       const Rational &hi) {
  std::vector<AffinePiece> out;
  for (auto p : ps) {
    if (p.hi <= lo || p.lo >= hi)
      continue;
    p.lo = std::max(p.lo, lo);
    p.hi = std::min(p.hi, hi);
    out.push_back(p);
  }
  return out;
}

} // namespace

AElement::AElement(long n, std::vector<AffinePiece> pieces) : n_(n) {
  if (n < 1)
    throw invalid("A-element bound must be positive");
  std::sort(pieces.begin(), pieces.end(),
            [](const AffinePiece &x, const AffinePiece &y) { return x.lo < y.lo; });
  if (pieces.empty() || pieces.front().lo != -n - 1 || pieces.back().hi != n + 1)
    throw invalid("A-element pieces must cover [-N-1, N+1]");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto &p = pieces[i];
    if (!(p.lo < p.hi) || !is_dyadic(p.lo) || !is_dyadic(p.offset))
      throw invalid("A-element pieces need dyadic data");
    if (i + 1 < pieces.size() &&
        (pieces[i + 1].lo != p.hi || pieces[i + 1].eval(p.hi) != p.eval(p.hi)))
      throw invalid("A-element discontinuous at " + to_string(p.hi));
  }
  if (!a_periodic_ends(n, pieces))
    throw invalid("A-element must commute with t -> t+1 outside [-N, N]");
  pieces_ = merge_line(pieces);
}

AElement AElement::from_tbar(const TbarElement &f) {
  std::vector<AffinePiece> ps;
  for (long k = -2; k < 2; ++k)
    for (auto p : f.pieces()) {
      p.offset += Rational(k) - p.slope() * k;
      p.lo += k;
      p.hi += k;
      ps.push_back(p);
    }
  return AElement(1, ps);
}

Rational AElement::eval(const Rational &t) const {
  Rational top(n_ + 1), bot(-n_ - 1);
  if (t > top) {
    Integer k = floor_q(t - Rational(n_));
    return eval(t - Rational(k)) + Rational(k);
  }
  if (t < bot) {
    Integer k = floor_q(Rational(-n_) - t);
    return eval(t + Rational(k)) - Rational(k);
  }
  return piece_at(pieces_, t)->eval(t);
}

Rational AElement::eval_inverse(const Rational &y) const {
  Rational top = eval(Rational(n_ + 1)), bot = eval(Rational(-n_ - 1));
  if (y > top) {
    Integer k = floor_q(y - eval(Rational(n_)));
    return eval_inverse(y - Rational(k)) + Rational(k);
  }
  if (y < bot) {
    Integer k = floor_q(eval(Rational(-n_)) - y);
    return eval_inverse(y + Rational(k)) - Rational(k);
  }
  for (const auto &p : pieces_)
    if (p.eval(p.lo) <= y && y <= p.eval(p.hi))
      return (y - p.offset) / p.slope();
  throw internal_error("A-element inverse fell outside pieces");
}

namespace {

std::vector<Rational> a_breaks(const AElement &f, long m) {
  std::vector<Rational> out;
  long n = f.bound();
  for (const auto &p : f.pieces()) {
    if (p.lo >= -n - 1 && p.lo <= n + 1)
      out.push_back(p.lo);
    // periodic copies in the tails
    if (p.lo >= Rational(n))
      for (long k = 1; Rational(n) + k <= m + 1; ++k)
        out.push_back(p.lo + k);
    if (p.lo < Rational(-n))
      for (long k = 1; Rational(-n - 1) - k >= -m - 1; ++k)
        out.push_back(p.lo - k);
  }
  return out;
}

AElement a_from_function(long m, std::vector<Rational> cuts,
                         const std::function<Rational(const Rational &)> &h) {
  cuts.push_back(Rational(-m - 1));
  cuts.push_back(Rational(m + 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<AffinePiece> ps;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i] < -m - 1 || cuts[i + 1] > m + 1)
      continue;
    ps.push_back(affine_from_intervals(cuts[i], cuts[i + 1], h(cuts[i]), h(cuts[i + 1])));
  }
  AElement r(m, ps);
  // shrink the bound while the periodic extension is unchanged
  while (m > 1) {
    long k = m - 1;
    auto rp = restrict_line(r.pieces(), Rational(-k - 1), Rational(k + 1));
    if (!a_periodic_ends(k, rp))
      break;
    AElement cand(k, rp);
    bool same = true;
    for (const auto &t : a_breaks(r, m))
      if (cand.eval(t) != r.eval(t)) {
        same = false;
        break;
      }
    if (!same)
      break;
    r = cand;
    m = k;
  }
  return r;
}

long a_drift(const AElement &f) {
  Rational mx = 0;
  for (const auto &p : f.pieces())
    for (const Rational &t : {p.lo, p.hi})
      mx = std::max(mx, Rational(abs(p.eval(t) - t)));
  return Integer(floor_q(mx)).get_si() + 1;
}

} // namespace

bool AElement::operator==(const AElement &o) const {
  long m = std::max(n_, o.n_) + 1;
  auto pts = a_breaks(*this, m);
  auto more = a_breaks(o, m);
  pts.insert(pts.end(), more.begin(), more.end());
  pts.push_back(Rational(m + 1));
  pts.push_back(Rational(-m - 1));
  for (const auto &t : pts)
    if (eval(t) != o.eval(t))
      return false;
  return true;
}

AElement compose(const AElement &f, const AElement &g) {
  long m = f.bound() + g.bound() + a_drift(g) + 1;
  std::vector<Rational> cuts = a_breaks(g, m);
  long span = m + a_drift(g) + 1;
  for (const auto &y : a_breaks(f, span))
    cuts.push_back(g.eval_inverse(y));
  return a_from_function(m, cuts, [&](const Rational &t) { return f.eval(g.eval(t)); });
}

AElement invert(const AElement &f) {
  long m = f.bound() + a_drift(f) + 1;
  std::vector<Rational> cuts;
  for (const auto &t : a_breaks(f, m + a_drift(f) + 1))
    cuts.push_back(f.eval(t));
  return a_from_function(m, cuts, [&](const Rational &y) { return f.eval_inverse(y); });
}

std::string to_string(const AElement &f) {
  std::vector<IntervalMap> ms;
  for (const auto &p : f.pieces())
    ms.push_back({p.lo, p.hi, p.eval(p.lo), p.eval(p.hi)});
  return "A[N=" + std::to_string(f.bound()) + "]{" + maps_text(ms) + "}";
}

// ---- TA: circle <-> Cantor ----

RationalPoint above_point(const Rational &p) {
  if (p < 0 || p >= 1 || !is_dyadic(p))
    throw Error("DomainError", "expected a dyadic point of [0,1): " + to_string(p));
  return rational_to_point(p);
}

RationalPoint below_point(const Rational &p) {
  if (p < 0 || p >= 1 || !is_dyadic(p))
    throw Error("DomainError", "expected a dyadic point of [0,1): " + to_string(p));
  if (p == 0)
    return canonicalize_point(0, "", Word(1, 1), 2);
  long n = bits(p);
  Word x = binary_word(p, n);
  x.back() = 0;
  return canonicalize_point(0, x, Word(1, 1), 2);
}

namespace {

Rational circle_of(const RationalPoint &x) { return frac(point_to_rational(x)); }

// [a,b] -> [c,d] as prefix replacements between aligned dyadic intervals
void decompose(const IntervalMap &m, std::vector<PlainRule> &out) {
  AffinePiece f = affine_from_intervals(m.a, m.b, m.c, m.d);
  std::vector<std::pair<Rational, long>> todo; // (left end, level)
  Rational x = m.a;
  while (x < m.b) {
    long l = x == 0 ? 0 : std::max(0L, -val2(x));
    while (x + pow2(-l) > m.b)
      ++l;
    todo.push_back({x, l});
    x += pow2(-l);
  }
  while (!todo.empty()) {
    auto [lo, l] = todo.back();
    todo.pop_back();
    Rational c = f.eval(lo);
    long il = l - f.slope_exp;
    if (il >= 0 && (c == 0 || -val2(c) <= il)) {
      out.push_back({cone_of(lo, l), cone_of(c, il)});
    } else {
      todo.push_back({lo + pow2(-l - 1), l + 1});
      todo.push_back({lo, l + 1});
    }
  }
}

IntervalMap map_of_rule(const PlainRule &r) {
  Rational a = cone_left(r.from.letters), c = cone_left(r.to.letters);
  return {a, a + pow2(-(long)r.from.size()), c, c + pow2(-(long)r.to.size())};
}

std::vector<IntervalMap> merge_maps(std::vector<IntervalMap> ms) {
  std::sort(ms.begin(), ms.end(),
            [](const IntervalMap &x, const IntervalMap &y) { return x.a < y.a; });
  std::vector<IntervalMap> out;
  for (const auto &m : ms) {
    if (!out.empty()) {
      auto &l = out.back();
      if (l.b == m.a && l.d == m.c && (l.d - l.c) * (m.b - m.a) == (m.d - m.c) * (l.b - l.a)) {
        l.b = m.b;
        l.d = m.d;
        continue;
      }
    }
    out.push_back(m);
  }
  return out;
}

// One side of a spiral in lifted real coordinates near p and q.
struct Side {
  bool above;
  Rational p, q;
  long k;
  std::vector<IntervalMap> maps;
};

// representative of x on the given side of base
Rational lift(const Rational &x, const Rational &base, bool above) {
  if (above)
    return x < base ? x + 1 : x;
  return x > base ? x - 1 : x;
}

IntervalMap to_chart(IntervalMap m) {
  auto fix = [](Rational &lo, Rational &hi) {
    if (lo < 0) {
      lo += 1;
      hi += 1;
    } else if (hi > 1) {
      lo -= 1;
      hi -= 1;
    }
  };
  fix(m.a, m.b);
  fix(m.c, m.d);
  return m;
}

Side lifted_side(const CircleSpiralText &s, bool above) {
  Side side{above, s.p, s.q, s.depth, {}};
  for (auto m : above ? s.above : s.below) {
    m.a = lift(m.a, s.p, above);
    m.b = lift(m.b, s.p, above);
    m.c = lift(m.c, s.q, above);
    m.d = lift(m.d, s.q, above);
    side.maps.push_back(m);
  }
  return side;
}

// image radius h of a side: |F(outer end) - q|
Rational side_h(const Side &s) {
  Rational h = 0;
  for (const auto &m : s.maps)
    h = std::max(h, s.above ? Rational(m.d - s.q) : Rational(s.q - m.c));
  return h;
}

void deepen(Side &s, std::vector<PlainRule> &plain) {
  for (const auto &m : s.maps)
    decompose(to_chart(m), plain);
  for (auto &m : s.maps) {
    m.a = (m.a + s.p) / 2;
    m.b = (m.b + s.p) / 2;
    m.c = (m.c + s.q) / 2;
    m.d = (m.d + s.q) / 2;
  }
  ++s.k;
}

VAElement build_va(const CircleText &t) {
  std::vector<PlainRule> plain;
  std::vector<SpiralRule> spirals;
  for (const auto &m : t.regular)
    decompose(m, plain);
  for (const auto &st : t.spirals) {
    for (bool above : {true, false}) {
      Side s = lifted_side(st, above);
      long nq = bits(s.q);
      while ((s.p == 0 && s.k < 1) || side_h(s) > pow2(-nq))
        deepen(s, plain);
      SpiralRule sr;
      sr.p = above ? above_point(s.p) : below_point(s.p);
      sr.q = above ? above_point(s.q) : below_point(s.q);
      for (const auto &m : s.maps)
        decompose(to_chart(m), sr.rules);
      spirals.push_back(sr);
    }
  }
  return VAElement(2, 1, plain, spirals);
}

struct Gathered {
  IntervalMap m;
  bool core = false;
};

void add_split(std::vector<std::pair<Rational, Rational>> &v, Rational a, Rational b) {
  if (a < 0 && b <= 0) {
    v.push_back({a + 1, b + 1});
  } else if (a < 0) {
    v.push_back({a + 1, Rational(1)});
    v.push_back({Rational(0), b});
  } else if (b > 1 && a >= 1) {
    v.push_back({a - 1, b - 1});
  } else if (b > 1) {
    v.push_back({a, Rational(1)});
    v.push_back({Rational(0), b - 1});
  } else {
    v.push_back({a, b});
  }
}

// cover [0,1] exactly; returns the first problem found
std::string tiling_problem(std::vector<std::pair<Rational, Rational>> v) {
  std::sort(v.begin(), v.end());
  Rational cur = 0;
  for (const auto &[a, b] : v) {
    if (a < cur)
      return "overlap at " + to_string(a);
    if (a > cur)
      return "gap [" + to_string(cur) + "," + to_string(a) + "]";
    cur = b;
  }
  if (cur != 1)
    return "gap [" + to_string(cur) + ",1]";
  return "";
}

} // namespace

ValidationReport validate(const CircleText &t) {
  ValidationReport rep;
  auto fail = [&](const std::string &check, const std::string &msg) {
    rep.failures.push_back(check + ": " + msg);
  };
  auto check_map = [&](const IntervalMap &m) {
    std::string where = interval_text(m.a, m.b, m.c, m.d);
    for (const Rational *x : {&m.a, &m.b, &m.c, &m.d}) {
      if (!is_dyadic(*x)) {
        fail("dyadic", where + ": " + to_string(*x) + " is not dyadic");
        return;
      }
      if (*x < 0 || *x > 1) {
        fail("partition", where + ": endpoint outside [0,1]");
        return;
      }
    }
    if (!(m.a < m.b) || !(m.c < m.d))
      fail("slope", where + ": interval is empty or reversed");
    else if (!is_pow2((m.d - m.c) / (m.b - m.a)))
      fail("slope", where + ": slope " + to_string((m.d - m.c) / (m.b - m.a)) +
                        " is not a power of 2");
  };
  for (const auto &m : t.regular)
    check_map(m);
  for (const auto &s : t.spirals) {
    for (const Rational *x : {&s.p, &s.q})
      if (!is_dyadic(*x) || *x < 0 || *x >= 1)
        fail("dyadic", "spiral point " + to_string(*x) + " is not a dyadic point of [0,1)");
    if (s.above.empty() || s.below.empty())
      fail("partition", "spiral at " + to_string(s.p) + " needs both sides");
    for (const auto &m : s.above)
      check_map(m);
    for (const auto &m : s.below)
      check_map(m);
  }
  if (!rep.ok())
    return rep;

  std::vector<Gathered> all;
  std::vector<std::pair<Rational, Rational>> dom, img;
  for (const auto &m : t.regular)
    all.push_back({m});
  for (const auto &st : t.spirals) {
    if (st.depth < bits(st.p)) {
      fail("partition", "depth " + std::to_string(st.depth) + " is below the length of p = " +
                            to_string(st.p));
      continue;
    }
    Rational hs[2];
    for (bool above : {true, false}) {
      Side s = lifted_side(st, above);
      Rational outer = above ? Rational(s.p + pow2(-s.k)) : Rational(s.p - pow2(-s.k));
      Rational inner =
          above ? Rational(s.p + pow2(-s.k - 1)) : Rational(s.p - pow2(-s.k - 1));
      std::string side = std::string(above ? "above" : "below") + " " + to_string(s.p);
      std::optional<Rational> f_out, f_in;
      for (const auto &m : s.maps) {
        if (m.a < std::min(inner, outer) || m.b > std::max(inner, outer))
          fail("partition", side + ": piece outside the annulus");
        if (m.a == outer || m.b == outer)
          f_out = m.a == outer ? m.c : m.d;
        if (m.a == inner || m.b == inner)
          f_in = m.a == inner ? m.c : m.d;
      }
      if (!f_out || !f_in) {
        fail("partition", side + ": annulus not covered");
        continue;
      }
      Rational h = above ? *f_out - s.q : s.q - *f_out;
      Rational h_in = above ? *f_in - s.q : s.q - *f_in;
      if (h <= 0 || h_in * 2 != h)
        fail("conjugacy", side + ": F(inner) - q must be half of F(outer) - q");
      hs[above ? 1 : 0] = h;
      for (const auto &m : s.maps)
        all.push_back({to_chart(m)});
    }
    Rational r = pow2(-st.depth - 1);
    add_split(dom, st.p - r, st.p + r);
    add_split(img, st.q - hs[0] / 2, st.q + hs[1] / 2);
  }
  if (!rep.ok())
    return rep;
  for (const auto &g : all) {
    dom.push_back({g.m.a, g.m.b});
    img.push_back({g.m.c, g.m.d});
  }
  std::string why = tiling_problem(dom);
  if (!why.empty())
    fail("partition", "domains: " + why);
  why = tiling_problem(img);
  if (!why.empty())
    fail("partition", "images: " + why);
  // continuity between pieces sharing an endpoint
  for (const auto &x : all)
    for (const auto &y : all)
      if (frac(x.m.b) == frac(y.m.a) && frac(x.m.d) != frac(y.m.c))
        fail("continuity", "jump at " + to_string(frac(x.m.b)) + ": " + to_string(x.m.d) +
                               " vs " + to_string(y.m.c));
  if (!rep.ok())
    return rep;
  try {
    VAElement f = build_va(t);
    for (const auto &s : validate(f).failures)
      rep.failures.push_back(s);
    if (rep.ok() && !conjugacy_identity_holds(f))
      fail("conjugacy", "self-similar extension fails L-conjugacy");
  } catch (const Error &e) {
    fail("partition", e.what());
  }
  return rep;
}

TAElement ta_from_text(const CircleText &t) {
  auto rep = validate(t);
  if (!rep.ok()) {
    std::string msg;
    for (const auto &s : rep.failures)
      msg += (msg.empty() ? "" : "; ") + s;
    throw invalid(msg);
  }
  return TAElement(canonicalize(build_va(t)), TAElement::Trusted{});
}

namespace {

CircleText circle_text(const VAElement &c) {
  CircleText t;
  std::vector<Rational> ps;
  for (const auto &s : c.spirals())
    ps.push_back(circle_of(s.p));
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::vector<RootedWord> taken;
  for (const auto &p : ps) {
    if (!is_dyadic(p))
      throw invalid("singular point " + to_string(p) + " is not a dyadic circle point");
    RationalPoint a = above_point(p), b = below_point(p);
    long n = bits(p);
    long j = std::max<long>(equivariance_level(c, a), equivariance_level(c, b));
    if (n == 0)
      j = std::max(j, 1L);
    RootedWord ca, cb;
    for (;; ++j) {
      ca = spiral_base(a).extend(Word(j, 0));
      cb = spiral_base(b).extend(Word(j, 1));
      bool clear = true;
      for (const auto &other : ps)
        if (other != p)
          for (const auto &x : {above_point(other), below_point(other)})
            clear = clear && !x.in_cone(ca) && !x.in_cone(cb);
      if (clear)
        break;
    }
    taken.push_back(ca);
    taken.push_back(cb);
    CircleSpiralText st;
    st.p = p;
    st.q = circle_of(c.evaluate(a));
    st.depth = n + j;
    for (const auto &r : c.on_cone(ca.child(1)))
      st.above.push_back(map_of_rule(r));
    for (const auto &r : c.on_cone(cb.child(0)))
      st.below.push_back(map_of_rule(r));
    st.above = merge_maps(st.above);
    st.below = merge_maps(st.below);
    t.spirals.push_back(st);
  }
  for (const auto &w : cone_complement(taken, 2, 1))
    for (const auto &r : c.on_cone(w))
      t.regular.push_back(map_of_rule(r));
  t.regular = merge_maps(t.regular);
  return t;
}

} // namespace

TAElement::TAElement(const VAElement &f) : va_(canonicalize(f)) {
  if (va_.d() != 2 || va_.r() != 1)
    throw invalid("TA elements live on binary Cantor space");
  auto rep = validate(circle_text(va_));
  if (!rep.ok())
    throw invalid("not a circle homeomorphism: " + rep.failures.front());
}

TAElement TAElement::from_circle(const PLCircleMap &f) {
  if (!is_in_T(f))
    throw invalid("circle map has non-dyadic breakpoints");
  CircleText t;
  for (const auto &p : f.pieces())
    t.regular.push_back({p.lo, p.hi, p.eval(p.lo), p.eval(p.hi)});
  return ta_from_text(t);
}

Rational TAElement::eval(const Rational &t) const {
  return circle_of(va_.evaluate(rational_to_point(frac(t))));
}

TAElement compose(const TAElement &f, const TAElement &g) {
  return TAElement(compose(f.va_, g.va_), TAElement::Trusted{});
}

TAElement invert(const TAElement &f) { return TAElement(invert(f.va_), TAElement::Trusted{}); }

std::vector<Rational> sing(const TAElement &f) {
  std::vector<Rational> out;
  for (const auto &p : sing(f.cantor()))
    out.push_back(circle_of(p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_in_T(const TAElement &f) { return f.cantor().spirals().empty(); }

PLCircleMap to_circle_map(const TAElement &f) {
  if (!is_in_T(f))
    throw invalid("element has singular points");
  std::vector<AffinePiece> ps;
  for (const auto &m : circle_text(f.cantor()).regular)
    ps.push_back(affine_from_intervals(m.a, m.b, m.c, m.d));
  return PLCircleMap(ps);
}

std::pair<long, long> slope_exponents_at(const TAElement &f, const Rational &q) {
  Rational x = frac(q);
  auto exponent = [&](const RationalPoint &pt) -> long {
    for (std::size_t m = 0; m < 4096; ++m) {
      RootedWord w{0, pt.unroll(m)};
      std::vector<PlainRule> rs;
      try {
        rs = f.cantor().on_cone(w);
      } catch (const Error &) {
        continue;
      }
      if (rs.size() == 1)
        return (long)rs[0].from.size() - (long)rs[0].to.size();
    }
    throw Error("DomainError", to_string(x) + " is a singular point");
  };
  if (is_dyadic(x))
    return {exponent(below_point(x)), exponent(above_point(x))};
  long e = exponent(rational_to_point(x));
  return {e, e};
}

std::vector<Rational> breakpoints(const TAElement &f) {
  auto ct = circle_text(f.cantor());
  std::vector<Rational> out = sing(f);
  std::vector<IntervalMap> all = ct.regular;
  for (const auto &s : ct.spirals) {
    all.insert(all.end(), s.above.begin(), s.above.end());
    all.insert(all.end(), s.below.begin(), s.below.end());
  }
  for (const auto &x : all)
    for (const auto &y : all)
      if (frac(x.b) == y.a &&
          (x.d - x.c) * (y.b - y.a) != (y.d - y.c) * (x.b - x.a))
        out.push_back(y.a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<TbarElement, TbarElement> germ_tbar_pair(const TAElement &f, const Rational &p) {
  Rational x = frac(p);
  if (!is_dyadic(x))
    throw Error("DomainError", "germ_tbar_pair needs a dyadic point");
  if (f.eval(x) != x)
    throw not_fixed(to_string(x) + " is not fixed");
  return {germ_tbar(f.cantor(), below_point(x)), germ_tbar(f.cantor(), above_point(x))};
}

std::string to_string(const TAElement &f) {
  CircleText t = circle_text(f.cantor());
  std::vector<std::string> items;
  for (const auto &m : t.regular)
    items.push_back(interval_text(m.a, m.b, m.c, m.d));
  for (const auto &st : t.spirals)
    items.push_back("spiral p=" + to_string(st.p) + " -> q=" + to_string(st.q) +
                    " depth=" + std::to_string(st.depth) + " above {" + maps_text(st.above) +
                    "} below {" + maps_text(st.below) + "}");
  std::string s = "T{";
  for (std::size_t i = 0; i < items.size(); ++i)
    s += (i ? "; " : " ") + items[i];
  return s + " }";
}

namespace {

std::vector<IntervalMap> parse_maps(const std::string &src, const text::Span &body) {
  std::vector<IntervalMap> out;
  for (const auto &item : text::split_top(body, ';')) {
    if (item.s.empty())
      continue;
    auto arrow = item.s.find("->");
    if (arrow == std::string::npos)
      text::fail(src, item.offset, "expected '[a,b]->[c,d]'");
    auto [a, b] = parse_interval(src, {item.s.substr(0, arrow), item.offset});
    auto [c, d] = parse_interval(src, {item.s.substr(arrow + 2), item.offset + arrow + 2});
    out.push_back({a, b, c, d});
  }
  return out;
}

} // namespace

CircleText parse_circle_text(const std::string &src) {
  auto h = text::parse_header(src);
  if (h.name != "T")
    text::fail(src, 0, "expected T{...}");
  CircleText t;
  static const std::regex spiral_re(
      R"(^spiral\s+p\s*=\s*([^\s]+)\s*->\s*q\s*=\s*([^\s]+)\s+depth\s*=\s*(\d+)\s+(above|below)\s*\{([^{}]*)\}\s*(above|below)\s*\{([^{}]*)\}\s*$)");
  for (const auto &item : text::split_top(h.body, ';')) {
    if (item.s.empty())
      continue;
    if (item.s.rfind("spiral", 0) != 0) {
      auto ms = parse_maps(src, item);
      t.regular.insert(t.regular.end(), ms.begin(), ms.end());
      continue;
    }
    std::smatch m;
    if (!std::regex_match(item.s, m, spiral_re) || m[4] == m[6])
      text::fail(src, item.offset,
                 "expected 'spiral p=.. -> q=.. depth=k above { .. } below { .. }'");
    CircleSpiralText st;
    try {
      st.p = parse_rational(m[1]);
      st.q = parse_rational(m[2]);
      st.depth = std::stol(m[3]);
    } catch (const std::exception &e) {
      text::fail(src, item.offset, e.what());
    }
    for (int g : {5, 7}) {
      auto maps = parse_maps(src, {m[g].str(), item.offset + std::size_t(m.position(g))});
      (m[g - 1] == "above" ? st.above : st.below) = maps;
    }
    t.spirals.push_back(st);
  }
  return t;
}

TAElement parse_ta(const std::string &src) { return ta_from_text(parse_circle_text(src)); }

} // namespace germkit
