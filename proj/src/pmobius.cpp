#include "germkit/pmobius.hpp"

#include <algorithm>

#include "germkit/text.hpp"

namespace germkit {

Rational MobiusPiece::eval(const Rational &t) const { return (a * t + b) / (c * t + d); }

Rational MobiusPiece::derivative(const Rational &t) const {
  Rational den = c * t + d;
  return det() / (den * den);
}

namespace {

MobiusPiece identity_piece(const Rational &lo, const Rational &hi) {
  return {1, 0, 0, 1, lo, hi};
}

struct Mat {
  Rational a, b, c, d;
};

Mat mat_of(const MobiusPiece &p) { return {p.a, p.b, p.c, p.d}; }

Mat mul(const Mat &x, const Mat &y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

void scale(MobiusPiece &p) {
  Rational s = p.d != 0 ? p.d : p.c;
  p.a /= s;
  p.b /= s;
  p.c /= s;
  p.d /= s;
}

bool same_map(const MobiusPiece &x, const MobiusPiece &y) {
  return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
}

const MobiusPiece *piece_at(const std::vector<MobiusPiece> &ps, const Rational &t) {
  for (const auto &p : ps)
    if (p.lo <= t && t <= p.hi)
      return &p;
  return nullptr;
}

std::vector<MobiusPiece> padded(const PProjMap &f, const Rational &n) {
  std::vector<MobiusPiece> out;
  if (f.support() < n)
    out.push_back(identity_piece(-n, -f.support()));
  for (const auto &p : f.pieces())
    out.push_back(p);
  if (f.support() < n)
    out.push_back(identity_piece(f.support(), n));
  return out;
}

} // namespace

PProjMap::PProjMap(Rational n, std::vector<MobiusPiece> pieces) : n_(std::move(n)) {
  if (n_ <= 0)
    throw invalid("support bound must be positive");
  std::sort(pieces.begin(), pieces.end(),
            [](const MobiusPiece &x, const MobiusPiece &y) { return x.lo < y.lo; });
  Rational cur = -n_;
  for (auto &p : pieces) {
    if (p.lo >= p.hi)
      throw invalid("empty piece domain");
    if (p.lo < cur)
      throw invalid("overlapping pieces at " + to_string(p.lo));
    if (p.hi > n_)
      throw invalid("piece outside [-N, N]");
    if (p.det() <= 0)
      throw invalid("piece is not increasing (ad - bc <= 0)");
    if (p.c != 0) {
      Rational pole = -p.d / p.c;
      if (p.lo <= pole && pole <= p.hi)
        throw invalid("pole inside piece domain");
    }
    if (p.lo > cur)
      pieces_.push_back(identity_piece(cur, p.lo));
    scale(p);
    pieces_.push_back(p);
    cur = p.hi;
  }
  if (cur < n_)
    pieces_.push_back(identity_piece(cur, n_));
  if (pieces_.front().eval(-n_) != -n_ || pieces_.back().eval(n_) != n_)
    throw invalid("endpoints -N, N must be fixed");
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
    if (pieces_[i].eval(pieces_[i].hi) != pieces_[i + 1].eval(pieces_[i + 1].lo))
      throw invalid("discontinuity at " + to_string(pieces_[i].hi));
  normalize();
}

void PProjMap::normalize() {
  std::vector<MobiusPiece> out;
  for (auto p : pieces_) {
    scale(p);
    if (!out.empty() && same_map(out.back(), p))
      out.back().hi = p.hi;
    else
      out.push_back(p);
  }
  pieces_ = std::move(out);
}

PProjMap PProjMap::bump(const Rational &p, const Rational &q, const Rational &lambda) {
  if (!(p < q) || lambda <= 0)
    throw Error("DomainError", "bad bump parameters");
  Mat s{1 / (q - p), -p / (q - p), 0, 1};
  Mat phi{lambda, 0, lambda - 1, 1};
  Mat sinv{q - p, p, 0, 1};
  Mat m = mul(sinv, mul(phi, s));
  Rational n = std::max(Rational(abs(p)), Rational(abs(q))) + 1;
  return PProjMap(n, {{m.a, m.b, m.c, m.d, p, q}});
}

PProjMap PProjMap::affine_bump(const Rational &p, const Rational &m, const Rational &m2,
                               const Rational &q) {
  if (!(p < m && m < q && p < m2 && m2 < q))
    throw Error("DomainError", "bad affine bump parameters");
  Rational s1 = (m2 - p) / (m - p), s2 = (q - m2) / (q - m);
  Rational n = std::max(Rational(abs(p)), Rational(abs(q))) + 1;
  return PProjMap(n, {{s1, p - s1 * p, 0, 1, p, m}, {s2, m2 - s2 * m, 0, 1, m, q}});
}

Rational PProjMap::eval(const Rational &t) const {
  if (t < -n_ || t > n_)
    return t;
  return piece_at(pieces_, t)->eval(t);
}

std::vector<PProjMap::Jump> PProjMap::jumps() const {
  std::vector<Jump> out;
  for (std::size_t i = 0; i <= pieces_.size(); ++i) {
    Rational x = i < pieces_.size() ? pieces_[i].lo : pieces_.back().hi;
    Rational left = i == 0 ? Rational(1) : pieces_[i - 1].derivative(x);
    Rational right = i == pieces_.size() ? Rational(1) : pieces_[i].derivative(x);
    out.push_back({x, left, right});
  }
  return out;
}

bool PProjMap::operator==(const PProjMap &o) const {
  Rational n = std::max(n_, o.n_);
  PProjMap x(n, padded(*this, n)), y(n, padded(o, n));
  if (x.pieces_.size() != y.pieces_.size())
    return false;
  for (std::size_t i = 0; i < x.pieces_.size(); ++i) {
    const auto &p = x.pieces_[i], &q = y.pieces_[i];
    if (!same_map(p, q) || p.lo != q.lo || p.hi != q.hi)
      return false;
  }
  return true;
}

PProjMap compose(const PProjMap &f, const PProjMap &g) {
  Rational n = std::max(f.n_, g.n_);
  auto fp = padded(f, n), gp = padded(g, n);
  std::vector<Rational> cuts;
  for (const auto &p : gp) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  for (const auto &q : fp) {
    for (const Rational &y : {q.lo, q.hi}) {
      for (const auto &p : gp) {
        Rational ylo = p.eval(p.lo), yhi = p.eval(p.hi);
        if (ylo <= y && y <= yhi)
          cuts.push_back((p.d * y - p.b) / (p.a - p.c * y));
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<MobiusPiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Rational mid = (cuts[i] + cuts[i + 1]) / 2;
    const MobiusPiece *pg = piece_at(gp, mid);
    const MobiusPiece *pf = piece_at(fp, pg->eval(mid));
    Mat m = mul(mat_of(*pf), mat_of(*pg));
    out.push_back({m.a, m.b, m.c, m.d, cuts[i], cuts[i + 1]});
  }
  return PProjMap(n, out);
}

PProjMap invert(const PProjMap &f) {
  std::vector<MobiusPiece> out;
  for (const auto &p : f.pieces_)
    out.push_back({p.d, -p.b, -p.c, p.a, p.eval(p.lo), p.eval(p.hi)});
  return PProjMap(f.n_, out);
}

Rational phi_hat(const PProjMap &f) {
  Rational r = 1;
  for (const auto &j : f.jumps())
    r *= j.right / j.left;
  return r;
}

std::string to_string(const PProjMap &f) {
  std::string s = "PM[N=" + to_string(f.support()) + "]{";
  bool first = true;
  for (const auto &p : f.pieces()) {
    if (p.a == 1 && p.b == 0 && p.c == 0 && p.d == 1)
      continue;
    s += first ? " " : "; ";
    first = false;
    s += "[" + to_string(p.lo) + "," + to_string(p.hi) + "]: (" + to_string(p.a) + "," +
         to_string(p.b) + "," + to_string(p.c) + "," + to_string(p.d) + ")";
  }
  return s + " }";
}

PProjMap parse_pproj(const std::string &src) {
  auto h = text::parse_header(src);
  if (h.name != "PM")
    text::fail(src, 0, "expected PM[N=...]{...}");
  auto it = h.params.find("N");
  if (it == h.params.end())
    text::fail(src, 0, "missing N");
  Rational n = parse_rational(it->second);
  std::vector<MobiusPiece> pieces;
  for (const auto &item : text::split_top(h.body, ';')) {
    if (item.s.empty())
      continue;
    auto colon = item.s.find(':');
    if (colon == std::string::npos || item.s[0] != '[')
      text::fail(src, item.offset, "expected '[lo,hi]: (a,b,c,d)'");
    std::string dom = text::trim(item.s.substr(0, colon));
    std::string coef = text::trim(item.s.substr(colon + 1));
    auto comma = dom.find(',');
    if (dom.back() != ']' || comma == std::string::npos || coef.size() < 2 ||
        coef.front() != '(' || coef.back() != ')')
      text::fail(src, item.offset, "malformed piece");
    MobiusPiece p;
    try {
      p.lo = parse_rational(text::trim(dom.substr(1, comma - 1)));
      p.hi = parse_rational(text::trim(dom.substr(comma + 1, dom.size() - comma - 2)));
      auto cs = text::split_top(text::Span{coef.substr(1, coef.size() - 2), 0}, ',');
      if (cs.size() != 4)
        text::fail(src, item.offset, "expected four coefficients");
      p.a = parse_rational(cs[0].s);
      p.b = parse_rational(cs[1].s);
      p.c = parse_rational(cs[2].s);
      p.d = parse_rational(cs[3].s);
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      text::fail(src, item.offset, e.what());
    }
    pieces.push_back(p);
  }
  return PProjMap(n, pieces);
}

} // namespace germkit
