#include "germkit/tbar.hpp"

#include <algorithm>

#include "germkit/text.hpp"

namespace germkit {

namespace {

long exact_log2(const Rational &s) {
  if (s <= 0 || !is_dyadic(s) || mpz_popcount(s.get_num_mpz_t()) != 1)
    throw invalid("slope " + to_string(s) + " is not a power of 2");
  return val2(s);
}

Rational frac(const Rational &t) { return t - Rational(floor_q(t)); }

std::vector<AffinePiece> merged(const std::vector<AffinePiece> &ps) {
  std::vector<AffinePiece> out;
  for (const auto &p : ps) {
    if (!out.empty() && out.back().same_map(p))
      out.back().hi = p.hi;
    else
      out.push_back(p);
  }
  return out;
}

} // namespace

AffinePiece affine_from_intervals(const Rational &a, const Rational &b, const Rational &c,
                                  const Rational &d) {
  if (!(a < b) || !(c < d))
    throw invalid("degenerate or decreasing interval pair");
  Rational s = (d - c) / (b - a);
  long n = exact_log2(s);
  return {a, b, n, c - s * a};
}

TbarElement::TbarElement(std::vector<AffinePiece> pieces) {
  if (pieces.empty())
    throw invalid("empty T-bar element");
  std::sort(pieces.begin(), pieces.end(),
            [](const AffinePiece &x, const AffinePiece &y) { return x.lo < y.lo; });
  if (pieces.front().lo != 0 || pieces.back().hi != 1)
    throw invalid("T-bar pieces must cover [0,1]");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto &p = pieces[i];
    if (!(p.lo < p.hi))
      throw invalid("empty T-bar piece");
    if (!is_dyadic(p.lo) || !is_dyadic(p.hi) || !is_dyadic(p.offset))
      throw invalid("T-bar data must be dyadic");
    if (i + 1 < pieces.size()) {
      if (pieces[i + 1].lo != p.hi)
        throw invalid("T-bar pieces leave a gap at " + to_string(p.hi));
      if (pieces[i + 1].eval(p.hi) != p.eval(p.hi))
        throw invalid("T-bar element discontinuous at " + to_string(p.hi));
    }
  }
  if (pieces.back().eval(1) != pieces.front().eval(0) + 1)
    throw invalid("T-bar element must satisfy f(t+1) = f(t)+1");
  pieces_ = merged(pieces);
}

TbarElement TbarElement::translation(const Integer &n) {
  TbarElement f;
  f.pieces_[0].offset = Rational(n);
  return f;
}

Rational TbarElement::eval(const Rational &t) const {
  Integer k = floor_q(t);
  Rational x = t - Rational(k);
  for (const auto &p : pieces_)
    if (p.lo <= x && x <= p.hi)
      return p.eval(x) + Rational(k);
  throw internal_error("T-bar evaluation fell outside pieces");
}

Rational TbarElement::eval_inverse(const Rational &y) const {
  Rational f0 = pieces_.front().eval(0);
  Integer k = floor_q(y - f0);
  Rational z = y - Rational(k);
  for (const auto &p : pieces_)
    if (p.eval(p.lo) <= z && z <= p.eval(p.hi))
      return (z - p.offset) / p.slope() + Rational(k);
  throw internal_error("T-bar inverse evaluation fell outside pieces");
}

std::vector<Rational> TbarElement::breakpoints() const {
  std::vector<Rational> out;
  const auto &first = pieces_.front(), &last = pieces_.back();
  if (first.slope_exp != last.slope_exp)
    out.push_back(0);
  for (std::size_t i = 1; i < pieces_.size(); ++i)
    out.push_back(pieces_[i].lo);
  return out;
}

bool TbarElement::is_translation() const {
  return pieces_.size() == 1 && pieces_[0].slope_exp == 0 && pieces_[0].offset.get_den() == 1;
}

TbarElement compose(const TbarElement &f, const TbarElement &g) {
  std::vector<Rational> cuts{0, 1};
  for (const auto &p : g.pieces())
    cuts.push_back(p.lo);
  Rational g0 = g.eval(0), g1 = g.eval(1);
  for (const auto &q : f.pieces()) {
    for (Integer n = floor_q(g0) - 1; Rational(n) <= g1; ++n) {
      Rational y = q.lo + Rational(n);
      if (g0 <= y && y <= g1)
        cuts.push_back(g.eval_inverse(y));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<AffinePiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational &a = cuts[i], &b = cuts[i + 1];
    if (a < 0 || b > 1)
      continue;
    out.push_back(affine_from_intervals(a, b, f.eval(g.eval(a)), f.eval(g.eval(b))));
  }
  return TbarElement(out);
}

TbarElement invert(const TbarElement &f) {
  std::vector<Rational> cuts{0, 1};
  for (const auto &p : f.pieces())
    cuts.push_back(frac(p.eval(p.lo)));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<AffinePiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    out.push_back(affine_from_intervals(cuts[i], cuts[i + 1], f.eval_inverse(cuts[i]),
                                        f.eval_inverse(cuts[i + 1])));
  return TbarElement(out);
}

TbarElement shift(const TbarElement &f, const Integer &n) {
  auto ps = f.pieces();
  for (auto &p : ps)
    p.offset += Rational(n);
  return TbarElement(ps);
}

TbarElement mod_translations(const TbarElement &f) {
  return shift(f, -floor_q(f.eval(0)));
}

std::string to_string(const TbarElement &f) {
  std::string s = "TB{";
  bool first = true;
  for (const auto &p : f.pieces()) {
    s += first ? " " : "; ";
    first = false;
    s += "[" + to_string(p.lo) + "," + to_string(p.hi) + "]->[" + to_string(p.eval(p.lo)) +
         "," + to_string(p.eval(p.hi)) + "]";
  }
  return s + " }";
}

std::pair<Rational, Rational> parse_interval(const std::string &src, const text::Span &sp) {
  std::string s = text::trim(sp.s);
  if (s.size() < 5 || s.front() != '[' || s.back() != ']')
    text::fail(src, sp.offset, "expected interval '[a,b]'");
  auto parts = text::split_top(text::Span{s.substr(1, s.size() - 2), sp.offset + 1}, ',');
  if (parts.size() != 2)
    text::fail(src, sp.offset, "expected interval '[a,b]'");
  try {
    return {parse_rational(parts[0].s), parse_rational(parts[1].s)};
  } catch (const Error &e) {
    text::fail(src, sp.offset, e.what());
  }
}

TbarElement parse_tbar(const std::string &src) {
  auto h = text::parse_header(src);
  if (h.name != "TB")
    text::fail(src, 0, "expected TB{...}");
  std::vector<AffinePiece> pieces;
  for (const auto &item : text::split_top(h.body, ';')) {
    if (item.s.empty())
      continue;
    auto arrow = item.s.find("->");
    if (arrow == std::string::npos)
      text::fail(src, item.offset, "expected '[a,b]->[c,d]'");
    auto [a, b] = parse_interval(src, {item.s.substr(0, arrow), item.offset});
    auto [c, d] = parse_interval(src, {item.s.substr(arrow + 2), item.offset + arrow + 2});
    try {
      pieces.push_back(affine_from_intervals(a, b, c, d));
    } catch (const Error &e) {
      text::fail(src, item.offset, e.what());
    }
  }
  try {
    return TbarElement(pieces);
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    text::fail(src, h.body.offset, e.what());
  }
}

std::vector<TbarElement> tbar_generators() {
  TbarElement x0({affine_from_intervals(0, Rational(1, 2), 0, Rational(1, 4)),
                  affine_from_intervals(Rational(1, 2), Rational(3, 4), Rational(1, 4), Rational(1, 2)),
                  affine_from_intervals(Rational(3, 4), 1, Rational(1, 2), 1)});
  TbarElement half({affine_from_intervals(0, 1, Rational(1, 2), Rational(3, 2))});
  return {x0, invert(x0), half, invert(half)};
}

} // namespace germkit
