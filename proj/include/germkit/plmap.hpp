#pragma once

#include <string>
#include <utility>
#include <vector>

#include "germkit/cantor.hpp"
#include "germkit/core.hpp"
#include "germkit/tbar.hpp"

namespace germkit {

// Piecewise-affine homeomorphism of the circle R/Z with slopes 2^n and dyadic
// offsets. Breakpoints may be any rationals; with dyadic breakpoints this is an
// element of Thompson's T.
//
// Stored on the chart [0,1]: pieces are sorted, cover [0,1] and have images
// inside [0,1] (a piece is split where its image would wrap past 0).
class PLCircleMap {
public:
  PLCircleMap() : pieces_{{0, 1, 0, Rational(0)}} {}
  explicit PLCircleMap(std::vector<AffinePiece> pieces);
  // t -> t + a (mod 1), a dyadic
  static PLCircleMap rotation(const Rational &a);
  static PLCircleMap identity() { return PLCircleMap(); }

  const std::vector<AffinePiece> &pieces() const { return pieces_; }
  // t in [0,1); result in [0,1)
  Rational eval(const Rational &t) const;
  // points of [0,1) where the slope changes
  std::vector<Rational> breakpoints() const;
  // (left, right) slope exponents at q
  std::pair<long, long> slope_exponents_at(const Rational &q) const;
  bool is_identity() const { return *this == PLCircleMap(); }
  bool operator==(const PLCircleMap &o) const { return pieces_ == o.pieces_; }

private:
  std::vector<AffinePiece> pieces_;
};

PLCircleMap compose(const PLCircleMap &f, const PLCircleMap &g); // f o g
PLCircleMap invert(const PLCircleMap &f);
bool is_in_T(const PLCircleMap &f);
std::string to_string(const PLCircleMap &f);
// "T{ [a,b]->[c,d]; ... }" without spiral clauses; breakpoints may be rational
PLCircleMap parse_circle_map(const std::string &src);

// Element of the group A: a PL homeomorphism of R, slopes 2^n, dyadic data,
// commuting with t -> t+1 outside [-N, N]. Stored on [-N-1, N+1].
class AElement {
public:
  AElement() : AElement(1, {{-2, 2, 0, Rational(0)}}) {}
  AElement(long n, std::vector<AffinePiece> pieces);
  static AElement from_tbar(const TbarElement &f);

  long bound() const { return n_; }
  const std::vector<AffinePiece> &pieces() const { return pieces_; }
  Rational eval(const Rational &t) const;
  Rational eval_inverse(const Rational &y) const;
  bool operator==(const AElement &o) const;

private:
  long n_;
  std::vector<AffinePiece> pieces_;
};

AElement compose(const AElement &f, const AElement &g);
AElement invert(const AElement &f);
std::string to_string(const AElement &f);

struct CircleText;

// Element of TA. The circle is identified with binary Cantor space by binary
// expansion; a dyadic circle point p corresponds to the two Cantor points
// "above" (x followed by 0s) and "below" (x' followed by 1s). The element is
// stored as the corresponding VA element, which is kept canonical.
class TAElement {
public:
  TAElement() : va_(VAElement::identity()) {}
  // throws InvalidElement unless f induces a circle homeomorphism
  explicit TAElement(const VAElement &f);
  static TAElement from_circle(const PLCircleMap &f); // requires is_in_T(f)

  const VAElement &cantor() const { return va_; }
  Rational eval(const Rational &t) const;
  bool is_identity() const { return va_.is_identity(); }
  bool operator==(const TAElement &o) const { return va_ == o.va_; }

private:
  struct Trusted {};
  TAElement(VAElement f, Trusted) : va_(std::move(f)) {}
  friend TAElement compose(const TAElement &f, const TAElement &g);
  friend TAElement invert(const TAElement &f);
  friend TAElement ta_from_text(const CircleText &t);

  VAElement va_;
};

TAElement compose(const TAElement &f, const TAElement &g); // f o g
TAElement invert(const TAElement &f);
std::vector<Rational> sing(const TAElement &f);
bool is_in_T(const TAElement &f);
PLCircleMap to_circle_map(const TAElement &f); // requires is_in_T(f)
// dyadic breakpoints of the regular part together with the singular points
std::vector<Rational> breakpoints(const TAElement &f);
// (left, right) slope exponents at a non-singular point
std::pair<long, long> slope_exponents_at(const TAElement &f, const Rational &q);
// germs at a fixed dyadic point in log coordinates, ordered (below, above)
std::pair<TbarElement, TbarElement> germ_tbar_pair(const TAElement &f, const Rational &p);

// Cantor points on either side of a dyadic circle point
RationalPoint above_point(const Rational &p);
RationalPoint below_point(const Rational &p);

// Circle text form, before any checking.
struct IntervalMap {
  Rational a, b, c, d; // [a,b] -> [c,d]
};
struct CircleSpiralText {
  Rational p, q;
  long depth = 0;
  std::vector<IntervalMap> above, below;
};
struct CircleText {
  std::vector<IntervalMap> regular;
  std::vector<CircleSpiralText> spirals;
};

CircleText parse_circle_text(const std::string &src);
// named checks: "slope", "dyadic", "continuity", "conjugacy", "partition", plus the
// checks of the Cantor representation
ValidationReport validate(const CircleText &t);
TAElement ta_from_text(const CircleText &t); // throws InvalidElement
TAElement parse_ta(const std::string &src);
std::string to_string(const TAElement &f);

} // namespace germkit
