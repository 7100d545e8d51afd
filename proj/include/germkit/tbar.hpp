#pragma once

#include <string>
#include <vector>

#include "germkit/core.hpp"
#include "germkit/text.hpp"

namespace germkit {

// t -> 2^slope_exp * t + offset on [lo, hi]
struct AffinePiece {
  Rational lo, hi;
  long slope_exp = 0;
  Rational offset;

  Rational eval(const Rational &t) const { return pow2(slope_exp) * t + offset; }
  Rational slope() const { return pow2(slope_exp); }
  bool same_map(const AffinePiece &o) const {
    return slope_exp == o.slope_exp && offset == o.offset;
  }
  bool operator==(const AffinePiece &o) const = default;
};

// piece with domain [a,b] and image [c,d]; throws unless the slope is a power of two
AffinePiece affine_from_intervals(const Rational &a, const Rational &b, const Rational &c,
                                  const Rational &d);

// Lift of a circle homeomorphism commuting with t -> t+1, stored on [0,1].
class TbarElement {
public:
  TbarElement() : pieces_{{0, 1, 0, Rational(0)}} {}
  explicit TbarElement(std::vector<AffinePiece> pieces);
  static TbarElement translation(const Integer &n);
  static TbarElement identity() { return translation(0); }

  const std::vector<AffinePiece> &pieces() const { return pieces_; }
  Rational eval(const Rational &t) const;
  Rational eval_inverse(const Rational &y) const;
  // breakpoints in [0,1)
  std::vector<Rational> breakpoints() const;
  bool is_translation() const;
  bool operator==(const TbarElement &o) const { return pieces_ == o.pieces_; }

private:
  std::vector<AffinePiece> pieces_;
};

TbarElement compose(const TbarElement &f, const TbarElement &g); // f o g
TbarElement invert(const TbarElement &f);
// f + n
TbarElement shift(const TbarElement &f, const Integer &n);
// representative of f modulo integer translations with f(0) in [0,1)
TbarElement mod_translations(const TbarElement &f);

// x0-like lift and the half translation, with inverses
std::vector<TbarElement> tbar_generators();

std::string to_string(const TbarElement &f);
TbarElement parse_tbar(const std::string &src);
// "[a,b]" inside src at the span's offset
std::pair<Rational, Rational> parse_interval(const std::string &src, const text::Span &sp);

} // namespace germkit
