#pragma once

#include <string>
#include <vector>

#include "germkit/core.hpp"

namespace germkit {

// t -> (a t + b) / (c t + d) on [lo, hi]
struct MobiusPiece {
  Rational a, b, c, d;
  Rational lo, hi;

  Rational eval(const Rational &t) const;
  Rational derivative(const Rational &t) const;
  Rational det() const { return a * d - b * c; }
};

// Compactly supported piecewise-projective homeomorphism of the line.
class PProjMap {
public:
  PProjMap() : PProjMap(1, {}) {}
  // gaps in [-N, N] not covered by a piece are filled with the identity
  PProjMap(Rational n, std::vector<MobiusPiece> pieces);

  static PProjMap identity() { return PProjMap(); }
  // conjugate of t -> lambda t / ((lambda - 1) t + 1) onto [p, q]
  static PProjMap bump(const Rational &p, const Rational &q, const Rational &lambda);
  // piecewise-affine map fixing p and q, sending m to m2
  static PProjMap affine_bump(const Rational &p, const Rational &m, const Rational &m2,
                              const Rational &q);

  const Rational &support() const { return n_; }
  const std::vector<MobiusPiece> &pieces() const { return pieces_; }
  Rational eval(const Rational &t) const;
  // breakpoints with one-sided derivatives (left, right)
  struct Jump {
    Rational point, left, right;
  };
  std::vector<Jump> jumps() const;
  bool operator==(const PProjMap &o) const;

private:
  Rational n_;
  std::vector<MobiusPiece> pieces_;
  void normalize();
  friend PProjMap compose(const PProjMap &, const PProjMap &);
  friend PProjMap invert(const PProjMap &);
};

PProjMap compose(const PProjMap &f, const PProjMap &g); // f o g
PProjMap invert(const PProjMap &f);
Rational phi_hat(const PProjMap &f);

std::string to_string(const PProjMap &f);
PProjMap parse_pproj(const std::string &src);

} // namespace germkit
