#pragma once

#include <string>
#include <vector>

#include "germkit/core.hpp"

namespace germkit {

// Truncated series a_1 x + ... + a_r x^r with a_1 > 0.
class Jet {
public:
  Jet(std::vector<Rational> coeffs);
  static Jet identity(int r);
  static Jet linear(int r, const Rational &a1);

  int degree() const { return (int)c_.size(); }
  // a(i) is the coefficient of x^i, 1 <= i <= r
  const Rational &a(int i) const { return c_[i - 1]; }
  const std::vector<Rational> &coeffs() const { return c_; }
  bool operator==(const Jet &o) const { return c_ == o.c_; }

private:
  std::vector<Rational> c_;
};

Jet compose(const Jet &f, const Jet &g); // f(g(x))
Jet invert(const Jet &f);
Jet commutator(const Jet &f, const Jet &g); // f g f^-1 g^-1
// k with k o h = g^-1 o k o g for g = 2x
Jet solve_conjugacy(const Jet &h);
bool is_in_derived(const Jet &f);

std::string to_string(const Jet &f);
Jet parse_jet(const std::string &text);

} // namespace germkit
