#pragma once

#include <optional>
#include <string>
#include <vector>

#include "germkit/core.hpp"
#include "germkit/tbar.hpp"

namespace germkit {

// gamma psi -> delta psi
struct PlainRule {
  RootedWord from, to;
  bool operator==(const PlainRule &o) const = default;
  auto operator<=>(const PlainRule &o) const = default;
};

// Tail-self-similar germ at p = base(p) t^inf. The domains of `rules` form a
// fundamental domain for L_p (they normalize to a partition of the annulus
// C_base \ C_{base t}); the images form a fundamental domain for L_q. The map
// extends to x = L_p^{-m} y by f(x) = L_q^{-m} f(y).
struct SpiralRule {
  RationalPoint p, q;
  std::vector<PlainRule> rules;
  bool operator==(const SpiralRule &o) const = default;
};

// Cone-set helpers over the alphabet X_r x X_d^*.
std::vector<RootedWord> cone_complement(const std::vector<RootedWord> &cones, int d, int r);
bool cones_partition_space(std::vector<RootedWord> cones, int d, int r, std::string *why = nullptr);
bool cones_disjoint(std::vector<RootedWord> cones);
// merge full sibling families and drop contained cones
std::vector<RootedWord> normalize_cones(std::vector<RootedWord> cones, int d);
// pair two cone families in lex order, splitting the shallowest cones of the shorter
// list; nullopt if the counts cannot be matched
std::optional<std::vector<PlainRule>> pair_cones(std::vector<RootedWord> a,
                                                 std::vector<RootedWord> b, int d);

RootedWord spiral_base(const RationalPoint &p);
int tail_letter(const RationalPoint &p);
bool spiral_eligible(const RationalPoint &p, int d);

class VElement;

// Element of VA (d = 2, r = 1) or, with no spirals, of V_{d,r}.
class VAElement {
public:
  VAElement() = default;
  VAElement(int d, int r, std::vector<PlainRule> plain, std::vector<SpiralRule> spirals);
  static VAElement identity(int d = 2, int r = 1);

  int d() const { return d_; }
  int r() const { return r_; }
  const std::vector<PlainRule> &plain() const { return plain_; }
  const std::vector<SpiralRule> &spirals() const { return spirals_; }

  RationalPoint evaluate(const RationalPoint &x) const;
  // f restricted to C_w as prefix replacements; throws if C_w contains a spiral point
  std::vector<PlainRule> on_cone(const RootedWord &w) const;
  bool is_identity() const;
  bool operator==(const VAElement &o) const;

private:
  int d_ = 2, r_ = 1;
  std::vector<PlainRule> plain_;
  std::vector<SpiralRule> spirals_;
};

struct ValidationReport {
  std::vector<std::string> failures; // "check: detail"
  bool ok() const { return failures.empty(); }
  bool failed(const std::string &check) const;
};

// structural checks (partition, fundamental domain, order, tail bit)
ValidationReport validate(const VAElement &f);
// evaluation-level check of L_{f(p)} o f = f o L_p on sample points of every spiral
bool conjugacy_identity_holds(const VAElement &f, int depths = 3);

VAElement canonicalize(const VAElement &f);
// a level k at which f is L-equivariant on C_{base(s) t^k}, from s to f(s), with image
// inside C_{base(f(s))}
std::size_t equivariance_level(const VAElement &f, const RationalPoint &s);
VAElement compose(const VAElement &f, const VAElement &g); // f o g
VAElement invert(const VAElement &f);
std::vector<RationalPoint> sing(const VAElement &f);
bool is_in_V(const VAElement &f);

// germ of f at a fixed point in log coordinates
TbarElement germ_tbar(const VAElement &f, const RationalPoint &p);
// spiral germ at p -> q whose log-coordinate form is F
SpiralRule spiral_from_tbar(const RationalPoint &p, const RationalPoint &q, const TbarElement &F);
// element with the given germ at p, fixing p, identity near `avoid`, singular only at p
VAElement elementary_from_tbar(const RationalPoint &p, const TbarElement &F,
                               const std::vector<RationalPoint> &avoid = {});
// V element sending xs[i] to ys[i]; points distinct, same tail classes pairwise
std::optional<VElement> transport(const std::vector<RationalPoint> &xs,
                                  const std::vector<RationalPoint> &ys, int d, int r,
                                  int max_depth = 64);

class VElement {
public:
  VElement() : va_(VAElement::identity()) {}
  VElement(int d, int r, std::vector<PlainRule> rules);
  static VElement identity(int d = 2, int r = 1) { return from_va(VAElement::identity(d, r)); }
  static VElement from_va(const VAElement &f); // throws if f has spirals

  int d() const { return va_.d(); }
  int r() const { return va_.r(); }
  const std::vector<PlainRule> &rules() const { return va_.plain(); }
  const VAElement &as_va() const { return va_; }
  RationalPoint evaluate(const RationalPoint &x) const { return va_.evaluate(x); }
  std::vector<PlainRule> on_cone(const RootedWord &w) const { return va_.on_cone(w); }
  bool is_identity() const { return va_.is_identity(); }
  bool operator==(const VElement &o) const { return va_ == o.va_; }

private:
  VAElement va_;
};

VElement compose(const VElement &f, const VElement &g);
VElement invert(const VElement &f);
VElement power(const VElement &f, long n);
long germ_exponent(const VElement &g, const RationalPoint &p);

struct ElementaryFactorization {
  std::vector<VAElement> elementary;
  VElement v;
};
ElementaryFactorization factor_elementary(const VAElement &f);

// B-germ prescription: germ at point in log coordinates, taken modulo translations
struct GermPrescription {
  RationalPoint point;
  TbarElement germ;
};
VAElement realize_portrait(const std::vector<GermPrescription> &spec);
// nontrivial B-germs of f: singular points with their normalized log-coordinate germs
std::vector<GermPrescription> portrait(const VAElement &f);

std::string to_string(const VAElement &f);
std::string to_string(const VElement &f);
VAElement parse_va(const std::string &src); // validates
VAElement parse_va_unchecked(const std::string &src);
VElement parse_v(const std::string &src);

} // namespace germkit
