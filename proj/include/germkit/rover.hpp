#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "germkit/cantor.hpp"
#include "germkit/selfsim.hpp"

namespace germkit {

// alpha psi -> beta g(psi)
struct RNRule {
  RootedWord from, to;
  AutomatonWord g;
  bool operator==(const RNRule &o) const = default;
};

using AutomatonRef = std::shared_ptr<const MealyAutomaton>;

// Element of the Roever-Nekrashevych group V_{d,r}G.
class RNElement {
public:
  RNElement(AutomatonRef a, int r, std::vector<RNRule> rules);
  static RNElement identity(AutomatonRef a, int r = 1);
  static RNElement from_v(AutomatonRef a, const VElement &v);
  // the self-similar element g acting on the whole of each root cone
  static RNElement from_word(AutomatonRef a, const AutomatonWord &g, int r = 1);

  const MealyAutomaton &automaton() const { return *aut_; }
  const AutomatonRef &automaton_ref() const { return aut_; }
  int d() const { return aut_->d(); }
  int r() const { return r_; }
  const std::vector<RNRule> &rules() const { return rules_; }

  RationalPoint evaluate(const RationalPoint &x) const;
  bool is_identity() const;
  bool operator==(const RNElement &o) const;

private:
  AutomatonRef aut_;
  int r_;
  std::vector<RNRule> rules_;
};

RNElement compose(const RNElement &f2, const RNElement &f1); // f2 o f1
RNElement invert(const RNElement &f);
RNElement power(const RNElement &f, long n);
// union over rules of alpha . active_rays(g); throws NotBounded
std::vector<RationalPoint> sing(const RNElement &f);

struct LocalFixer {
  RNElement element;
  RootedWord neighborhood; // f and element agree on this cone
};
LocalFixer local_fixer(const RNElement &f, const RationalPoint &p);

// germ of h at a fixed point p is trivial (decided exactly by unfolding along p)
bool germ_trivial(const RNElement &h, const RationalPoint &p);
bool germ_equal(const RNElement &g1, const RNElement &g2, const RationalPoint &p);
// least n in 1..max_n with trivial germ of g^n at p
std::optional<long> germ_order(const RNElement &g, const RationalPoint &p, long max_n);

std::string to_string(const RNElement &f);
// "RN[d=2,r=1; SS=grigorchuk]{ 00->0 : b; 01->10 : 1; 1->11 : a }"; SS names a
// built-in automaton or a file holding an SS[...] description
RNElement parse_rn(const std::string &src);
AutomatonRef resolve_automaton(const std::string &name);

} // namespace germkit
