#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "germkit/cantor.hpp"
#include "germkit/plmap.hpp"
#include "germkit/rover.hpp"

namespace germkit {

// Circle instances (TA, Example2) name points by their binary expansion.
using InstanceElement = std::variant<TAElement, VAElement, RNElement, PLCircleMap>;

enum class InstanceKind { TA, VA, RN, Example2 };

class Instance {
public:
  static Instance ta();
  static Instance va();
  static Instance rn(AutomatonRef a);
  // Example2: T together with breakpoints in the T-orbits of the given
  // non-dyadic rationals (default: the orbit of 1/3)
  static Instance example2(std::vector<Rational> extra = {Rational(1, 3)});

  InstanceKind kind() const { return kind_; }
  std::string name() const;
  const std::vector<TailClass> &extra_classes() const { return extra_; }

  bool contains(const InstanceElement &g) const;
  bool in_base(const InstanceElement &g) const;
  std::vector<RationalPoint> sing(const InstanceElement &g) const;
  RationalPoint evaluate(const InstanceElement &g, const RationalPoint &x) const;
  InstanceElement compose(const InstanceElement &f, const InstanceElement &g) const; // f o g
  InstanceElement invert(const InstanceElement &g) const;
  InstanceElement identity() const;
  TailClass orbit(const RationalPoint &p) const;
  // base element b with b(p) = q, identity when p = q; variants differ in the
  // cone depth and the balancing of the complementary arc
  InstanceElement transversal(const RationalPoint &p, const RationalPoint &q, int variant = 0) const;
  // A_p is Z^rank (rank 0: trivial)
  int value_rank(const TailClass &c) const;
  // image in A_p of the germ at p of an element h fixing p
  Integer germ_value(const InstanceElement &h, const RationalPoint &p) const;

private:
  InstanceKind kind_ = InstanceKind::VA;
  AutomatonRef aut_;
  std::vector<TailClass> extra_;
};

Integer sigma_p(const Instance &inst, const InstanceElement &g, const RationalPoint &p,
                int variant = 0);
std::map<TailClass, Integer> sigma(const Instance &inst, const InstanceElement &g, int variant = 0);

// formal combination of tail classes
using ClassCombination = std::map<TailClass, long>;
ClassCombination tau_of_moves(const std::vector<std::pair<RationalPoint, RationalPoint>> &moves);
ClassCombination tau(const Instance &inst, const InstanceElement &g);
std::string to_string(const ClassCombination &c);

struct Portrait {
  std::map<RationalPoint, std::string> germs; // nontrivial entries only
};
Portrait portrait(const Instance &inst, const InstanceElement &g);

// Example2 elements: PL circle maps with rational breakpoints
bool is_example2(const PLCircleMap &f, const std::vector<TailClass> &extra);
// t/2 on [0, 2/3], 2t - 1 on [2/3, 1]
PLCircleMap example2_f0();

using GroupWord = std::vector<std::pair<int, Integer>>; // (generator, exponent)

struct GermGroupPresentation {
  std::vector<std::string> generators;
  std::vector<GroupWord> relators;
  std::vector<bool> base;
};

struct AbelianGroup {
  long free_rank = 0;
  std::vector<Integer> torsion; // invariant factors > 1, each dividing the next
  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const AbelianGroup &o) const = default;
};

// invariant factors of an integer relation matrix (rows relators, columns generators)
AbelianGroup smith_invariants(std::vector<std::vector<Integer>> m, std::size_t columns);
AbelianGroup abelian_quotient(const GermGroupPresentation &pres);
std::string to_string(const AbelianGroup &g);
// "<b,c,d,t | b^2, b*c*d, t*b*t^-1*c^-1; base t>"
GermGroupPresentation parse_presentation(const std::string &src);
std::string to_string(const GermGroupPresentation &p);
// germ group of Roever's group at 1bar: Klein four-group, t b t^-1 = d, t d t^-1 = c
GermGroupPresentation roever_germ_presentation();

} // namespace germkit
