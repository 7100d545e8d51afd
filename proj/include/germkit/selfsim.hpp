#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "germkit/core.hpp"

namespace germkit {

// Wreath recursion g = perm (g|_0, ..., g|_{d-1}), acting by g(x w) = perm(x) g|_x(w).
struct MealyState {
  std::string name;
  std::vector<int> perm;
  std::vector<int> next; // state indices
};

class MealyAutomaton {
public:
  MealyAutomaton() = default;
  // states given by name; transitions reference names; "1" is added if absent
  MealyAutomaton(int d, const std::vector<std::string> &names,
                 const std::vector<std::vector<int>> &perms,
                 const std::vector<std::vector<std::string>> &next, std::string label = "");

  int d() const { return d_; }
  const std::string &label() const { return label_; }
  std::size_t size() const { return states_.size(); }
  const MealyState &state(int i) const { return states_[i]; }
  int index(const std::string &name) const; // throws ParseError-kind Error
  int trivial_state() const { return trivial_; }
  // per-state facts computed at construction
  bool acts_trivially(int i) const { return trivial_acts_[i]; }
  bool is_involution(int i) const { return involution_[i]; }
  int representative(int i) const { return rep_[i]; }

private:
  int d_ = 2;
  std::string label_;
  std::vector<MealyState> states_;
  std::map<std::string, int> by_name_;
  int trivial_ = 0;
  std::vector<bool> trivial_acts_, involution_;
  std::vector<int> rep_;
};

MealyAutomaton parse_automaton(const std::string &src);
std::string to_string(const MealyAutomaton &a);
// grigorchuk, gupta-sidki, odometer, exponential, polynomial
MealyAutomaton builtin_automaton(const std::string &name);
std::vector<std::string> builtin_automaton_names();

struct Gen {
  int state = 0;
  bool inv = false;
  bool operator==(const Gen &o) const = default;
  auto operator<=>(const Gen &o) const = default;
};
// g_1 g_2 ... g_k acting right to left: w(x) = g_1(g_2(...g_k(x)))
using AutomatonWord = std::vector<Gen>;

AutomatonWord parse_word(const MealyAutomaton &a, const std::string &s); // "a*b^-1", "1"
std::string to_string(const MealyAutomaton &a, const AutomatonWord &w);
// canonical state representatives, trivial states dropped, free and involution cancellation
AutomatonWord reduce(const MealyAutomaton &a, AutomatonWord w);
AutomatonWord inverse(const AutomatonWord &w);
AutomatonWord product(const MealyAutomaton &a, const AutomatonWord &v, const AutomatonWord &w);

// image of letter x under w; the section w|_x is written to *section if given
int act_letter(const MealyAutomaton &a, const AutomatonWord &w, int x,
               AutomatonWord *section = nullptr);
Word act(const MealyAutomaton &a, const AutomatonWord &w, const Word &x);
AutomatonWord section(const MealyAutomaton &a, const AutomatonWord &w, const Word &x);
// image of an eventually periodic point (root untouched)
RationalPoint act(const MealyAutomaton &a, const AutomatonWord &w, const RationalPoint &p);
std::vector<int> permutation(const MealyAutomaton &a, const AutomatonWord &w);

// Explicit automaton on the reduced words reachable from seeds by sections.
struct WordAutomaton {
  std::vector<AutomatonWord> words;
  std::vector<std::vector<int>> perm, next;
  std::map<AutomatonWord, int> index;
};
// throws Error("Undecided") once more than max_states words are reached
WordAutomaton explore(const MealyAutomaton &a, const std::vector<AutomatonWord> &seeds,
                      std::size_t max_states = 200000);
// Moore partition refinement: class id per state
std::vector<int> minimize(const WordAutomaton &w);

constexpr std::size_t kDefaultMaxStates = 200000;

bool is_trivial(const MealyAutomaton &a, const AutomatonWord &w,
                std::size_t max_states = kDefaultMaxStates);
bool equal(const MealyAutomaton &a, const AutomatonWord &v, const AutomatonWord &w,
           std::size_t max_states = kDefaultMaxStates);

// minimal section-closed set containing all deep sections of products; shortest
// representatives, sorted. Throws Error("Exceeded") at the limits.
std::vector<AutomatonWord> nucleus(const MealyAutomaton &a, std::vector<AutomatonWord> gens = {},
                                   std::size_t max_size = 10000, int max_iter = 50);

struct Activity {
  enum class Kind { Finitary, Polynomial, Exponential } kind = Kind::Finitary;
  int degree = -1; // polynomial degree; 0 = bounded
  bool bounded() const { return kind == Kind::Finitary || (kind == Kind::Polynomial && degree == 0); }
};
Activity activity_degree(const MealyAutomaton &a, const AutomatonWord &w);
std::string to_string(const Activity &x);
// number of words v of length k with w|_v acting nontrivially on the first letter
Integer theta(const MealyAutomaton &a, const AutomatonWord &w, int k);
// infinite words along which every section is nontrivial; throws NotBounded
std::vector<RationalPoint> active_rays(const MealyAutomaton &a, const AutomatonWord &w);

} // namespace germkit
