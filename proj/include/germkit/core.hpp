#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "germkit/errors.hpp"

namespace germkit {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(const Integer &num, const Integer &den);
Rational parse_rational(const std::string &s);
std::string to_string(const Integer &z);
std::string to_string(const Rational &q);
Rational pow2(long n);
// floor(q) as an integer
Integer floor_q(const Rational &q);
bool is_dyadic(const Rational &q);
// 2-adic valuation of a nonzero rational
long val2(const Rational &q);

struct Dyadic {
  Integer num;
  unsigned long exp = 0;

  Dyadic() = default;
  Dyadic(Integer n, unsigned long e);
  static Dyadic from_rational(const Rational &q); // throws if not dyadic
  Rational value() const;
  bool operator==(const Dyadic &o) const { return num == o.num && exp == o.exp; }
};

Dyadic parse_dyadic(const std::string &s); // "13/2^5", "3", "1/4"
std::string to_string(const Dyadic &d);

// Letters are stored as raw byte values 0..d-1.
using Word = std::string;

Word word_from_digits(const std::string &digits, int d);
std::string word_to_digits(const Word &w);
bool is_prefix(const Word &p, const Word &w);
Word word_repeat(const Word &w, std::size_t n);

struct RootedWord {
  int root = 0;
  Word letters;

  bool operator==(const RootedWord &o) const = default;
  auto operator<=>(const RootedWord &o) const = default;
  std::size_t size() const { return letters.size(); }
  RootedWord extend(const Word &w) const { return {root, letters + w}; }
  RootedWord child(int x) const { return {root, letters + char(x)}; }
  bool is_prefix_of(const RootedWord &o) const {
    return root == o.root && is_prefix(letters, o.letters);
  }
};

std::string to_string(const RootedWord &w, int r);
RootedWord parse_rooted_word(const std::string &s, int d, int r);

struct RationalPoint {
  int root = 0;
  Word pre;
  Word period;

  bool operator==(const RationalPoint &o) const = default;
  auto operator<=>(const RationalPoint &o) const = default;

  int letter(std::size_t i) const {
    if (i < pre.size())
      return (unsigned char)pre[i];
    return (unsigned char)period[(i - pre.size()) % period.size()];
  }
  Word unroll(std::size_t n) const;
  bool in_cone(const RootedWord &w) const;
  // drop the first n letters (root retained)
  RationalPoint drop(std::size_t n) const;
  RationalPoint prepend(const RootedWord &w) const;
};

RationalPoint canonicalize_point(int root, const Word &pre, const Word &period, int d);
RationalPoint canonicalize_point(const RationalPoint &p, int d);
std::string to_string(const RationalPoint &p, int r = 1);
RationalPoint parse_point(const std::string &s, int d, int r = 1);

// replace prefix gamma of p by delta; throws if p is not in C_gamma
RationalPoint apply_prefix_replacement(const RationalPoint &p, const RootedWord &gamma,
                                       const RootedWord &delta, int d);

struct TailClass {
  Word period;
  bool operator==(const TailClass &o) const = default;
  auto operator<=>(const TailClass &o) const = default;
};

TailClass tail_class(const RationalPoint &p);
std::string to_string(const TailClass &t);

Word least_rotation(const Word &w);
Word primitive_root(const Word &w);

enum class Order { LT, EQ, GT };
Order compare_lex(const RationalPoint &p, const RationalPoint &q);
std::string to_string(Order o);

// binary expansion, d = 2, r = 1. Dyadics use the terminating expansion.
RationalPoint rational_to_point(const Rational &t);
Rational point_to_rational(const RationalPoint &p);
// real interval [a, a + 2^-|w|] of a binary cone
Rational cone_left(const Word &w);

} // namespace germkit
