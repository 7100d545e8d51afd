#include "germkit/core.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace germkit {

Rational make_rational(const Integer &num, const Integer &den) {
  if (den == 0)
    throw Error("DomainError", "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string &s) {
  if (s.empty())
    throw Error("ParseError", "empty rational");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos)
      return Rational(Integer(s));
    std::string den = s.substr(slash + 1);
    if (den.rfind("2^", 0) == 0)
      return parse_dyadic(s).value();
    return make_rational(Integer(s.substr(0, slash)), Integer(den));
  } catch (const std::invalid_argument &) {
    throw Error("ParseError", "bad rational '" + s + "'");
  }
}

std::string to_string(const Integer &z) { return z.get_str(); }

std::string to_string(const Rational &q) {
  if (q.get_den() == 1)
    return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational pow2(long n) {
  Integer p;
  if (n >= 0) {
    mpz_ui_pow_ui(p.get_mpz_t(), 2, (unsigned long)n);
    return Rational(p);
  }
  mpz_ui_pow_ui(p.get_mpz_t(), 2, (unsigned long)(-n));
  return make_rational(1, p);
}

Integer floor_q(const Rational &q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

bool is_dyadic(const Rational &q) {
  const Integer &den = q.get_den();
  return mpz_popcount(den.get_mpz_t()) == 1;
}

long val2(const Rational &q) {
  if (q == 0)
    throw Error("DomainError", "valuation of zero");
  long a = (long)mpz_scan1(q.get_num_mpz_t(), 0);
  long b = (long)mpz_scan1(q.get_den_mpz_t(), 0);
  return a - b;
}

Dyadic::Dyadic(Integer n, unsigned long e) : num(std::move(n)), exp(e) {
  while (exp > 0 && mpz_even_p(num.get_mpz_t())) {
    num /= 2;
    --exp;
  }
}

Dyadic Dyadic::from_rational(const Rational &q) {
  if (!is_dyadic(q))
    throw Error("DomainError", "not a dyadic rational: " + to_string(q));
  unsigned long e = mpz_scan1(q.get_den_mpz_t(), 0);
  return Dyadic(q.get_num(), e);
}

Rational Dyadic::value() const { return Rational(num) * pow2(-(long)exp); }

Dyadic parse_dyadic(const std::string &s) {
  auto slash = s.find('/');
  if (slash == std::string::npos)
    return Dyadic(Integer(s), 0);
  std::string den = s.substr(slash + 1);
  Integer num(s.substr(0, slash));
  if (den.rfind("2^", 0) == 0)
    return Dyadic(num, std::stoul(den.substr(2)));
  return Dyadic::from_rational(make_rational(num, Integer(den)));
}

std::string to_string(const Dyadic &d) {
  if (d.exp == 0)
    return d.num.get_str();
  return d.num.get_str() + "/2^" + std::to_string(d.exp);
}

Word word_from_digits(const std::string &digits, int d) {
  Word w;
  w.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9' || c - '0' >= d)
      throw Error("ParseError", std::string("letter out of range: '") + c + "'");
    w.push_back(char(c - '0'));
  }
  return w;
}

std::string word_to_digits(const Word &w) {
  std::string s;
  s.reserve(w.size());
  for (char c : w)
    s.push_back(char('0' + c));
  return s;
}

bool is_prefix(const Word &p, const Word &w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

Word word_repeat(const Word &w, std::size_t n) {
  Word r;
  r.reserve(w.size() * n);
  for (std::size_t i = 0; i < n; ++i)
    r += w;
  return r;
}

std::string to_string(const RootedWord &w, int r) {
  if (r <= 1)
    return word_to_digits(w.letters);
  return std::to_string(w.root) + ":" + word_to_digits(w.letters);
}

RootedWord parse_rooted_word(const std::string &s, int d, int r) {
  RootedWord w;
  auto colon = s.find(':');
  std::string body = s;
  if (colon != std::string::npos) {
    w.root = std::stoi(s.substr(0, colon));
    body = s.substr(colon + 1);
  }
  if (w.root < 0 || w.root >= r)
    throw Error("ParseError", "root out of range in '" + s + "'");
  w.letters = word_from_digits(body, d);
  return w;
}

Word RationalPoint::unroll(std::size_t n) const {
  Word w;
  w.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    w.push_back(char(letter(i)));
  return w;
}

bool RationalPoint::in_cone(const RootedWord &w) const {
  if (w.root != root)
    return false;
  for (std::size_t i = 0; i < w.letters.size(); ++i)
    if (letter(i) != (unsigned char)w.letters[i])
      return false;
  return true;
}

RationalPoint RationalPoint::drop(std::size_t n) const {
  RationalPoint p;
  p.root = root;
  if (n <= pre.size()) {
    p.pre = pre.substr(n);
    p.period = period;
  } else {
    std::size_t k = (n - pre.size()) % period.size();
    p.period = period.substr(k) + period.substr(0, k);
  }
  return p;
}

RationalPoint RationalPoint::prepend(const RootedWord &w) const {
  RationalPoint p;
  p.root = w.root;
  p.pre = w.letters + pre;
  p.period = period;
  return p;
}

Word primitive_root(const Word &w) {
  std::size_t n = w.size();
  for (std::size_t l = 1; l < n; ++l) {
    if (n % l)
      continue;
    bool ok = true;
    for (std::size_t i = l; i < n && ok; ++i)
      ok = w[i] == w[i - l];
    if (ok)
      return w.substr(0, l);
  }
  return w;
}

Word least_rotation(const Word &w) {
  Word best = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    Word r = w.substr(i) + w.substr(0, i);
    if (r < best)
      best = r;
  }
  return best;
}

RationalPoint canonicalize_point(int root, const Word &pre, const Word &period, int d) {
  if (period.empty())
    throw Error("DomainError", "empty period");
  for (char c : pre)
    if ((unsigned char)c >= d)
      throw Error("DomainError", "letter out of range");
  for (char c : period)
    if ((unsigned char)c >= d)
      throw Error("DomainError", "letter out of range");
  RationalPoint p{root, pre, primitive_root(period)};
  while (!p.pre.empty() && p.pre.back() == p.period.back()) {
    p.pre.pop_back();
    p.period = p.period.back() + p.period.substr(0, p.period.size() - 1);
  }
  return p;
}

RationalPoint canonicalize_point(const RationalPoint &p, int d) {
  return canonicalize_point(p.root, p.pre, p.period, d);
}

std::string to_string(const RationalPoint &p, int) {
  return std::to_string(p.root) + "." + word_to_digits(p.pre) + "(" +
         word_to_digits(p.period) + ")";
}

RationalPoint parse_point(const std::string &s, int d, int r) {
  auto dot = s.find('.');
  auto open = s.find('(');
  auto close = s.find(')');
  if (dot == std::string::npos || open == std::string::npos || close == std::string::npos ||
      open < dot || close < open || close + 1 != s.size())
    throw Error("ParseError", "bad rational point '" + s + "'");
  int root = std::stoi(s.substr(0, dot));
  if (root < 0 || root >= r)
    throw Error("ParseError", "root out of range in '" + s + "'");
  Word pre = word_from_digits(s.substr(dot + 1, open - dot - 1), d);
  Word period = word_from_digits(s.substr(open + 1, close - open - 1), d);
  if (period.empty())
    throw Error("ParseError", "empty period in '" + s + "'");
  return canonicalize_point(root, pre, period, d);
}

RationalPoint apply_prefix_replacement(const RationalPoint &p, const RootedWord &gamma,
                                       const RootedWord &delta, int d) {
  if (!p.in_cone(gamma))
    throw Error("DomainError", "point not in cone");
  return canonicalize_point(p.drop(gamma.size()).prepend(delta), d);
}

TailClass tail_class(const RationalPoint &p) {
  return TailClass{least_rotation(primitive_root(p.period))};
}

std::string to_string(const TailClass &t) { return word_to_digits(t.period); }

Order compare_lex(const RationalPoint &p, const RationalPoint &q) {
  if (p.root != q.root)
    return p.root < q.root ? Order::LT : Order::GT;
  std::size_t n = std::max(p.pre.size(), q.pre.size()) +
                  std::lcm(p.period.size(), q.period.size());
  for (std::size_t i = 0; i < n; ++i) {
    int a = p.letter(i), b = q.letter(i);
    if (a != b)
      return a < b ? Order::LT : Order::GT;
  }
  return Order::EQ;
}

std::string to_string(Order o) {
  switch (o) {
  case Order::LT:
    return "LT";
  case Order::EQ:
    return "EQ";
  default:
    return "GT";
  }
}

RationalPoint rational_to_point(const Rational &t) {
  if (t < 0 || t >= 1)
    throw Error("DomainError", "circle coordinate outside [0,1): " + to_string(t));
  Integer x = t.get_num();
  const Integer &den = t.get_den();
  std::map<Integer, std::size_t> seen;
  Word digits;
  while (!seen.count(x)) {
    seen[x] = digits.size();
    x *= 2;
    if (x >= den) {
      digits.push_back(1);
      x -= den;
    } else {
      digits.push_back(0);
    }
  }
  std::size_t start = seen[x];
  return canonicalize_point(0, digits.substr(0, start), digits.substr(start), 2);
}

static Integer word_value(const Word &w) {
  Integer v = 0;
  for (char c : w)
    v = 2 * v + (int)c;
  return v;
}

Rational point_to_rational(const RationalPoint &p) {
  Integer a = word_value(p.pre);
  Integer per = word_value(p.period);
  Rational m = pow2((long)p.period.size()) - 1;
  return (Rational(a) + Rational(per) / m) * pow2(-(long)p.pre.size());
}

Rational cone_left(const Word &w) { return Rational(word_value(w)) * pow2(-(long)w.size()); }

} // namespace germkit
