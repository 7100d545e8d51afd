#include "germkit/jets.hpp"

#include "germkit/text.hpp"

namespace germkit {

Jet::Jet(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty())
    throw invalid("jet of degree 0");
  if (c_[0] <= 0)
    throw invalid("jet leading coefficient must be positive");
}

Jet Jet::identity(int r) { return linear(r, 1); }

Jet Jet::linear(int r, const Rational &a1) {
  std::vector<Rational> c(r, Rational(0));
  c[0] = a1;
  return Jet(c);
}

namespace {

// truncated product of two series given by coefficients of x^1..x^r
std::vector<Rational> mul(const std::vector<Rational> &p, const std::vector<Rational> &q, int r) {
  std::vector<Rational> out(r, Rational(0));
  for (int i = 0; i < r; ++i) {
    if (p[i] == 0)
      continue;
    for (int j = 0; i + j + 2 <= r; ++j)
      out[i + j + 1] += p[i] * q[j];
  }
  return out;
}

} // namespace

Jet compose(const Jet &f, const Jet &g) {
  int r = f.degree();
  if (g.degree() != r)
    throw Error("DegreeMismatch", "jets of degree " + std::to_string(r) + " and " +
                                      std::to_string(g.degree()));
  std::vector<Rational> out(r, Rational(0));
  std::vector<Rational> power = g.coeffs();
  for (int j = 1; j <= r; ++j) {
    for (int i = 0; i < r; ++i)
      out[i] += f.a(j) * power[i];
    if (j < r)
      power = mul(power, g.coeffs(), r);
  }
  return Jet(out);
}

Jet invert(const Jet &f) {
  int r = f.degree();
  // solve f(u(x)) = x coefficient by coefficient
  std::vector<Rational> u(r, Rational(0));
  u[0] = 1 / f.a(1);
  for (int n = 2; n <= r; ++n) {
    // coefficient of x^n in f(u) with u_n unknown equals f_1 u_n + rest
    std::vector<Rational> trial = u;
    trial[n - 1] = 0;
    Jet partial = compose(f, Jet(trial));
    u[n - 1] = -partial.a(n) / f.a(1);
  }
  return Jet(u);
}

Jet commutator(const Jet &f, const Jet &g) {
  return compose(compose(f, g), compose(invert(f), invert(g)));
}

Jet solve_conjugacy(const Jet &h) {
  if (h.a(1) != 1)
    throw Error("DomainError", "solve_conjugacy needs a_1 = 1");
  int r = h.degree();
  std::vector<std::vector<Rational>> powers; // powers[j-1] = h^j
  powers.push_back(h.coeffs());
  for (int j = 2; j <= r; ++j)
    powers.push_back(mul(powers.back(), h.coeffs(), r));
  std::vector<Rational> b(r, Rational(0));
  b[0] = 1;
  for (int i = 2; i <= r; ++i) {
    Rational s = 0;
    for (int j = 1; j < i; ++j)
      s += b[j - 1] * powers[j - 1][i - 1];
    b[i - 1] = s / (pow2(i - 1) - 1);
  }
  return Jet(b);
}

bool is_in_derived(const Jet &f) { return f.a(1) == 1; }

std::string to_string(const Jet &f) {
  std::string s = "J[r=" + std::to_string(f.degree()) + "]{ ";
  for (int i = 1; i <= f.degree(); ++i) {
    if (i > 1)
      s += ", ";
    s += to_string(f.a(i));
  }
  return s + " }";
}

Jet parse_jet(const std::string &src) {
  auto h = text::parse_header(src);
  if (h.name != "J")
    text::fail(src, 0, "expected J[...]{...}");
  std::vector<Rational> c;
  for (const auto &tok : text::split_top(h.body, ',')) {
    try {
      c.push_back(parse_rational(tok.s));
    } catch (const Error &) {
      text::fail(src, tok.offset, "bad coefficient '" + tok.s + "'");
    }
  }
  int r = text::param_int(h, "r", (int)c.size());
  if ((int)c.size() != r)
    text::fail(src, h.body.offset, "expected " + std::to_string(r) + " coefficients");
  if (c[0] <= 0)
    text::fail(src, h.body.offset, "leading coefficient must be positive");
  return Jet(c);
}

} // namespace germkit
