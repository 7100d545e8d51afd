#include "germkit/germtheory.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "germkit/text.hpp"

namespace germkit {

namespace {

Error unsupported(const std::string &msg) { return Error("UnsupportedOrbit", msg); }

Rational circle_value(const RationalPoint &p) { return point_to_rational(p); }

bool in_class(const Rational &t, const std::vector<TailClass> &classes) {
  if (is_dyadic(t))
    return true;
  TailClass c = tail_class(rational_to_point(t - Rational(floor_q(t))));
  return std::find(classes.begin(), classes.end(), c) != classes.end();
}

// maximal aligned dyadic intervals tiling [lo, hi]
std::vector<std::pair<Rational, Rational>> dyadic_tiling(Rational lo, const Rational &hi) {
  std::vector<std::pair<Rational, Rational>> out;
  while (lo < hi) {
    Rational len = 1;
    while (true) {
      Rational q = lo / len;
      if (q.get_den() == 1 && lo + len <= hi)
        break;
      len /= 2;
    }
    out.push_back({lo, lo + len});
    lo += len;
  }
  return out;
}

void split_at(std::vector<std::pair<Rational, Rational>> &v, std::size_t i) {
  Rational mid = (v[i].first + v[i].second) / 2;
  Rational hi = v[i].second;
  v[i].second = mid;
  v.insert(v.begin() + i + 1, {mid, hi});
}

void balance(std::vector<std::pair<Rational, Rational>> &a,
             std::vector<std::pair<Rational, Rational>> &b, int variant) {
  while (a.size() != b.size()) {
    auto &s = a.size() < b.size() ? a : b;
    std::size_t pick = s.size() - 1;
    if (variant == 0) {
      pick = 0;
      for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].second - s[i].first > s[pick].second - s[pick].first)
          pick = i;
    }
    split_at(s, pick);
  }
}

long exp_of(const Rational &ratio) {
  Rational x = ratio;
  long e = 0;
  while (x > 1) {
    x /= 2;
    ++e;
  }
  while (x < 1) {
    x *= 2;
    --e;
  }
  if (x != 1)
    throw internal_error("ratio " + to_string(ratio) + " is not a power of 2");
  return e;
}

// T element sending the binary cone alpha onto beta by prefix replacement
PLCircleMap cone_transport(const Word &alpha, const Word &beta, int variant) {
  Rational a = cone_left(alpha), b = cone_left(beta);
  Rational la = pow2(-(long)alpha.size()), lb = pow2(-(long)beta.size());
  auto src = dyadic_tiling(a + la, a + 1);
  auto dst = dyadic_tiling(b + lb, b + 1);
  balance(src, dst, variant);
  src.insert(src.begin(), {a, a + la});
  dst.insert(dst.begin(), {b, b + lb});
  std::vector<AffinePiece> pieces;
  for (std::size_t i = 0; i < src.size(); ++i) {
    long e = exp_of((dst[i].second - dst[i].first) / (src[i].second - src[i].first));
    Rational lo = src[i].first, hi = src[i].second;
    Rational off = dst[i].first - pow2(e) * lo;
    Rational n = Rational(floor_q(lo));
    pieces.push_back({lo - n, hi - n, e, Rational(off + pow2(e) * n)});
  }
  return PLCircleMap(pieces);
}

std::pair<Word, Word> aligned_prefixes(const RationalPoint &p, const RationalPoint &q, int variant) {
  if (tail_class(p) != tail_class(q))
    throw Error("WrongTailClass", to_string(p) + " and " + to_string(q) + " lie in different orbits");
  Word alpha = p.pre, beta;
  const Word &pp = p.period, &qp = q.period;
  std::size_t i = 0;
  for (; i < qp.size(); ++i)
    if (qp.substr(i) + qp.substr(0, i) == pp)
      break;
  if (i == qp.size())
    throw internal_error("periods of one tail class are not rotations");
  beta = q.pre + qp.substr(0, i);
  for (int k = 0; k < variant || alpha.empty() || beta.empty(); ++k) {
    alpha += pp;
    beta += pp;
  }
  return {alpha, beta};
}

const PLCircleMap &as_circle(const InstanceElement &g) { return std::get<PLCircleMap>(g); }

} // namespace

Instance Instance::ta() {
  Instance i;
  i.kind_ = InstanceKind::TA;
  return i;
}

Instance Instance::va() { return Instance(); }

Instance Instance::rn(AutomatonRef a) {
  Instance i;
  i.kind_ = InstanceKind::RN;
  i.aut_ = std::move(a);
  return i;
}

Instance Instance::example2(std::vector<Rational> extra) {
  Instance i;
  i.kind_ = InstanceKind::Example2;
  for (auto &t : extra) {
    t -= Rational(floor_q(t));
    if (is_dyadic(t))
      throw Error("DomainError", "extra orbit representative " + to_string(t) + " is dyadic");
    TailClass c = tail_class(rational_to_point(t));
    if (std::find(i.extra_.begin(), i.extra_.end(), c) == i.extra_.end())
      i.extra_.push_back(c);
  }
  std::sort(i.extra_.begin(), i.extra_.end());
  return i;
}

std::string Instance::name() const {
  switch (kind_) {
  case InstanceKind::TA:
    return "ta";
  case InstanceKind::VA:
    return "va";
  case InstanceKind::RN:
    return "rn(" + aut_->label() + ")";
  case InstanceKind::Example2:
    return "example2";
  }
  return "";
}

bool Instance::contains(const InstanceElement &g) const {
  switch (kind_) {
  case InstanceKind::TA:
    return std::holds_alternative<TAElement>(g);
  case InstanceKind::VA:
    return std::holds_alternative<VAElement>(g);
  case InstanceKind::RN:
    return std::holds_alternative<RNElement>(g) &&
           to_string(std::get<RNElement>(g).automaton()) == to_string(*aut_);
  case InstanceKind::Example2:
    return std::holds_alternative<PLCircleMap>(g) && is_example2(as_circle(g), extra_);
  }
  return false;
}

bool Instance::in_base(const InstanceElement &g) const {
  if (!contains(g))
    return false;
  switch (kind_) {
  case InstanceKind::TA:
    return is_in_T(std::get<TAElement>(g));
  case InstanceKind::VA:
    return is_in_V(std::get<VAElement>(g));
  case InstanceKind::RN:
    for (const auto &r : std::get<RNElement>(g).rules())
      if (!r.g.empty())
        return false;
    return true;
  case InstanceKind::Example2:
    return is_in_T(as_circle(g));
  }
  return false;
}

std::vector<RationalPoint> Instance::sing(const InstanceElement &g) const {
  std::vector<RationalPoint> out;
  switch (kind_) {
  case InstanceKind::TA:
    for (const auto &t : germkit::sing(std::get<TAElement>(g)))
      out.push_back(rational_to_point(t));
    break;
  case InstanceKind::VA:
    out = germkit::sing(std::get<VAElement>(g));
    break;
  case InstanceKind::RN:
    out = germkit::sing(std::get<RNElement>(g));
    break;
  case InstanceKind::Example2:
    for (const auto &t : as_circle(g).breakpoints())
      if (!is_dyadic(t))
        out.push_back(rational_to_point(t));
    break;
  }
  return out;
}

RationalPoint Instance::evaluate(const InstanceElement &g, const RationalPoint &x) const {
  switch (kind_) {
  case InstanceKind::TA:
    return rational_to_point(std::get<TAElement>(g).eval(circle_value(x)));
  case InstanceKind::VA:
    return std::get<VAElement>(g).evaluate(x);
  case InstanceKind::RN:
    return std::get<RNElement>(g).evaluate(x);
  case InstanceKind::Example2:
    return rational_to_point(as_circle(g).eval(circle_value(x)));
  }
  return x;
}

InstanceElement Instance::compose(const InstanceElement &f, const InstanceElement &g) const {
  return std::visit(
      [&](const auto &a) -> InstanceElement {
        using T = std::decay_t<decltype(a)>;
        return germkit::compose(a, std::get<T>(g));
      },
      f);
}

InstanceElement Instance::invert(const InstanceElement &g) const {
  return std::visit([](const auto &a) -> InstanceElement { return germkit::invert(a); }, g);
}

InstanceElement Instance::identity() const {
  switch (kind_) {
  case InstanceKind::TA:
    return TAElement();
  case InstanceKind::VA:
    return VAElement::identity();
  case InstanceKind::RN:
    return RNElement::identity(aut_);
  case InstanceKind::Example2:
    return PLCircleMap::identity();
  }
  return VAElement::identity();
}

TailClass Instance::orbit(const RationalPoint &p) const { return tail_class(p); }

InstanceElement Instance::transversal(const RationalPoint &p, const RationalPoint &q,
                                      int variant) const {
  if (p == q)
    return identity();
  switch (kind_) {
  case InstanceKind::TA:
  case InstanceKind::Example2: {
    auto [alpha, beta] = aligned_prefixes(p, q, variant);
    PLCircleMap m = cone_transport(alpha, beta, variant);
    if (kind_ == InstanceKind::TA)
      return TAElement::from_circle(m);
    return m;
  }
  case InstanceKind::VA:
  case InstanceKind::RN: {
    int d = kind_ == InstanceKind::RN ? aut_->d() : 2;
    auto v = transport({p}, {q}, d, 1);
    if (!v)
      throw Error("WrongTailClass", to_string(p) + " and " + to_string(q) + " lie in different orbits");
    if (kind_ == InstanceKind::VA)
      return v->as_va();
    return RNElement::from_v(aut_, *v);
  }
  }
  return identity();
}

int Instance::value_rank(const TailClass &c) const {
  switch (kind_) {
  case InstanceKind::TA:
  case InstanceKind::VA:
    return 0;
  case InstanceKind::RN:
    if (aut_->label() == "grigorchuk")
      return 0;
    throw unsupported("germ abelianization for automaton '" + aut_->label() + "' is not known");
  case InstanceKind::Example2:
    return std::find(extra_.begin(), extra_.end(), c) != extra_.end() ? 1 : 0;
  }
  return 0;
}

Integer Instance::germ_value(const InstanceElement &h, const RationalPoint &p) const {
  if (evaluate(h, p) != p)
    throw not_fixed(to_string(p) + " is not fixed");
  if (value_rank(orbit(p)) == 0)
    return 0;
  auto [l, r] = as_circle(h).slope_exponents_at(circle_value(p));
  return Integer(r - l);
}

Integer sigma_p(const Instance &inst, const InstanceElement &g, const RationalPoint &p,
                int variant) {
  if (!inst.contains(g))
    throw Error("DomainError", "element is not in instance " + inst.name());
  TailClass c = inst.orbit(p);
  if (inst.value_rank(c) == 0)
    return 0;
  Integer total = 0;
  for (const auto &x : inst.sing(g)) {
    if (inst.orbit(x) != c)
      continue;
    RationalPoint y = inst.evaluate(g, x);
    InstanceElement bx = inst.transversal(p, x, variant);
    InstanceElement by = inst.transversal(p, y, variant);
    InstanceElement h = inst.compose(inst.invert(by), inst.compose(g, bx));
    total += inst.germ_value(h, p);
  }
  return total;
}

std::map<TailClass, Integer> sigma(const Instance &inst, const InstanceElement &g, int variant) {
  std::map<TailClass, Integer> out;
  std::set<TailClass> classes;
  for (const auto &x : inst.sing(g))
    classes.insert(inst.orbit(x));
  for (const auto &c : classes) {
    if (inst.value_rank(c) == 0)
      continue;
    RationalPoint rep{0, "", c.period};
    Integer v = sigma_p(inst, g, rep, variant);
    if (v != 0)
      out[c] = v;
  }
  return out;
}

ClassCombination tau_of_moves(const std::vector<std::pair<RationalPoint, RationalPoint>> &moves) {
  ClassCombination out;
  for (const auto &[x, y] : moves) {
    out[tail_class(y)] += 1;
    out[tail_class(x)] -= 1;
  }
  std::erase_if(out, [](const auto &kv) { return kv.second == 0; });
  return out;
}

ClassCombination tau(const Instance &inst, const InstanceElement &g) {
  std::vector<std::pair<RationalPoint, RationalPoint>> moves;
  for (const auto &x : inst.sing(g))
    moves.push_back({x, inst.evaluate(g, x)});
  return tau_of_moves(moves);
}

std::string to_string(const ClassCombination &c) {
  if (c.empty())
    return "0";
  std::string s;
  for (const auto &[cls, n] : c) {
    if (!s.empty())
      s += n < 0 ? " - " : " + ";
    else if (n < 0)
      s += "-";
    long m = std::labs(n);
    if (m != 1)
      s += std::to_string(m) + "*";
    s += "[" + to_string(cls) + "]";
  }
  return s;
}

Portrait portrait(const Instance &inst, const InstanceElement &g) {
  Portrait out;
  switch (inst.kind()) {
  case InstanceKind::TA:
  case InstanceKind::VA: {
    const VAElement &f = inst.kind() == InstanceKind::TA ? std::get<TAElement>(g).cantor()
                                                          : std::get<VAElement>(g);
    for (const auto &gp : portrait(f))
      out.germs[gp.point] = to_string(gp.germ);
    break;
  }
  case InstanceKind::RN: {
    const auto &f = std::get<RNElement>(g);
    for (const auto &x : inst.sing(g))
      out.germs[x] = to_string(local_fixer(f, x).element);
    break;
  }
  case InstanceKind::Example2:
    for (const auto &x : inst.sing(g)) {
      auto [l, r] = as_circle(g).slope_exponents_at(circle_value(x));
      out.germs[x] = "slopes 2^" + std::to_string(l) + "|2^" + std::to_string(r) + " -> " +
                     to_string(inst.evaluate(g, x));
    }
    break;
  }
  return out;
}

bool is_example2(const PLCircleMap &f, const std::vector<TailClass> &extra) {
  for (const auto &t : f.breakpoints())
    if (!in_class(t, extra))
      return false;
  return true;
}

PLCircleMap example2_f0() {
  return PLCircleMap({{0, Rational(2, 3), -1, 0}, {Rational(2, 3), 1, 1, -1}});
}

AbelianGroup smith_invariants(std::vector<std::vector<Integer>> m, std::size_t cols) {
  std::size_t rows = m.size();
  std::vector<Integer> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // pivot: smallest nonzero absolute value in the remaining block
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m[i][j] != 0 && (pr == rows || abs(m[i][j]) < abs(m[pr][pc]))) {
          pr = i;
          pc = j;
        }
    if (pr == rows)
      break;
    std::swap(m[t], m[pr]);
    for (auto &row : m)
      std::swap(row[t], row[pc]);
    bool clean = true;
    for (std::size_t i = t + 1; i < rows; ++i) {
      Integer q = m[i][t] / m[t][t];
      if (q != 0)
        for (std::size_t j = t; j < cols; ++j)
          m[i][j] -= q * m[t][j];
      if (m[i][t] != 0)
        clean = false;
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      Integer q = m[t][j] / m[t][t];
      if (q != 0)
        for (std::size_t i = t; i < rows; ++i)
          m[i][j] -= q * m[i][t];
      if (m[t][j] != 0)
        clean = false;
    }
    if (!clean)
      continue;
    diag.push_back(abs(m[t][t]));
    ++t;
  }
  // normalize to invariant factors
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      Integer g, l;
      mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      mpz_lcm(l.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      diag[i] = g;
      diag[j] = l;
    }
  AbelianGroup out;
  out.free_rank = (long)(cols - diag.size());
  for (const auto &d : diag)
    if (d > 1)
      out.torsion.push_back(d);
  return out;
}

AbelianGroup abelian_quotient(const GermGroupPresentation &pres) {
  std::size_t n = pres.generators.size();
  std::vector<std::vector<Integer>> m;
  for (const auto &rel : pres.relators) {
    std::vector<Integer> row(n, 0);
    for (const auto &[gen, e] : rel)
      row[gen] += e;
    m.push_back(row);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (i < pres.base.size() && pres.base[i]) {
      std::vector<Integer> row(n, 0);
      row[i] = 1;
      m.push_back(row);
    }
  return smith_invariants(m, n);
}

std::string to_string(const AbelianGroup &g) {
  if (g.trivial())
    return "0";
  std::vector<std::string> parts;
  if (g.free_rank == 1)
    parts.push_back("Z");
  else if (g.free_rank > 1)
    parts.push_back("Z^" + std::to_string(g.free_rank));
  for (const auto &t : g.torsion)
    parts.push_back("Z_" + to_string(t));
  std::string s;
  for (const auto &p : parts)
    s += (s.empty() ? "" : " x ") + p;
  return s;
}

GermGroupPresentation parse_presentation(const std::string &src) {
  std::string s = text::trim(src);
  if (s.size() < 2 || s.front() != '<' || s.back() != '>')
    text::fail(src, 0, "expected <generators | relators; base ...>");
  std::string body = s.substr(1, s.size() - 2);
  auto bar = body.find('|');
  std::string gens = body.substr(0, bar);
  std::string rels = bar == std::string::npos ? "" : body.substr(bar + 1);
  std::string base;
  if (auto semi = rels.find(';'); semi != std::string::npos) {
    base = text::trim(rels.substr(semi + 1));
    rels = rels.substr(0, semi);
    if (base.rfind("base", 0) != 0)
      text::fail(src, 0, "expected 'base' after ';'");
    base = base.substr(4);
  }
  GermGroupPresentation p;
  auto split = [](const std::string &x, const std::string &seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : x) {
      if (seps.find(c) != std::string::npos) {
        if (!text::trim(cur).empty())
          out.push_back(text::trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!text::trim(cur).empty())
      out.push_back(text::trim(cur));
    return out;
  };
  p.generators = split(gens, ",");
  auto index = [&](const std::string &name) -> int {
    for (std::size_t i = 0; i < p.generators.size(); ++i)
      if (p.generators[i] == name)
        return (int)i;
    text::fail(src, 0, "unknown generator '" + name + "'");
  };
  static const std::regex factor(R"(^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?[0-9]+))?$)");
  for (const auto &r : split(rels, ",")) {
    GroupWord w;
    if (r != "1") {
      for (const auto &f : split(r, "*")) {
        std::smatch m;
        if (!std::regex_match(f, m, factor))
          text::fail(src, 0, "bad factor '" + f + "'");
        w.push_back({index(m[1]), m[2].matched ? Integer(m[2].str()) : Integer(1)});
      }
    }
    p.relators.push_back(w);
  }
  p.base.assign(p.generators.size(), false);
  for (const auto &b : split(base, ", "))
    p.base[index(b)] = true;
  return p;
}

std::string to_string(const GermGroupPresentation &p) {
  std::string s = "<";
  for (std::size_t i = 0; i < p.generators.size(); ++i)
    s += (i ? "," : "") + p.generators[i];
  s += " |";
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    s += i ? ", " : " ";
    if (p.relators[i].empty())
      s += "1";
    for (std::size_t j = 0; j < p.relators[i].size(); ++j) {
      const auto &[g, e] = p.relators[i][j];
      s += (j ? "*" : "") + p.generators[g];
      if (e != 1)
        s += "^" + to_string(e);
    }
  }
  std::string base;
  for (std::size_t i = 0; i < p.generators.size(); ++i)
    if (p.base[i])
      base += (base.empty() ? "" : ",") + p.generators[i];
  if (!base.empty())
    s += "; base " + base;
  return s + ">";
}

GermGroupPresentation roever_germ_presentation() {
  return parse_presentation("<b,c,d,t | b^2, c^2, d^2, b*c*d, t*b*t^-1*d^-1, t*d*t^-1*c^-1, "
                            "t*c*t^-1*b^-1; base t>");
}

} // namespace germkit
