#include "germkit/cantor.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "germkit/text.hpp"

namespace germkit {

namespace {

Word tees(int t, std::size_t n) { return Word(n, char(t)); }

struct AnnulusPos {
  std::size_t j = 0;
  Word rest;
};

// w = base t^j rest, rest empty or starting with a letter other than t
std::optional<AnnulusPos> annulus_pos(const RootedWord &w, const RootedWord &base, int t) {
  if (!base.is_prefix_of(w))
    return std::nullopt;
  std::size_t i = base.size();
  while (i < w.size() && (unsigned char)w.letters[i] == t)
    ++i;
  return AnnulusPos{i - base.size(), w.letters.substr(i)};
}

struct DecodedRule {
  std::size_t j = 0;
  Word rest;
  std::size_t e = 0;
  Word img;
};

struct Decoded {
  RootedWord base, qbase;
  int t = 0;
  std::vector<DecodedRule> rules;
  std::size_t J = 0, E = 0;

  RootedWord domain(const DecodedRule &r, std::size_t m) const {
    return {base.root, base.letters + tees(t, r.j + m) + r.rest};
  }
  RootedWord image(const DecodedRule &r, std::size_t m) const {
    return {qbase.root, qbase.letters + tees(t, r.e + m) + r.img};
  }
};

// nullopt with a reason when a rule does not sit in the right cone
std::optional<Decoded> try_decode(const SpiralRule &s, std::string *why = nullptr) {
  Decoded d;
  d.base = spiral_base(s.p);
  d.qbase = spiral_base(s.q);
  d.t = tail_letter(s.p);
  for (const auto &r : s.rules) {
    auto a = annulus_pos(r.from, d.base, d.t);
    auto b = annulus_pos(r.to, d.qbase, d.t);
    if (!a || a->rest.empty()) {
      if (why)
        *why = "domain";
      return std::nullopt;
    }
    if (!b || b->rest.empty()) {
      if (why)
        *why = "image";
      return std::nullopt;
    }
    d.rules.push_back({a->j, a->rest, b->j, b->rest});
    d.J = std::max(d.J, a->j);
    d.E = std::max(d.E, b->j);
  }
  return d;
}

Decoded decode(const SpiralRule &s) {
  auto d = try_decode(s);
  if (!d)
    throw invalid("spiral rule outside the cone of its point " + to_string(s.p));
  return *d;
}

// finite cone description of the spiral region (domain side or image side)
std::vector<RootedWord> region_cones(const Decoded &d, bool image) {
  std::vector<RootedWord> out;
  const RootedWord &b = image ? d.qbase : d.base;
  std::size_t top = image ? d.E : d.J;
  for (const auto &r : d.rules) {
    std::size_t lo = image ? r.e : r.j;
    for (std::size_t m = lo; m < top; ++m)
      out.push_back({b.root, b.letters + tees(d.t, m) + (image ? r.img : r.rest)});
  }
  out.push_back({b.root, b.letters + tees(d.t, top)});
  return out;
}

std::string rw(const RootedWord &w, int r) { return to_string(w, r); }

} // namespace

// ---------------------------------------------------------------- cones

std::vector<RootedWord> cone_complement(const std::vector<RootedWord> &cones, int d, int r) {
  std::set<RootedWord> s(cones.begin(), cones.end());
  std::vector<RootedWord> out;
  std::vector<RootedWord> stack;
  for (int root = r - 1; root >= 0; --root)
    stack.push_back({root, ""});
  while (!stack.empty()) {
    RootedWord w = stack.back();
    stack.pop_back();
    if (s.count(w))
      continue;
    auto it = s.lower_bound(w);
    if (it != s.end() && w.is_prefix_of(*it)) {
      for (int x = d - 1; x >= 0; --x)
        stack.push_back(w.child(x));
    } else {
      out.push_back(w);
    }
  }
  return out;
}

bool cones_disjoint(std::vector<RootedWord> cones) {
  std::sort(cones.begin(), cones.end());
  for (std::size_t i = 0; i + 1 < cones.size(); ++i)
    if (cones[i].is_prefix_of(cones[i + 1]))
      return false;
  return true;
}

bool cones_partition_space(std::vector<RootedWord> cones, int d, int r, std::string *why) {
  if (!cones_disjoint(cones)) {
    if (why)
      *why = "cones overlap";
    return false;
  }
  auto rest = cone_complement(cones, d, r);
  if (!rest.empty()) {
    if (why)
      *why = "cone " + to_string(rest.front(), r) + " is not covered";
    return false;
  }
  return true;
}

std::vector<RootedWord> normalize_cones(std::vector<RootedWord> cones, int d) {
  std::sort(cones.begin(), cones.end());
  std::vector<RootedWord> kept;
  for (const auto &c : cones)
    if (kept.empty() || !kept.back().is_prefix_of(c))
      kept.push_back(c);
  std::set<RootedWord> s(kept.begin(), kept.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &w : s) {
      if (w.letters.empty())
        continue;
      RootedWord parent{w.root, w.letters.substr(0, w.size() - 1)};
      bool all = true;
      for (int x = 0; x < d && all; ++x)
        all = s.count(parent.child(x)) > 0;
      if (all) {
        for (int x = 0; x < d; ++x)
          s.erase(parent.child(x));
        s.insert(parent);
        changed = true;
        break;
      }
    }
  }
  return {s.begin(), s.end()};
}

RootedWord spiral_base(const RationalPoint &p) { return {p.root, p.pre}; }

int tail_letter(const RationalPoint &p) { return (unsigned char)p.period[0]; }

bool spiral_eligible(const RationalPoint &p, int d) {
  if (p.period.size() != 1)
    return false;
  int t = tail_letter(p);
  return t == 0 || t == d - 1;
}

// ---------------------------------------------------------------- VAElement

VAElement::VAElement(int d, int r, std::vector<PlainRule> plain, std::vector<SpiralRule> spirals)
    : d_(d), r_(r), plain_(std::move(plain)), spirals_(std::move(spirals)) {
  if (d < 2 || r < 1)
    throw invalid("need d >= 2 and r >= 1");
  auto check = [&](const RootedWord &w) {
    if (w.root < 0 || w.root >= r_)
      throw invalid("root out of range");
    for (char c : w.letters)
      if ((unsigned char)c >= d_)
        throw invalid("letter out of range");
  };
  for (const auto &p : plain_) {
    check(p.from);
    check(p.to);
  }
  for (const auto &s : spirals_) {
    if (!spiral_eligible(s.p, d_) || !spiral_eligible(s.q, d_))
      throw invalid("spiral point must end in 0 or " + std::to_string(d_ - 1) + " repeated");
    for (const auto &p : s.rules) {
      check(p.from);
      check(p.to);
    }
  }
}

VAElement VAElement::identity(int d, int r) {
  std::vector<PlainRule> rules;
  for (int i = 0; i < r; ++i)
    rules.push_back({{i, ""}, {i, ""}});
  return VAElement(d, r, rules, {});
}

RationalPoint VAElement::evaluate(const RationalPoint &x) const {
  for (const auto &p : plain_)
    if (x.in_cone(p.from))
      return apply_prefix_replacement(x, p.from, p.to, d_);
  for (const auto &s : spirals_) {
    if (x == s.p)
      return s.q;
    RootedWord base = spiral_base(s.p);
    if (!x.in_cone(base))
      continue;
    int t = tail_letter(s.p);
    std::size_t i = base.size();
    std::size_t bound = base.size() + x.pre.size() + x.period.size() + 1;
    while (x.letter(i) == t && i < bound)
      ++i;
    if (i >= bound)
      continue;
    std::size_t j = i - base.size();
    Decoded dec = decode(s);
    for (const auto &r : dec.rules) {
      if (j < r.j)
        continue;
      bool match = true;
      for (std::size_t k = 0; k < r.rest.size() && match; ++k)
        match = x.letter(i + k) == (unsigned char)r.rest[k];
      if (!match)
        continue;
      RootedWord img = dec.image(r, j - r.j);
      return canonicalize_point(x.drop(i + r.rest.size()).prepend(img), d_);
    }
  }
  throw invalid("point " + to_string(x) + " is not covered by any rule");
}

namespace {

struct ConeWalker {
  const VAElement &f;
  std::vector<Decoded> dec;
  std::size_t limit = 0;

  explicit ConeWalker(const VAElement &g) : f(g) {
    for (const auto &p : f.plain())
      limit = std::max(limit, p.from.size());
    for (const auto &s : f.spirals()) {
      dec.push_back(decode(s));
      std::size_t mr = 0;
      for (const auto &r : dec.back().rules)
        mr = std::max(mr, r.rest.size());
      limit = std::max(limit, dec.back().base.size() + dec.back().J + mr);
    }
  }

  void walk(const RootedWord &w, std::vector<PlainRule> &out, std::size_t depth = 0) const {
    for (const auto &p : f.plain()) {
      if (p.from.is_prefix_of(w)) {
        out.push_back({w, p.to.extend(w.letters.substr(p.from.size()))});
        return;
      }
    }
    for (const auto &d : dec) {
      auto pos = annulus_pos(w, d.base, d.t);
      if (!pos || pos->rest.empty())
        continue;
      for (const auto &r : d.rules) {
        if (pos->j >= r.j && is_prefix(r.rest, pos->rest)) {
          RootedWord img = d.image(r, pos->j - r.j);
          out.push_back({w, img.extend(pos->rest.substr(r.rest.size()))});
          return;
        }
      }
    }
    if (depth > limit)
      throw invalid("cone " + to_string(w, f.r()) + " is not covered by any rule");
    for (int x = 0; x < f.d(); ++x)
      walk(w.child(x), out, depth + 1);
  }
};

} // namespace

std::vector<PlainRule> VAElement::on_cone(const RootedWord &w) const {
  for (const auto &s : spirals_)
    if (s.p.in_cone(w))
      throw Error("DomainError", "cone " + to_string(w, r_) + " contains singular point " +
                                     to_string(s.p));
  std::vector<PlainRule> out;
  ConeWalker(*this).walk(w, out);
  return out;
}

bool VAElement::is_identity() const {
  VAElement c = canonicalize(*this);
  if (!c.spirals_.empty())
    return false;
  for (const auto &p : c.plain_)
    if (p.from != p.to)
      return false;
  return true;
}

bool VAElement::operator==(const VAElement &o) const {
  if (d_ != o.d_ || r_ != o.r_)
    return false;
  VAElement a = canonicalize(*this), b = canonicalize(o);
  return a.plain_ == b.plain_ && a.spirals_ == b.spirals_;
}

// ---------------------------------------------------------------- validation

bool ValidationReport::failed(const std::string &check) const {
  for (const auto &f : failures)
    if (f.rfind(check + ":", 0) == 0)
      return true;
  return false;
}

ValidationReport validate(const VAElement &f) {
  ValidationReport rep;
  auto fail = [&](const std::string &check, const std::string &detail) {
    rep.failures.push_back(check + ": " + detail);
  };
  int d = f.d(), r = f.r();
  std::vector<RootedWord> dom, img;
  for (const auto &p : f.plain()) {
    dom.push_back(p.from);
    img.push_back(p.to);
  }
  bool structural = true;
  for (const auto &s : f.spirals()) {
    std::string where = "spiral at " + to_string(s.p);
    if (canonicalize_point(s.p, d) != s.p || canonicalize_point(s.q, d) != s.q)
      fail("tail", where + ": points must be given canonically");
    if (tail_letter(s.p) != tail_letter(s.q))
      fail("tail", where + ": tail letter of " + to_string(s.p) + " differs from " +
                       to_string(s.q));
    std::string why;
    auto dec = try_decode(s, &why);
    if (!dec) {
      structural = false;
      if (why == "domain")
        fail("fundamental-domain", where + ": rule domain outside the cone of the point");
      else
        fail("conjugacy", where + ": rule image outside the cone of " + to_string(s.q));
      continue;
    }
    std::vector<RootedWord> nd{{0, Word(1, char(dec->t))}}, ni{{0, Word(1, char(dec->t))}};
    for (const auto &ru : dec->rules) {
      nd.push_back({0, ru.rest});
      ni.push_back({0, ru.img});
    }
    std::string w1, w2;
    if (!cones_partition_space(nd, d, 1, &w1)) {
      structural = false;
      fail("fundamental-domain", where + ": domains do not form an L_p fundamental domain (" +
                                     w1 + ")");
    }
    if (!cones_partition_space(ni, d, 1, &w2)) {
      structural = false;
      fail("conjugacy", where + ": images do not form an L_q fundamental domain (" + w2 +
                            "), so L_q f = f L_p cannot hold");
    }
    auto rd = region_cones(*dec, false), ri = region_cones(*dec, true);
    dom.insert(dom.end(), rd.begin(), rd.end());
    img.insert(img.end(), ri.begin(), ri.end());
    // order: translates at enough levels to see every relative position
    std::vector<std::pair<RootedWord, RootedWord>> pairs;
    std::size_t levels = dec->J + dec->E + 3;
    for (const auto &ru : dec->rules)
      for (std::size_t m = 0; m < levels; ++m)
        pairs.push_back({dec->domain(ru, m), dec->image(ru, m)});
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
      if (!(pairs[i].second < pairs[i + 1].second)) {
        fail("order", where + ": " + rw(pairs[i].first, r) + " < " + rw(pairs[i + 1].first, r) +
                          " but images are not in order");
        break;
      }
    }
  }
  std::string why;
  if (!cones_partition_space(dom, d, r, &why))
    fail("partition", "domains: " + why);
  if (!cones_partition_space(img, d, r, &why))
    fail("partition", "images: " + why);
  if (structural && rep.ok() && !conjugacy_identity_holds(f))
    fail("conjugacy", "L_{f(p)} f != f L_p at a sample point");
  return rep;
}

bool conjugacy_identity_holds(const VAElement &f, int depths) {
  for (const auto &s : f.spirals()) {
    Decoded dec = decode(s);
    int t = dec.t, other = t == 0 ? 1 : 0;
    RationalPoint tail{0, "", Word(1, char(other))};
    for (const auto &ru : dec.rules) {
      for (int m = 1; m <= depths + 1; ++m) {
        RootedWord w = dec.domain(ru, (std::size_t)m);
        RationalPoint x = canonicalize_point(tail.prepend(w), f.d());
        RationalPoint lx = canonicalize_point(x.drop(dec.base.size() + 1).prepend(dec.base),
                                              f.d());
        RationalPoint fx = f.evaluate(x);
        if (!fx.in_cone({dec.qbase.root, dec.qbase.letters + Word(1, char(t))}))
          return false;
        RationalPoint lfx =
            canonicalize_point(fx.drop(dec.qbase.size() + 1).prepend(dec.qbase), f.d());
        if (f.evaluate(lx) != lfx)
          return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------- canonical form

namespace {

// spiral stored at a single level K: domain base t^K rest -> qbase t^e img
struct Std {
  RationalPoint p, q;
  RootedWord base, qbase;
  int t = 0;
  std::size_t K = 0;
  std::vector<DecodedRule> rules; // j == K for all

  SpiralRule to_rule() const {
    SpiralRule s{p, q, {}};
    for (const auto &r : rules)
      s.rules.push_back({{base.root, base.letters + tees(t, K) + r.rest},
                         {qbase.root, qbase.letters + tees(t, r.e) + r.img}});
    std::sort(s.rules.begin(), s.rules.end());
    return s;
  }
};

using PlainMap = std::map<RootedWord, RootedWord>;

void merge_plain(PlainMap &m, int d) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &[from, to] : m) {
      if (from.letters.empty() || to.letters.empty() || from.letters.back() != to.letters.back())
        continue;
      RootedWord pf{from.root, from.letters.substr(0, from.size() - 1)};
      RootedWord pt{to.root, to.letters.substr(0, to.size() - 1)};
      bool all = true;
      for (int x = 0; x < d && all; ++x) {
        auto it = m.find(pf.child(x));
        all = it != m.end() && it->second == pt.child(x);
      }
      if (!all)
        continue;
      for (int x = 0; x < d; ++x)
        m.erase(pf.child(x));
      m[pf] = pt;
      changed = true;
      break;
    }
  }
}

void merge_annulus(Std &s, int d) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < s.rules.size() && !changed; ++i) {
      const auto &r = s.rules[i];
      if (r.rest.size() < 2 || r.img.size() < 2 || r.rest.back() != r.img.back())
        continue;
      Word pr = r.rest.substr(0, r.rest.size() - 1), pi = r.img.substr(0, r.img.size() - 1);
      std::vector<std::size_t> idx;
      for (int x = 0; x < d; ++x) {
        for (std::size_t k = 0; k < s.rules.size(); ++k) {
          const auto &o = s.rules[k];
          if (o.rest == pr + char(x) && o.img == pi + char(x) && o.e == r.e) {
            idx.push_back(k);
            break;
          }
        }
      }
      if ((int)idx.size() != d)
        continue;
      std::size_t e = r.e;
      std::sort(idx.rbegin(), idx.rend());
      for (auto k : idx)
        s.rules.erase(s.rules.begin() + (long)k);
      s.rules.push_back({s.K, pr, e, pi});
      changed = true;
    }
  }
}

VAElement assemble(int d, int r, const PlainMap &plain, const std::vector<Std> &sp) {
  std::vector<PlainRule> pr;
  for (const auto &[a, b] : plain)
    pr.push_back({a, b});
  std::vector<SpiralRule> sr;
  for (const auto &s : sp)
    sr.push_back(s.to_rule());
  std::sort(sr.begin(), sr.end(),
            [](const SpiralRule &a, const SpiralRule &b) { return a.p < b.p; });
  return VAElement(d, r, pr, sr);
}

bool is_v_germ(const Std &s) {
  for (const auto &r : s.rules)
    if (r.e != s.rules.front().e || r.img != r.rest)
      return false;
  return true;
}

bool can_lower(const VAElement &cur, const Std &s) {
  if (s.K == 0)
    return false;
  for (const auto &r : s.rules)
    if (r.e == 0)
      return false;
  for (const auto &r : s.rules) {
    RootedWord c{s.base.root, s.base.letters + tees(s.t, s.K - 1) + r.rest};
    RootedWord want{s.qbase.root, s.qbase.letters + tees(s.t, r.e - 1) + r.img};
    std::vector<PlainRule> got;
    try {
      got = cur.on_cone(c);
    } catch (const Error &) {
      return false;
    }
    for (const auto &g : got)
      if (g.to != want.extend(g.from.letters.substr(c.size())))
        return false;
  }
  return true;
}

} // namespace

VAElement canonicalize(const VAElement &f) {
  int d = f.d(), r = f.r();
  PlainMap plain;
  for (const auto &p : f.plain())
    plain[p.from] = p.to;
  std::vector<Std> sp;
  for (const auto &s : f.spirals()) {
    Decoded dec = decode(s);
    Std st{s.p, s.q, dec.base, dec.qbase, dec.t, dec.J, {}};
    for (const auto &ru : dec.rules) {
      for (std::size_t j = ru.j; j < dec.J; ++j)
        plain[dec.domain(ru, j - ru.j)] = dec.image(ru, j - ru.j);
      st.rules.push_back({dec.J, ru.rest, ru.e + dec.J - ru.j, ru.img});
    }
    sp.push_back(st);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    merge_plain(plain, d);
    for (std::size_t i = 0; i < sp.size(); ++i) {
      Std &s = sp[i];
      if (is_v_germ(s)) {
        plain[{s.base.root, s.base.letters + tees(s.t, s.K)}] = {
            s.qbase.root, s.qbase.letters + tees(s.t, s.rules.front().e)};
        sp.erase(sp.begin() + (long)i);
        changed = true;
        break;
      }
      if (can_lower(assemble(d, r, plain, sp), s)) {
        RootedWord c{s.base.root, s.base.letters + tees(s.t, s.K - 1)};
        for (auto it = plain.begin(); it != plain.end();)
          it = c.is_prefix_of(it->first) ? plain.erase(it) : std::next(it);
        s.K -= 1;
        for (auto &ru : s.rules) {
          ru.j = s.K;
          ru.e -= 1;
        }
        changed = true;
        break;
      }
    }
  }
  for (auto &s : sp)
    merge_annulus(s, d);
  return assemble(d, r, plain, sp);
}

VAElement invert(const VAElement &f) {
  std::vector<PlainRule> plain;
  for (const auto &p : f.plain())
    plain.push_back({p.to, p.from});
  std::vector<SpiralRule> sp;
  for (const auto &s : f.spirals()) {
    SpiralRule t{s.q, s.p, {}};
    for (const auto &p : s.rules)
      t.rules.push_back({p.to, p.from});
    sp.push_back(t);
  }
  return canonicalize(VAElement(f.d(), f.r(), plain, sp));
}

// ---------------------------------------------------------------- composition

std::size_t equivariance_level(const VAElement &f, const RationalPoint &s) {
  for (const auto &sp : f.spirals())
    if (sp.p == s)
      return decode(sp).J;
  RootedWord base = spiral_base(s);
  int t = tail_letter(s);
  RationalPoint fs = f.evaluate(s);
  RootedWord qb = spiral_base(fs);
  for (std::size_t k = 0; k < 4096; ++k) {
    RootedWord c{base.root, base.letters + tees(t, k)};
    bool blocked = false;
    for (const auto &sp : f.spirals())
      blocked = blocked || sp.p.in_cone(c);
    if (blocked)
      continue;
    auto pieces = f.on_cone(c);
    if (pieces.size() == 1 && qb.is_prefix_of(pieces[0].to))
      return k;
  }
  throw internal_error("no equivariance level found at " + to_string(s));
}

namespace {

std::vector<PlainRule> compose_on_cone(const VAElement &f, const VAElement &g,
                                       const RootedWord &w) {
  std::vector<PlainRule> out;
  for (const auto &gp : g.on_cone(w))
    for (const auto &fp : f.on_cone(gp.to))
      out.push_back({gp.from.extend(fp.from.letters.substr(gp.to.size())), fp.to});
  return out;
}

} // namespace

VAElement compose(const VAElement &f, const VAElement &g) {
  if (f.d() != g.d() || f.r() != g.r())
    throw Error("DomainError", "alphabet mismatch in composition");
  int d = f.d(), r = f.r();
  std::set<RationalPoint> cand;
  for (const auto &s : g.spirals())
    cand.insert(s.p);
  if (!f.spirals().empty()) {
    VAElement gi = invert(g);
    for (const auto &s : f.spirals())
      cand.insert(gi.evaluate(s.p));
  }
  std::vector<RootedWord> nbhd;
  std::vector<SpiralRule> spirals;
  for (const auto &s : cand) {
    RootedWord base = spiral_base(s);
    int t = tail_letter(s);
    std::size_t kg = equivariance_level(g, s);
    RationalPoint gs = g.evaluate(s);
    std::size_t kf = equivariance_level(f, gs);
    std::size_t k = kg + kf;
    auto cone = [&](std::size_t k) { return RootedWord{base.root, base.letters + tees(t, k)}; };
    for (;;) {
      bool clash = false;
      for (const auto &o : cand)
        clash = clash || (o != s && o.in_cone(cone(k)));
      if (!clash)
        break;
      ++k;
    }
    nbhd.push_back(cone(k));
    SpiralRule sr{s, f.evaluate(gs), {}};
    for (int x = 0; x < d; ++x) {
      if (x == t)
        continue;
      auto ps = compose_on_cone(f, g, cone(k).child(x));
      sr.rules.insert(sr.rules.end(), ps.begin(), ps.end());
    }
    spirals.push_back(sr);
  }
  std::vector<PlainRule> plain;
  for (const auto &w : cone_complement(nbhd, d, r)) {
    auto ps = compose_on_cone(f, g, w);
    plain.insert(plain.end(), ps.begin(), ps.end());
  }
  VAElement raw(d, r, plain, spirals);
  for (const auto &s : spirals)
    if (!try_decode(s))
      throw Error("CanonicalizationFailure",
                  "re-derived spiral at " + to_string(s.p) + " leaves its cone");
  return canonicalize(raw);
}

std::vector<RationalPoint> sing(const VAElement &f) {
  std::vector<RationalPoint> out;
  VAElement c = canonicalize(f);
  for (const auto &s : c.spirals())
    out.push_back(s.p);
  return out;
}

bool is_in_V(const VAElement &f) { return canonicalize(f).spirals().empty(); }

// ---------------------------------------------------------------- log coordinates

namespace {

// u-interval [lo, hi] of the cone base t^j rest, rest starting with the letter other than t
std::pair<Rational, Rational> log_interval(std::size_t j, const Word &rest, int t) {
  Word w = rest.substr(1);
  if (t == 1)
    for (char &c : w)
      c = char(1 - c);
  Rational top = Rational((long)j + 1) - cone_left(w);
  return {top - pow2(-(long)w.size()), top};
}

// inverse of log_interval for an aligned dyadic interval [a, a + 2^-l], l >= 0
std::pair<std::size_t, Word> cone_of_interval(const Rational &a, long l, int t) {
  Integer j = floor_q(a);
  Rational top = a + pow2(-l);
  Rational v = (Rational(j + 1) - top) * pow2(l);
  Integer m = v.get_num();
  Word w(l, 0);
  for (long i = l - 1; i >= 0; --i) {
    w[i] = char(mpz_tstbit(m.get_mpz_t(), (mp_bitcnt_t)(l - 1 - i)));
  }
  if (t == 1)
    for (char &c : w)
      c = char(1 - c);
  Word rest = Word(1, char(1 - t)) + w;
  return {(std::size_t)j.get_si(), rest};
}

std::optional<long> aligned_level(const Rational &a, const Rational &b) {
  Rational len = b - a;
  if (len > 1 || mpz_popcount(len.get_num_mpz_t()) != 1 || !is_dyadic(len))
    return std::nullopt;
  long l = -val2(len);
  Rational q = a / len;
  if (q.get_den() != 1)
    return std::nullopt;
  return l;
}

bool affine_on(const TbarElement &F, const Rational &a, const Rational &b) {
  Integer j = floor_q(a);
  Rational lo = a - Rational(j), hi = b - Rational(j);
  for (const auto &p : F.pieces())
    if (lo < p.lo && p.lo < hi)
      return false;
  return true;
}

void split_log(const TbarElement &F, const Rational &a, const Rational &b,
               std::vector<std::pair<std::pair<Rational, Rational>, std::pair<Rational, Rational>>>
                   &out) {
  Rational c = F.eval(a), e = F.eval(b);
  if (affine_on(F, a, b) && aligned_level(a, b) && aligned_level(c, e)) {
    out.push_back({{a, b}, {c, e}});
    return;
  }
  Rational m = (a + b) / 2;
  split_log(F, a, m, out);
  split_log(F, m, b, out);
}

SpiralRule spiral_at_level(const RationalPoint &p, const RationalPoint &q, const TbarElement &F,
                           std::size_t k) {
  int t = tail_letter(p);
  RootedWord base = spiral_base(p), qbase = spiral_base(q);
  std::vector<std::pair<std::pair<Rational, Rational>, std::pair<Rational, Rational>>> parts;
  split_log(F, Rational((long)k), Rational((long)k + 1), parts);
  SpiralRule s{p, q, {}};
  for (const auto &[dom, img] : parts) {
    auto [j, rest] = cone_of_interval(dom.first, *aligned_level(dom.first, dom.second), t);
    auto [e, ri] = cone_of_interval(img.first, *aligned_level(img.first, img.second), t);
    s.rules.push_back({{base.root, base.letters + tees(t, j) + rest},
                       {qbase.root, qbase.letters + tees(t, e) + ri}});
  }
  return s;
}

void require_binary_spiral(const RationalPoint &p, int d) {
  if (d != 2)
    throw Error("DomainError", "log coordinates need d = 2");
  if (!spiral_eligible(p, d))
    throw Error("WrongTailClass", to_string(p) + " does not end in 0 or 1 repeated");
}

} // namespace

TbarElement germ_tbar(const VAElement &f, const RationalPoint &p) {
  require_binary_spiral(p, f.d());
  if (f.evaluate(p) != p)
    throw not_fixed(to_string(p) + " is not fixed");
  VAElement g = canonicalize(f);
  for (const auto &s : g.spirals()) {
    if (s.p != p)
      continue;
    Decoded dec = decode(s);
    Rational K((long)dec.J);
    std::vector<AffinePiece> pieces;
    for (const auto &ru : dec.rules) {
      auto [a, b] = log_interval(ru.j, ru.rest, dec.t);
      auto [c, e] = log_interval(ru.e, ru.img, dec.t);
      pieces.push_back(affine_from_intervals(a - K, b - K, c - K, e - K));
    }
    return TbarElement(pieces);
  }
  std::size_t k = equivariance_level(g, p);
  RootedWord base = spiral_base(p);
  auto pieces = g.on_cone({base.root, base.letters + tees(tail_letter(p), k)});
  long kk = (long)pieces[0].to.size() - (long)base.size();
  return TbarElement::translation(kk - (long)k);
}

SpiralRule spiral_from_tbar(const RationalPoint &p, const RationalPoint &q, const TbarElement &F) {
  require_binary_spiral(p, 2);
  require_binary_spiral(q, 2);
  if (tail_letter(p) != tail_letter(q))
    throw Error("WrongTailClass", "tail letters of " + to_string(p) + " and " + to_string(q) +
                                      " differ");
  Rational f0 = F.eval(0);
  Integer k = f0 < 0 ? -floor_q(f0) : Integer(0);
  return spiral_at_level(p, q, F, k.get_ui());
}

std::optional<std::vector<PlainRule>> pair_cones(std::vector<RootedWord> a,
                                                 std::vector<RootedWord> b, int d) {
  while (a.size() != b.size()) {
    auto &s = a.size() < b.size() ? a : b;
    if (s.empty())
      return std::nullopt;
    auto it = std::min_element(s.begin(), s.end(), [](const RootedWord &x, const RootedWord &y) {
      return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    RootedWord w = *it;
    s.erase(it);
    for (int x = 0; x < d; ++x)
      s.push_back(w.child(x));
    if (a.size() > b.size() + 100000 || b.size() > a.size() + 100000)
      return std::nullopt;
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<PlainRule> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    out.push_back({a[i], b[i]});
  return out;
}

namespace {

std::vector<RootedWord> concat(std::vector<RootedWord> a, const std::vector<RootedWord> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

} // namespace

VAElement elementary_from_tbar(const RationalPoint &p, const TbarElement &F,
                               const std::vector<RationalPoint> &avoid) {
  require_binary_spiral(p, 2);
  RootedWord base = spiral_base(p);
  int t = tail_letter(p);
  auto cone = [&](std::size_t k) { return RootedWord{base.root, base.letters + tees(t, k)}; };
  std::size_t L = 0;
  for (;; ++L) {
    bool hit = false;
    for (const auto &a : avoid) {
      if (a == p)
        throw Error("DomainError", "avoided point coincides with " + to_string(p));
      hit = hit || a.in_cone(cone(L));
    }
    if (!hit)
      break;
  }
  Rational f0 = F.eval(0);
  Integer need = floor_q(Rational((long)L + 1) - f0);
  if (Rational(need) < Rational((long)L + 1) - f0)
    need += 1;
  std::size_t k = std::max<std::size_t>(L + 1, need > 0 ? need.get_ui() : 0);
  SpiralRule s = spiral_at_level(p, p, F, k);
  Decoded dec = decode(s);
  auto outside = cone_complement({cone(L)}, 2, 1);
  std::vector<PlainRule> plain;
  for (const auto &w : outside)
    plain.push_back({w, w});
  auto dl = cone_complement(concat(region_cones(dec, false), outside), 2, 1);
  auto il = cone_complement(concat(region_cones(dec, true), outside), 2, 1);
  auto paired = pair_cones(dl, il, 2);
  if (!paired)
    throw internal_error("could not complete elementary element at " + to_string(p));
  plain.insert(plain.end(), paired->begin(), paired->end());
  return canonicalize(VAElement(2, 1, plain, {s}));
}

std::optional<VElement> transport(const std::vector<RationalPoint> &xs,
                                  const std::vector<RationalPoint> &ys, int d, int r,
                                  int max_depth) {
  if (xs.size() != ys.size())
    throw Error("DomainError", "transport needs equally many source and target points");
  std::size_t n = xs.size();
  std::vector<std::size_t> rot(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (tail_class(xs[i]) != tail_class(ys[i]))
      return std::nullopt;
    for (std::size_t j = i + 1; j < n; ++j)
      if (xs[i] == xs[j] || ys[i] == ys[j])
        throw Error("DomainError", "transport points must be distinct");
    const Word &px = xs[i].period, &py = ys[i].period;
    std::size_t L = px.size();
    rot[i] = L;
    for (std::size_t k = 0; k < L; ++k)
      if (px.substr(k) + px.substr(0, k) == py)
        rot[i] = k;
    if (rot[i] == L)
      return std::nullopt;
  }
  for (int c = 0; c <= max_depth; ++c) {
    std::vector<RootedWord> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t L = xs[i].period.size();
      a.push_back({xs[i].root, xs[i].unroll(xs[i].pre.size() + rot[i] + c * L)});
      b.push_back({ys[i].root, ys[i].unroll(ys[i].pre.size() + c * L)});
    }
    if (!cones_disjoint(a) || !cones_disjoint(b))
      continue;
    auto ca = cone_complement(a, d, r), cb = cone_complement(b, d, r);
    std::vector<PlainRule> rules;
    for (std::size_t i = 0; i < n; ++i)
      rules.push_back({a[i], b[i]});
    if (ca.empty() != cb.empty())
      continue;
    auto rest = pair_cones(ca, cb, d);
    if (!rest)
      continue;
    rules.insert(rules.end(), rest->begin(), rest->end());
    return VElement(d, r, rules);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- V

VElement::VElement(int d, int r, std::vector<PlainRule> rules) {
  std::vector<RootedWord> a, b;
  for (const auto &p : rules) {
    a.push_back(p.from);
    b.push_back(p.to);
  }
  std::string why;
  if (!cones_partition_space(a, d, r, &why))
    throw invalid("domains do not partition the space: " + why);
  if (!cones_partition_space(b, d, r, &why))
    throw invalid("images do not partition the space: " + why);
  va_ = canonicalize(VAElement(d, r, rules, {}));
}

VElement VElement::from_va(const VAElement &f) {
  VAElement c = canonicalize(f);
  if (!c.spirals().empty())
    throw invalid("element has singular points and is not in V");
  VElement v;
  v.va_ = c;
  return v;
}

VElement compose(const VElement &f, const VElement &g) {
  return VElement::from_va(compose(f.as_va(), g.as_va()));
}

VElement invert(const VElement &f) { return VElement::from_va(invert(f.as_va())); }

VElement power(const VElement &f, long n) {
  VElement base = n < 0 ? invert(f) : f;
  VElement acc = VElement::identity(f.d(), f.r());
  for (long i = 0; i < std::labs(n); ++i)
    acc = compose(acc, base);
  return acc;
}

long germ_exponent(const VElement &g, const RationalPoint &p) {
  if (g.evaluate(p) != p)
    throw not_fixed(to_string(p) + " is not fixed");
  std::size_t n = p.pre.size() + p.period.size();
  for (;; n += p.period.size()) {
    RootedWord c{p.root, p.unroll(n)};
    auto pieces = g.on_cone(c);
    if (pieces.size() != 1)
      continue;
    long diff = (long)pieces[0].to.size() - (long)c.size();
    return diff / (long)p.period.size();
  }
}

// ---------------------------------------------------------------- factorization

ElementaryFactorization factor_elementary(const VAElement &f) {
  VAElement g = canonicalize(f);
  ElementaryFactorization out;
  if (g.spirals().empty()) {
    out.v = VElement::from_va(g);
    return out;
  }
  std::vector<RationalPoint> ps, qs;
  for (const auto &s : g.spirals()) {
    ps.push_back(s.p);
    qs.push_back(s.q);
  }
  auto v = transport(ps, qs, 2, 1);
  if (!v)
    throw internal_error("no V element transports the singular points");
  VAElement w = compose(g, invert(v->as_va()));
  VAElement prod = VAElement::identity();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    std::vector<RationalPoint> others;
    for (std::size_t j = 0; j < qs.size(); ++j)
      if (j != i)
        others.push_back(qs[j]);
    VAElement e = elementary_from_tbar(qs[i], germ_tbar(w, qs[i]), others);
    out.elementary.push_back(e);
    prod = compose(prod, e);
  }
  VAElement u = compose(invert(prod), w);
  out.v = VElement::from_va(compose(u, v->as_va()));
  return out;
}

VAElement realize_portrait(const std::vector<GermPrescription> &spec) {
  VAElement g = VAElement::identity();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto &pi = spec[i];
    if (!spiral_eligible(pi.point, 2))
      throw Error("UnrealizableGerm", to_string(pi.point) + " is not spiral-eligible");
    if (pi.germ.is_translation())
      throw Error("UnrealizableGerm", "germ at " + to_string(pi.point) + " is a base germ");
    std::vector<RationalPoint> others;
    for (std::size_t j = 0; j < spec.size(); ++j) {
      if (j == i)
        continue;
      if (spec[j].point == pi.point)
        throw Error("UnrealizableGerm", "repeated point " + to_string(pi.point));
      others.push_back(spec[j].point);
    }
    g = compose(g, elementary_from_tbar(pi.point, pi.germ, others));
  }
  return g;
}

std::vector<GermPrescription> portrait(const VAElement &f) {
  VAElement g = canonicalize(f);
  std::vector<GermPrescription> out;
  for (const auto &s : g.spirals()) {
    auto b = transport({s.q}, {s.p}, 2, 1);
    if (!b)
      throw internal_error("no V element returns " + to_string(s.q) + " to " + to_string(s.p));
    VAElement h = compose(b->as_va(), g);
    out.push_back({s.p, mod_translations(germ_tbar(h, s.p))});
  }
  return out;
}

// ---------------------------------------------------------------- text

namespace {

std::string rules_text(const std::vector<PlainRule> &rules, int r) {
  std::string s;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (i)
      s += "; ";
    s += to_string(rules[i].from, r) + "->" + to_string(rules[i].to, r);
  }
  return s;
}

long spiral_shift(const SpiralRule &s) {
  Decoded d = decode(s);
  long m = -1;
  for (const auto &r : d.rules)
    m = m < 0 ? (long)r.e : std::min(m, (long)r.e);
  return m - (long)d.J;
}

} // namespace

std::string to_string(const VAElement &f) {
  VAElement c = canonicalize(f);
  std::string body;
  if (!c.is_identity()) {
    body = rules_text(c.plain(), c.r());
    for (const auto &s : c.spirals()) {
      if (!body.empty())
        body += "; ";
      body += "spiral " + to_string(s.p) + " -> " + to_string(s.q) +
              " shift=" + std::to_string(spiral_shift(s)) + " { " +
              rules_text(s.rules, c.r()) + " }";
    }
  }
  std::string head = (c.d() == 2 && c.r() == 1)
                         ? std::string("VA")
                         : "VA[d=" + std::to_string(c.d()) + ",r=" + std::to_string(c.r()) + "]";
  return head + "{ " + body + (body.empty() ? "}" : " }");
}

std::string to_string(const VElement &f) {
  std::string body = f.is_identity() ? "" : rules_text(f.rules(), f.r());
  return "V[d=" + std::to_string(f.d()) + ",r=" + std::to_string(f.r()) + "]{ " + body +
         (body.empty() ? "}" : " }");
}

namespace {

PlainRule parse_rule(const std::string &src, const text::Span &item, int d, int r) {
  auto arrow = item.s.find("->");
  if (arrow == std::string::npos)
    text::fail(src, item.offset, "expected 'from->to'");
  try {
    return {parse_rooted_word(text::trim(item.s.substr(0, arrow)), d, r),
            parse_rooted_word(text::trim(item.s.substr(arrow + 2)), d, r)};
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    text::fail(src, item.offset, e.what());
  }
}

struct RawVA {
  int d = 2, r = 1;
  std::vector<PlainRule> plain;
  std::vector<SpiralRule> spirals;
  std::vector<std::optional<long>> shifts;
};

RawVA parse_raw(const std::string &src, bool allow_spirals) {
  auto h = text::parse_header(src);
  RawVA raw;
  if (h.name != "V" && h.name != "VA")
    text::fail(src, 0, "expected V[d=..,r=..]{...} or VA{...}");
  raw.d = text::param_int(h, "d", 2);
  raw.r = text::param_int(h, "r", 1);
  if (raw.d < 2 || raw.d > 10 || raw.r < 1)
    text::fail(src, 0, "need 2 <= d <= 10 and r >= 1");
  for (const auto &item : text::split_top(h.body, ';')) {
    if (item.s.empty())
      continue;
    if (item.s.rfind("spiral", 0) != 0) {
      raw.plain.push_back(parse_rule(src, item, raw.d, raw.r));
      continue;
    }
    if (!allow_spirals)
      text::fail(src, item.offset, "spiral clauses need a VA element");
    auto open = item.s.find('{');
    if (open == std::string::npos || item.s.back() != '}')
      text::fail(src, item.offset, "expected 'spiral P -> Q { rules }'");
    std::string head = text::trim(item.s.substr(6, open - 6));
    auto arrow = head.find("->");
    if (arrow == std::string::npos)
      text::fail(src, item.offset, "expected 'spiral P -> Q'");
    std::string ps = text::trim(head.substr(0, arrow));
    std::string rest = text::trim(head.substr(arrow + 2));
    std::optional<long> shift;
    auto sh = rest.find("shift=");
    std::string qs = text::trim(rest.substr(0, sh));
    if (sh != std::string::npos) {
      try {
        shift = std::stol(rest.substr(sh + 6));
      } catch (...) {
        text::fail(src, item.offset, "bad shift");
      }
    }
    SpiralRule s;
    try {
      s.p = parse_point(ps, raw.d, raw.r);
      s.q = parse_point(qs, raw.d, raw.r);
    } catch (const Error &e) {
      text::fail(src, item.offset, e.what());
    }
    text::Span inner{item.s.substr(open + 1, item.s.size() - open - 2), item.offset + open + 1};
    for (const auto &ru : text::split_top(inner, ';'))
      if (!ru.s.empty())
        s.rules.push_back(parse_rule(src, ru, raw.d, raw.r));
    raw.spirals.push_back(s);
    raw.shifts.push_back(shift);
  }
  if (raw.plain.empty() && raw.spirals.empty())
    for (int i = 0; i < raw.r; ++i)
      raw.plain.push_back({{i, ""}, {i, ""}});
  return raw;
}

} // namespace

VAElement parse_va_unchecked(const std::string &src) {
  RawVA raw = parse_raw(src, true);
  try {
    return VAElement(raw.d, raw.r, raw.plain, raw.spirals);
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    text::fail(src, 0, e.what());
  }
}

VAElement parse_va(const std::string &src) {
  RawVA raw = parse_raw(src, true);
  VAElement f = parse_va_unchecked(src);
  auto rep = validate(f);
  if (!rep.ok()) {
    std::string msg = "invalid element";
    for (const auto &s : rep.failures)
      msg += "; " + s;
    throw invalid(msg);
  }
  for (std::size_t i = 0; i < raw.spirals.size(); ++i)
    if (raw.shifts[i] && *raw.shifts[i] != spiral_shift(raw.spirals[i]))
      throw invalid("shift of spiral at " + to_string(raw.spirals[i].p) + " should be " +
                    std::to_string(spiral_shift(raw.spirals[i])));
  return canonicalize(f);
}

VElement parse_v(const std::string &src) {
  RawVA raw = parse_raw(src, false);
  return VElement(raw.d, raw.r, raw.plain);
}

} // namespace germkit
