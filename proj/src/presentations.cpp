#include "germkit/presentations.hpp"

namespace germkit {

const PresSize kPresT{2, 5};
const PresSize kPresF{2, 2};

std::string to_string(const PresSize &p) {
  return "(" + p.generators.get_str() + ", " + p.relations.get_str() + ")";
}

PresSize extension(const PresSize &p, const PresSize &q) {
  return {p.generators + q.generators, p.relations + q.relations + p.generators * q.generators};
}

PresSize amalgam(const std::vector<PresSize> &sizes, const std::vector<Integer> &intersection_gens) {
  PresSize out;
  for (const auto &s : sizes) {
    out.generators += s.generators;
    out.relations += s.relations;
  }
  for (const auto &y : intersection_gens)
    out.relations += y;
  return out;
}

PresSize wreath_c2(const PresSize &p) {
  Integer g = p.generators;
  return {g + 1, p.relations + 1 + g * (g + 1) / 2};
}

PresSize asc_hnn(const PresSize &p) { return {p.generators + 1, p.generators + p.relations}; }

PresSize fix_v(const Integer &m) {
  Integer n = m + 2;
  return {n, n * (n - 1) / 2 + 6};
}

PresSize tietze(const PresSize &p, const Integer &k) { return {k, p.relations + k}; }

std::vector<PipelineStep> pipeline_ta() {
  std::vector<PipelineStep> steps;
  PresSize txt = extension(kPresT, kPresT);
  steps.push_back({"T x T", txt});
  PresSize a = extension(txt, kPresF);
  steps.push_back({"A = ext(T x T, F)", a});
  PresSize aw = wreath_c2(a);
  steps.push_back({"A wr Z2", aw});
  // intersections: F, F wr Z2, F x F extended by T x T
  Integer y1 = kPresF.generators;
  Integer y2 = kPresF.generators + 1;
  Integer y3 = txt.generators + extension(kPresF, kPresF).generators;
  PresSize ta = amalgam({kPresT, a, aw}, {y1, y2, y3});
  steps.push_back({"TA amalgam", ta});
  steps.push_back({"TA on 2 generators", tietze(ta, 2)});
  return steps;
}

std::vector<PipelineStep> pipeline_va() {
  std::vector<PipelineStep> steps;
  PresSize v = fix_v(0);
  steps.push_back({"V", v});
  PresSize twr = wreath_c2(kPresT);
  steps.push_back({"T wr Z2", twr});
  PresSize txt = extension(kPresT, kPresT);
  steps.push_back({"T x T", txt});
  PresSize f1 = fix_v(1), f2 = fix_v(2), f3 = fix_v(3), f4 = fix_v(4);
  steps.push_back({"Fix_V(1 point)", f1});
  steps.push_back({"Fix_V(2 points)", f2});
  PresSize s0 = extension(kPresT, f1);
  steps.push_back({"SingStab({0^})", s0});
  steps.push_back({"SingStab({1^})", s0});
  PresSize s00 = extension(twr, f2);
  steps.push_back({"SingStab({0^,10^})", s00});
  steps.push_back({"SingStab({01^,1^})", s00});
  PresSize s01 = extension(txt, f2);
  steps.push_back({"SingStab({0^,1^})", s01});

  PresSize z2{1, 1}, z2z2{2, 3};
  std::vector<Integer> ys;
  auto add = [&](int count, const Integer &gens) {
    for (int i = 0; i < count; ++i)
      ys.push_back(gens);
  };
  add(2, f1.generators);                          // Stab_V({p})
  add(2, f2.generators);                          // Stab_V({p,q})
  add(2, extension(z2, f2).generators);           // Stab_V({p,p'})
  add(2, extension(z2, f3).generators);           // Stab_V({p,p',q})
  add(1, extension(z2z2, f4).generators);         // Stab_V({p,p',q,q'})
  add(2, extension(kPresT, f2).generators);       // SingFix({p},{p,p'})
  add(2, extension(kPresT, f2).generators);       // SingFix({p},{p,q})
  add(2, extension(kPresT, f3).generators);       // SingFix({p},{p,p',q})
  PresSize va = amalgam({v, s0, s00, s0, s00, s01}, ys);
  steps.push_back({"VA amalgam", va});
  steps.push_back({"VA on 2 generators", tietze(va, 2)});
  return steps;
}

} // namespace germkit
