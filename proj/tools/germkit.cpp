#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "germkit/germcomplex.hpp"
#include "germkit/germtheory.hpp"
#include "germkit/jets.hpp"
#include "germkit/plmap.hpp"
#include "germkit/pmobius.hpp"
#include "germkit/presentations.hpp"
#include "germkit/random.hpp"
#include "germkit/rover.hpp"
#include "germkit/selfsim.hpp"
#include "germkit/stabilizers.hpp"

using namespace germkit;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Any = std::variant<VElement, VAElement, TAElement, PLCircleMap, TbarElement, RNElement,
                         MealyAutomaton, Jet, PProjMap>;

struct Loaded {
  std::string kind;
  Any value;
};

std::string read_input(const std::string &arg) {
  if (std::filesystem::is_regular_file(arg)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

std::string header_name(const std::string &s) {
  std::size_t i = 0;
  while (i < s.size() && std::isspace((unsigned char)s[i]))
    ++i;
  std::size_t j = i;
  while (j < s.size() && std::isalpha((unsigned char)s[j]))
    ++j;
  return s.substr(i, j - i);
}

Loaded load(const std::string &arg) {
  auto names = builtin_automaton_names();
  if (!std::filesystem::exists(arg) && std::find(names.begin(), names.end(), arg) != names.end())
    return {"SS", builtin_automaton(arg)};
  std::string src = read_input(arg);
  std::string h = header_name(src);
  if (h == "V")
    return {"V", parse_v(src)};
  if (h == "VA")
    return {"VA", parse_va(src)};
  if (h == "T") {
    if (src.find("spiral") != std::string::npos)
      return {"TA", parse_ta(src)};
    PLCircleMap m = parse_circle_map(src);
    if (is_in_T(m))
      return {"TA", TAElement::from_circle(m)};
    return {"PL", m};
  }
  if (h == "TB")
    return {"TB", parse_tbar(src)};
  if (h == "RN")
    return {"RN", parse_rn(src)};
  if (h == "SS")
    return {"SS", parse_automaton(src)};
  if (h == "J")
    return {"J", parse_jet(src)};
  if (h == "PM")
    return {"PM", parse_pproj(src)};
  throw ParseError("unrecognized element header '" + h + "'", 1, 1);
}

std::string show(const Any &a) {
  return std::visit([](const auto &x) { return to_string(x); }, a);
}

template <class T> const T &as(const Loaded &l, const std::string &what) {
  if (auto p = std::get_if<T>(&l.value))
    return *p;
  throw Error("DomainError", what + " does not apply to a " + l.kind + " element");
}

Any compose_any(const Loaded &a, const Loaded &b) {
  if (a.kind != b.kind)
    throw Error("DomainError", "cannot compose " + a.kind + " with " + b.kind);
  return std::visit(
      [&](const auto &x) -> Any {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MealyAutomaton>)
          throw Error("DomainError", "automata do not compose");
        else
          return compose(x, std::get<T>(b.value));
      },
      a.value);
}

Any invert_any(const Loaded &a) {
  return std::visit(
      [&](const auto &x) -> Any {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MealyAutomaton>)
          throw Error("DomainError", "automata do not invert");
        else
          return invert(x);
      },
      a.value);
}

int d_of(const Loaded &l) {
  if (auto p = std::get_if<VElement>(&l.value))
    return p->d();
  if (auto p = std::get_if<VAElement>(&l.value))
    return p->d();
  if (auto p = std::get_if<RNElement>(&l.value))
    return p->d();
  return 2;
}

int r_of(const Loaded &l) {
  if (auto p = std::get_if<VElement>(&l.value))
    return p->r();
  if (auto p = std::get_if<VAElement>(&l.value))
    return p->r();
  if (auto p = std::get_if<RNElement>(&l.value))
    return p->r();
  return 1;
}

// Cantor point for "0.01(10)", binary expansion for a rational
RationalPoint read_point(const std::string &s, int d = 2, int r = 1) {
  if (s.find('(') != std::string::npos || s.find('.') != std::string::npos)
    return parse_point(s, d, r);
  Rational q = parse_rational(s);
  q -= Rational(floor_q(q));
  return rational_to_point(q);
}

std::vector<std::string> split_list(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
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
}

Instance instance_named(const std::string &name, const Loaded *elem) {
  if (name == "va")
    return Instance::va();
  if (name == "ta")
    return Instance::ta();
  if (name == "example2")
    return Instance::example2();
  if (name.rfind("rn", 0) == 0) {
    if (elem && elem->kind == "RN")
      return Instance::rn(std::get<RNElement>(elem->value).automaton_ref());
    auto colon = name.find(':');
    return Instance::rn(resolve_automaton(colon == std::string::npos ? "grigorchuk"
                                                                     : name.substr(colon + 1)));
  }
  throw UsageError("unknown instance '" + name + "' (va, ta, example2, rn[:automaton])");
}

std::string default_instance(const Loaded &l) {
  if (l.kind == "VA" || l.kind == "V")
    return "va";
  if (l.kind == "TA")
    return "ta";
  if (l.kind == "PL")
    return "example2";
  if (l.kind == "RN")
    return "rn";
  throw Error("DomainError", "no germ instance for a " + l.kind + " element");
}

InstanceElement to_instance(const Instance &inst, const Loaded &l) {
  switch (inst.kind()) {
  case InstanceKind::VA:
    if (l.kind == "V")
      return std::get<VElement>(l.value).as_va();
    return as<VAElement>(l, "instance va");
  case InstanceKind::TA:
    return as<TAElement>(l, "instance ta");
  case InstanceKind::RN:
    return as<RNElement>(l, "instance rn");
  case InstanceKind::Example2:
    if (l.kind == "TA")
      return to_circle_map(std::get<TAElement>(l.value));
    return as<PLCircleMap>(l, "instance example2");
  }
  throw internal_error("unknown instance");
}

json points_json(const std::vector<RationalPoint> &ps, int r = 1) {
  json a = json::array();
  for (const auto &p : ps)
    a.push_back(to_string(p, r));
  return a;
}

json word_list(const MealyAutomaton &a, const std::vector<AutomatonWord> &ws) {
  json j = json::array();
  for (const auto &w : ws)
    j.push_back(to_string(a, w));
  return j;
}

struct Result {
  json fields = json::object();
  std::vector<std::string> lines;
};

Result element_result(const std::string &kind, const Any &v) {
  Result r;
  r.fields["kind"] = kind;
  r.fields["element"] = show(v);
  r.lines.push_back(show(v));
  return r;
}

Result compact(json j, const std::string &key) {
  Result r;
  r.lines.push_back(j.dump());
  r.fields[key] = std::move(j);
  return r;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"germkit: germ groups, Thompson-like groups and self-similar groups, exactly"};
  app.require_subcommand(1);
  std::string format = "text";
  int max_depth = 64;
  std::size_t max_size = 10000;
  std::uint64_t seed = 1;
  int truncation = 2;
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-depth", max_depth, "search depth for transports and unfoldings");
  app.add_option("--max-size", max_size, "size limit for nucleus and germ-order searches");
  app.add_option("--seed", seed, "seed for random elements");
  app.add_option("--truncation", truncation, "germ truncation for the germ complex");
  app.fallthrough();

  std::string a1, a2, point, with, instance_name, word, window, join, facets, element_file,
      pipeline, random_kind, report, chain;
  int theta_k = -1, level = 1, bfs_depth = 16, maxdim = 2;
  long max_n = 16;
  bool show_steps = false;

  auto *c_parse = app.add_subcommand("parse", "parse, validate and print an element canonically");
  c_parse->add_option("input", a1, "file or inline text");
  c_parse->add_option("--random", random_kind, "generate: v, va, ta, t, example2, rn, fix");
  auto *c_compose = app.add_subcommand("compose", "print a o b");
  c_compose->add_option("a", a1)->required();
  c_compose->add_option("b", a2)->required();
  auto *c_invert = app.add_subcommand("invert", "print the inverse");
  c_invert->add_option("a", a1)->required();
  auto *c_eval = app.add_subcommand("eval", "evaluate at a point");
  c_eval->add_option("a", a1)->required();
  c_eval->add_option("point", point)->required();
  auto *c_sing = app.add_subcommand("sing", "singular points");
  c_sing->add_option("a", a1)->required();
  auto *c_portrait = app.add_subcommand("portrait", "nontrivial B-germs");
  c_portrait->add_option("a", a1)->required();
  c_portrait->add_option("--instance", instance_name);
  auto *c_sigma = app.add_subcommand("sigma", "germ abelianization by tail class");
  c_sigma->add_option("a", a1);
  c_sigma->add_option("--element", element_file);
  c_sigma->add_option("--instance", instance_name);
  auto *c_tau = app.add_subcommand("tau", "orbit displacement of singular points");
  c_tau->add_option("a", a1)->required();
  c_tau->add_option("--instance", instance_name);
  auto *c_germ = app.add_subcommand("germ", "germ at a fixed point");
  c_germ->add_option("a", a1)->required();
  c_germ->add_option("--point", point)->required();
  c_germ->add_option("--with", with, "second element for germ equality");
  c_germ->add_option("--max-n", max_n, "bound for the germ order search");
  auto *c_nucleus = app.add_subcommand("nucleus", "nucleus of an automaton group");
  c_nucleus->add_option("automaton", a1)->required();
  auto *c_classify = app.add_subcommand("classify", "activity growth");
  c_classify->add_option("automaton", a1)->required();
  c_classify->add_option("--word", word);
  c_classify->add_option("--theta", theta_k, "also list theta_k for k = 0..K");
  auto *c_rays = app.add_subcommand("rays", "active rays of a bounded element");
  c_rays->add_option("automaton", a1)->required();
  c_rays->add_option("--word", word)->required();
  auto *c_complex = app.add_subcommand("complex", "germ complex on a finite window");
  c_complex->add_option("--instance", instance_name);
  c_complex->add_option("--window", window, "comma separated points")->required();
  c_complex->add_option("--level", level);
  c_complex->add_option("--bfs-depth", bfs_depth);
  c_complex->add_option("--report", report, "text or json");
  auto *c_homology = app.add_subcommand("homology", "reduced rational homology");
  c_homology->add_option("--join", join, "sizes of discrete sets to join, e.g. 2,3");
  c_homology->add_option("--facets", facets, "JSON list of facets");
  c_homology->add_option("--maxdim", maxdim);
  auto *c_hnn = app.add_subcommand("hnn", "ascending HNN decomposition at a fixed point");
  c_hnn->add_option("--point", point)->required();
  c_hnn->add_option("--element", element_file)->required();
  c_hnn->add_option("--chain", chain, "further fixed points, comma separated");
  auto *c_jets = app.add_subcommand("jets", "conjugator of a jet to its linear part");
  c_jets->add_option("jet", a1)->required();
  c_jets->add_option("--with", with, "second jet: print the commutator");
  auto *c_phi = app.add_subcommand("phi", "product of derivative jumps");
  c_phi->add_option("map", a1)->required();
  auto *c_pres = app.add_subcommand("presentations", "presentation size pipelines");
  c_pres->add_option("--pipeline", pipeline)->required()->check(CLI::IsMember({"ta", "va"}));
  c_pres->add_flag("--show-steps", show_steps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }
  if (!report.empty())
    format = report;

  CLI::App *cmd = app.get_subcommands().front();
  std::string name = cmd->get_name();
  Result res;
  try {
    if (name == "parse") {
      if (!random_kind.empty()) {
        gen::Rng rng(seed);
        if (random_kind == "v")
          res = element_result("V", gen::random_v(rng));
        else if (random_kind == "va")
          res = element_result("VA", gen::random_va(rng));
        else if (random_kind == "ta")
          res = element_result("TA", gen::random_ta(rng));
        else if (random_kind == "t")
          res = element_result("TA", TAElement::from_circle(gen::random_t(rng)));
        else if (random_kind == "example2")
          res = element_result("PL", gen::random_example2(rng));
        else if (random_kind == "rn")
          res = element_result("RN", gen::random_rn(rng, resolve_automaton("grigorchuk")));
        else if (random_kind == "fix")
          res = element_result("V", gen::random_fix(rng, parse_point("0.(1)", 2)));
        else
          throw UsageError("unknown random kind '" + random_kind + "'");
      } else {
        if (a1.empty())
          throw UsageError("parse needs an input or --random");
        Loaded l = load(a1);
        res = element_result(l.kind, l.value);
      }
    } else if (name == "compose") {
      Loaded a = load(a1), b = load(a2);
      res = element_result(a.kind, compose_any(a, b));
    } else if (name == "invert") {
      Loaded a = load(a1);
      res = element_result(a.kind, invert_any(a));
    } else if (name == "eval") {
      Loaded a = load(a1);
      std::string out;
      if (a.kind == "V")
        out = to_string(std::get<VElement>(a.value).evaluate(parse_point(point, d_of(a), r_of(a))), r_of(a));
      else if (a.kind == "VA")
        out = to_string(std::get<VAElement>(a.value).evaluate(parse_point(point, d_of(a), r_of(a))), r_of(a));
      else if (a.kind == "RN")
        out = to_string(std::get<RNElement>(a.value).evaluate(parse_point(point, d_of(a), r_of(a))), r_of(a));
      else if (a.kind == "TA")
        out = to_string(std::get<TAElement>(a.value).eval(parse_rational(point)));
      else if (a.kind == "PL")
        out = to_string(std::get<PLCircleMap>(a.value).eval(parse_rational(point)));
      else if (a.kind == "TB")
        out = to_string(std::get<TbarElement>(a.value).eval(parse_rational(point)));
      else if (a.kind == "PM")
        out = to_string(std::get<PProjMap>(a.value).eval(parse_rational(point)));
      else
        throw Error("DomainError", "eval does not apply to a " + a.kind + " element");
      res.fields["value"] = out;
      res.lines.push_back(out);
    } else if (name == "sing") {
      Loaded a = load(a1);
      json out = json::array();
      if (a.kind == "V") {
      } else if (a.kind == "VA") {
        out = points_json(sing(std::get<VAElement>(a.value)), r_of(a));
      } else if (a.kind == "RN") {
        out = points_json(sing(std::get<RNElement>(a.value)), r_of(a));
      } else if (a.kind == "TA") {
        for (const auto &t : sing(std::get<TAElement>(a.value)))
          out.push_back(to_string(t));
      } else if (a.kind == "PL") {
        for (const auto &t : std::get<PLCircleMap>(a.value).breakpoints())
          if (!is_dyadic(t))
            out.push_back(to_string(t));
      } else {
        throw Error("DomainError", "sing does not apply to a " + a.kind + " element");
      }
      res = compact(out, "sing");
    } else if (name == "portrait") {
      Loaded a = load(a1);
      Instance inst = instance_named(instance_name.empty() ? default_instance(a) : instance_name, &a);
      json out = json::object();
      for (const auto &[p, g] : portrait(inst, to_instance(inst, a)).germs)
        out[to_string(p, r_of(a))] = g;
      res.fields["instance"] = inst.name();
      res.fields["portrait"] = out;
      for (const auto &[k, v] : out.items())
        res.lines.push_back(k + " : " + v.get<std::string>());
    } else if (name == "sigma") {
      std::string src = !element_file.empty() ? element_file : a1;
      if (src.empty())
        throw UsageError("sigma needs an element");
      Loaded a = load(src);
      Instance inst = instance_named(instance_name.empty() ? default_instance(a) : instance_name, &a);
      json out = json::object();
      for (const auto &[c, v] : sigma(inst, to_instance(inst, a)))
        out[to_string(c)] = std::stol(v.get_str());
      res = compact(out, "sigma");
    } else if (name == "tau") {
      Loaded a = load(a1);
      Instance inst = instance_named(instance_name.empty() ? default_instance(a) : instance_name, &a);
      auto t = tau(inst, to_instance(inst, a));
      json out = json::object();
      for (const auto &[c, n] : t)
        out[to_string(c)] = n;
      res.fields["tau"] = out;
      res.lines.push_back(to_string(t));
    } else if (name == "germ") {
      Loaded a = load(a1);
      if (a.kind == "V") {
        long e = germ_exponent(std::get<VElement>(a.value), parse_point(point, d_of(a), r_of(a)));
        res.fields["exponent"] = e;
        res.lines.push_back("exponent " + std::to_string(e));
      } else if (a.kind == "VA") {
        RationalPoint p = parse_point(point, 2, 1);
        std::string g = to_string(germ_tbar(std::get<VAElement>(a.value), p));
        res.fields["germ"] = g;
        res.lines.push_back(g);
        if (!with.empty()) {
          Loaded b = load(with);
          bool eq = germ_tbar(as<VAElement>(b, "germ --with"), p) == germ_tbar(std::get<VAElement>(a.value), p);
          res.fields["equal"] = eq;
          res.lines.push_back(std::string("equal ") + (eq ? "true" : "false"));
        }
      } else if (a.kind == "TA") {
        auto [lo, hi] = germ_tbar_pair(std::get<TAElement>(a.value), parse_rational(point));
        res.fields["below"] = to_string(lo);
        res.fields["above"] = to_string(hi);
        res.lines.push_back("below " + to_string(lo));
        res.lines.push_back("above " + to_string(hi));
      } else if (a.kind == "RN") {
        const auto &f = std::get<RNElement>(a.value);
        RationalPoint p = parse_point(point, f.d(), f.r());
        auto ord = germ_order(f, p, max_n);
        res.fields["order"] = ord ? json(*ord) : json("unbounded(" + std::to_string(max_n) + ")");
        res.lines.push_back("order " + (ord ? std::to_string(*ord) : "unbounded(" + std::to_string(max_n) + ")"));
        if (!with.empty()) {
          Loaded b = load(with);
          bool eq = germ_equal(f, as<RNElement>(b, "germ --with"), p);
          res.fields["equal"] = eq;
          res.lines.push_back(std::string("equal ") + (eq ? "true" : "false"));
        }
      } else {
        throw Error("DomainError", "germ does not apply to a " + a.kind + " element");
      }
    } else if (name == "nucleus") {
      MealyAutomaton a = as<MealyAutomaton>(load(a1), "nucleus");
      auto n = nucleus(a, {}, max_size);
      res = compact(word_list(a, n), "nucleus");
    } else if (name == "classify") {
      MealyAutomaton a = as<MealyAutomaton>(load(a1), "classify");
      std::vector<AutomatonWord> words;
      if (!word.empty())
        words.push_back(parse_word(a, word));
      else
        for (std::size_t s = 0; s < a.size(); ++s)
          if (!a.acts_trivially((int)s) && a.representative((int)s) == (int)s)
            words.push_back({{(int)s, false}});
      json out = json::object();
      for (const auto &w : words) {
        std::string act = to_string(activity_degree(a, w));
        std::string line = to_string(a, w) + ": " + act;
        if (theta_k >= 0) {
          json th = json::array();
          for (int k = 0; k <= theta_k; ++k)
            th.push_back(theta(a, w, k).get_str());
          out[to_string(a, w)] = {{"activity", act}, {"theta", th}};
          line += " theta " + th.dump();
        } else {
          out[to_string(a, w)] = act;
        }
        res.lines.push_back(line);
      }
      res.fields["activity"] = out;
    } else if (name == "rays") {
      MealyAutomaton a = as<MealyAutomaton>(load(a1), "rays");
      res = compact(points_json(active_rays(a, parse_word(a, word))), "rays");
    } else if (name == "complex") {
      Instance inst = instance_named(instance_name.empty() ? "va" : instance_name, nullptr);
      int d = inst.kind() == InstanceKind::RN ? std::get<RNElement>(inst.identity()).d() : 2;
      std::vector<RationalPoint> pts;
      for (const auto &s : split_list(window, ','))
        pts.push_back(read_point(s, d, 1));
      Window w = instance_window(inst, pts, truncation);
      json jw = json::array();
      for (std::size_t i = 0; i < w.points.size(); ++i)
        jw.push_back({{"point", to_string(w.points[i])}, {"germs", w.germs[i].size()}});
      res.fields["instance"] = inst.name();
      res.fields["truncation"] = truncation;
      res.fields["window"] = jw;
      auto cubes = sublevel_cubes(w, (std::size_t)level);
      res.fields["level"] = level;
      res.fields["cubes"] = cubes.size();
      res.lines.push_back("window " + jw.dump());
      res.lines.push_back("cubes at level <= " + std::to_string(level) + ": " + std::to_string(cubes.size()));
      json links = json::array();
      bool connected = true;
      std::size_t n = w.points.size();
      for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
        Vertex v(n, kTrivial);
        for (std::size_t i = 0; i < n; ++i)
          if (mask >> i & 1)
            v[i] = kHidden;
        std::size_t m = morse(v);
        if ((int)m > level)
          continue;
        auto h = reduced_homology(descending_link(w, v), maxdim);
        bool ok = (m < 2 || h[0] == 0) && (m < 3 || h[1] == 0);
        connected = connected && ok;
        json hidden = json::array();
        for (std::size_t i = 0; i < n; ++i)
          if (v[i] == kHidden)
            hidden.push_back(to_string(w.points[i]));
        links.push_back({{"hidden", hidden}, {"morse", m}, {"reduced_homology", h}});
        res.lines.push_back("link " + hidden.dump() + " morse " + std::to_string(m) + " H~ " +
                            json(h).dump());
      }
      res.fields["descending_links"] = links;
      res.fields["connectivity_ok"] = connected;
      res.lines.push_back(std::string("connectivity ") + (connected ? "ok" : "FAILED"));
      if (inst.kind() == InstanceKind::VA || inst.kind() == InstanceKind::RN) {
        try {
          auto oc = count_cube_orbits(inst, w, (std::size_t)level, bfs_depth);
          res.fields["orbits"] = {{"total", oc.total}, {"by_dimension", oc.by_dimension}};
          res.lines.push_back("cube orbits " + std::to_string(oc.total) + " by dimension " +
                              json(oc.by_dimension).dump());
        } catch (const Error &e) {
          if (e.kind() != "Inconclusive")
            throw;
          res.fields["orbits"] = {{"inconclusive", e.what()}};
          res.lines.push_back(std::string("cube orbits inconclusive: ") + e.what());
        }
      }
    } else if (name == "homology") {
      SimplicialComplex c;
      if (!join.empty()) {
        std::vector<std::size_t> sizes;
        for (const auto &s : split_list(join, ','))
          sizes.push_back(std::stoul(s));
        c = join_of_discrete(sizes);
      } else if (!facets.empty()) {
        json f = json::parse(read_input(facets));
        int top = -1;
        for (const auto &face : f) {
          std::vector<int> v = face.get<std::vector<int>>();
          std::sort(v.begin(), v.end());
          for (int x : v)
            top = std::max(top, x);
          c.facets.push_back(v);
        }
        for (int i = 0; i <= top; ++i)
          c.vertices.push_back(std::to_string(i));
      } else {
        throw UsageError("homology needs --join or --facets");
      }
      res = compact(json(reduced_homology(c, maxdim)), "reduced_homology");
    } else if (name == "hnn") {
      VElement g = as<VElement>(load(element_file), "hnn");
      RationalPoint s = parse_point(point, g.d(), g.r());
      if (chain.empty()) {
        VElement t = spiral_generator(s, g.d(), g.r());
        HNNWitness w = hnn_decompose(g, s, t);
        bool ok = reassemble(w, t) == g;
        res.fields["t"] = to_string(t);
        res.fields["basin"] = to_string(basin(t, s), g.r());
        res.fields["i"] = w.i;
        res.fields["j"] = w.j;
        res.fields["h"] = to_string(w.h);
        res.fields["verified"] = ok;
        res.lines = {"t = " + to_string(t), "basin " + to_string(basin(t, s), g.r()),
                     "i = " + std::to_string(w.i) + ", j = " + std::to_string(w.j),
                     "h = " + to_string(w.h), std::string("verified ") + (ok ? "true" : "false")};
      } else {
        std::vector<RationalPoint> pts{s};
        for (const auto &x : split_list(chain, ','))
          pts.push_back(parse_point(x, g.d(), g.r()));
        HNNChain ch = hnn_decompose_chain(g, pts);
        json steps = json::array();
        for (std::size_t k = 0; k < pts.size(); ++k) {
          const auto &w = ch.witnesses[k];
          steps.push_back({{"point", to_string(pts[k], g.r())}, {"t", to_string(ch.generators[k])},
                           {"i", w.i}, {"j", w.j}, {"h", to_string(w.h)}});
          res.lines.push_back(to_string(pts[k], g.r()) + ": i = " + std::to_string(w.i) +
                              ", j = " + std::to_string(w.j) + ", h = " + to_string(w.h));
        }
        res.fields["chain"] = steps;
      }
    } else if (name == "jets") {
      Jet h = as<Jet>(load(a1), "jets");
      if (!with.empty()) {
        Jet g = as<Jet>(load(with), "jets --with");
        Jet c = commutator(h, g);
        res.fields["commutator"] = to_string(c);
        res.lines.push_back(to_string(c));
      } else {
        Jet k = solve_conjugacy(h);
        res.fields["jet"] = to_string(h);
        res.fields["conjugator"] = to_string(k);
        res.fields["in_derived"] = is_in_derived(h);
        res.lines = {"conjugator " + to_string(k),
                     std::string("in derived subgroup ") + (is_in_derived(h) ? "true" : "false")};
      }
    } else if (name == "phi") {
      PProjMap f = as<PProjMap>(load(a1), "phi");
      std::string v = to_string(phi_hat(f));
      res.fields["phi_hat"] = v;
      res.lines.push_back(v);
    } else if (name == "presentations") {
      auto steps = pipeline == "ta" ? pipeline_ta() : pipeline_va();
      json js = json::array();
      for (const auto &s : steps) {
        js.push_back({{"step", s.name}, {"size", to_string(s.size)}});
        if (show_steps)
          res.lines.push_back(s.name + ": " + to_string(s.size));
      }
      res.fields["steps"] = js;
      res.fields["final"] = to_string(steps.back().size);
      res.lines.push_back(to_string(steps.back().size));
    }
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    json err = {{"kind", e.kind()}, {"message", e.what()}};
    if (auto pe = dynamic_cast<const ParseError *>(&e)) {
      err["line"] = pe->line();
      err["column"] = pe->column();
    }
    if (format == "json")
      std::cout << json{{"germkit", 1}, {"command", name}, {"error", err}}.dump() << "\n";
    else
      std::cerr << "error[" << e.kind() << "]: " << e.what() << "\n";
    return 1;
  }

  if (format == "json") {
    json out = {{"germkit", 1}, {"command", name}};
    out.update(res.fields);
    std::cout << out.dump() << "\n";
  } else {
    for (const auto &l : res.lines)
      std::cout << l << "\n";
  }
  return 0;
}
