#include "support.hpp"

#include <array>
#include <cstdio>
#include <json.hpp>
#include <sys/wait.h>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string &args) {
  std::string cmd = std::string(GERMKIT_CLI) + " " + args + " 2>/dev/null";
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
    out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string fx(const char *rel) { return "'" + (testing::fixtures() / rel).string() + "'"; }

std::string last_line(const std::string &s) {
  std::string t = s;
  while (!t.empty() && t.back() == '\n')
    t.pop_back();
  auto k = t.rfind('\n');
  return k == std::string::npos ? t : t.substr(k + 1);
}

} // namespace

TEST_CASE("documented examples") {
  Run s = run("sing " + fx("automata/roever-b.rn"));
  CHECK(s.code == 0);
  CHECK(s.out == "[\"0.(1)\"]\n");
  Run p = run("presentations --pipeline va");
  CHECK(last_line(p.out) == "(2, 239)");
  Run c = run("compose " + fx("valid/shuffle.v") + " " + fx("valid/t-spiral-generator.v"));
  CHECK(c.code == 0);
  CHECK(c.out.rfind("V[d=2,r=1]{", 0) == 0);
}

TEST_CASE("json output is versioned and matches text") {
  Run j = run("--format json sigma --instance example2 --element " + fx("valid/f0.t"));
  REQUIRE(j.code == 0);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["germkit"] == 1);
  CHECK(doc["command"] == "sigma");
  CHECK(doc["sigma"]["01"] == 2);
  Run t = run("sigma --instance example2 --element " + fx("valid/f0.t"));
  CHECK(nlohmann::json::parse(t.out) == doc["sigma"]);

  Run hj = run("--format json homology --join 2,3");
  Run ht = run("homology --join 2,3");
  CHECK(nlohmann::json::parse(hj.out)["reduced_homology"] == nlohmann::json::parse(ht.out));
  Run pj = run("--format json presentations --pipeline ta");
  CHECK(nlohmann::json::parse(pj.out)["final"] == "(2, 90)");
}

TEST_CASE("exit codes") {
  Run bad = run("--format json parse " + fx("corrupt/va-tail.va"));
  CHECK(bad.code == 1);
  auto doc = nlohmann::json::parse(bad.out);
  CHECK(doc["error"]["kind"] == "InvalidElement");
  Run perr = run("--format json parse 'V[d=2,r=1]{ 0->'");
  CHECK(perr.code == 1);
  auto pe = nlohmann::json::parse(perr.out);
  CHECK(pe["error"]["kind"] == "ParseError");
  CHECK(pe["error"]["line"] == 1);
  CHECK(run("").code == 2);
  CHECK(run("presentations --pipeline xx").code == 2);
  CHECK(run("eval").code == 2);
}

TEST_CASE("subcommands") {
  CHECK(run("nucleus grigorchuk").out == "[\"1\",\"a\",\"b\",\"c\",\"d\"]\n");
  CHECK(run("rays grigorchuk --word b").out == "[\"0.(1)\"]\n");
  CHECK(run("phi " + fx("valid/phi-example.pm")).out == "4\n");
  CHECK(run("eval " + fx("valid/f0.t") + " 2/3").out == "1/3\n");
  CHECK(run("germ " + fx("valid/t-spiral-generator.v") + " --point '0.(1)'").out == "exponent 1\n");
  CHECK(run("germ " + fx("automata/roever-b.rn") + " --point '0.(1)'").out == "order 2\n");
  CHECK(run("invert " + fx("valid/t-spiral-generator.v")).out == "V[d=2,r=1]{ 0->00; 10->01; 11->1 }\n");
  CHECK(run("sing " + fx("valid/f0.t")).out == "[\"2/3\"]\n");
  Run h = run("--format json hnn --point '0.(1)' --element " + fx("valid/shuffle.v"));
  CHECK(nlohmann::json::parse(h.out)["verified"] == true);
  Run cx = run("--format json complex --instance va --window '0.(1),0.(01)' --truncation 2 --level 2");
  REQUIRE(cx.code == 0);
  auto c = nlohmann::json::parse(cx.out);
  CHECK(c["connectivity_ok"] == true);
  CHECK(c["cubes"] == 441);
  Run jets = run("--format json jets " + fx("valid/h.jet"));
  CHECK(nlohmann::json::parse(jets.out)["conjugator"] == "J[r=3]{ 1, 1, 2/3 }");
  Run cl = run("classify polynomial --word y --theta 3");
  CHECK(cl.out == "y: polynomial(1) theta [\"0\",\"1\",\"2\",\"3\"]\n");
  Run r1 = run("parse --random va --seed 5"), r2 = run("parse --random va --seed 5");
  CHECK(r1.out == r2.out);
  CHECK(run("parse '" + last_line(r1.out) + "'").out == r1.out);
}
