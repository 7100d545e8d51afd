#include "support.hpp"

#include <cstdlib>

#include "germkit/germcomplex.hpp"
#include "oracles.hpp"

using namespace germkit;

namespace {

RationalPoint pt(const char *s) { return parse_point(s, 2); }

Window window_of(const std::vector<std::size_t> &sizes) {
  std::vector<RationalPoint> pts;
  std::vector<std::vector<std::string>> germs;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    pts.push_back(canonicalize_point(0, Word(i + 1, char(0)), std::string(1, char(1)), 2));
    germs.emplace_back();
    for (std::size_t k = 0; k < sizes[i]; ++k)
      germs.back().push_back("g" + std::to_string(k));
  }
  return make_window(pts, germs);
}

SimplicialComplex k23() {
  SimplicialComplex c;
  c.vertices = {"a0", "a1", "b0", "b1", "b2"};
  for (int a = 0; a < 2; ++a)
    for (int b = 2; b < 5; ++b)
      c.facets.push_back({a, b});
  return c;
}

} // namespace

TEST_CASE("reduced homology of small complexes") {
  CHECK(reduced_homology(k23(), 2) == std::vector<long>{0, 2, 0});
  std::vector<std::pair<int, int>> edges;
  for (const auto &f : k23().facets)
    edges.push_back({f[0], f[1]});
  CHECK(oracle::graph_h1(5, edges) == 2);

  SimplicialComplex pts{{"x", "y", "z"}, {{0}, {1}, {2}}};
  CHECK(reduced_homology(pts, 1) == std::vector<long>{2, 0});
  SimplicialComplex simplex{{"x", "y", "z"}, {{0, 1, 2}}};
  CHECK(reduced_homology(simplex, 2) == std::vector<long>{0, 0, 0});
  SimplicialComplex circle{{"x", "y", "z"}, {{0, 1}, {1, 2}, {0, 2}}};
  CHECK(reduced_homology(circle, 2) == std::vector<long>{0, 1, 0});
}

TEST_CASE("joins of discrete sets are wedges of spheres") {
  for (std::vector<std::size_t> sizes :
       {std::vector<std::size_t>{2, 3}, {2, 2, 2}, {4, 4, 4}, {3}, {1, 5}, {3, 2, 4}}) {
    auto h = reduced_homology(join_of_discrete(sizes), 3);
    for (std::size_t k = 0; k < h.size(); ++k) {
      Integer want = k + 1 == sizes.size() ? oracle::join_top_rank(sizes) : Integer(0);
      CHECK(Integer(h[k]) == want);
    }
  }
}

TEST_CASE("cube enumeration") {
  for (std::vector<std::size_t> sizes : {std::vector<std::size_t>{3, 3}, {3}, {2, 4, 1}}) {
    Window w = window_of(sizes);
    for (std::size_t n = 0; n <= sizes.size(); ++n) {
      auto cubes = sublevel_cubes(w, n);
      CHECK(Integer((unsigned long)cubes.size()) == oracle::sublevel_cube_count(sizes, n));
      for (const auto &c : cubes) {
        auto vs = cube_vertices(c);
        CHECK(vs.size() == (std::size_t{1} << dimension(c)));
        for (const auto &v : vs)
          CHECK(morse(v) <= n);
      }
    }
  }
  CHECK(sublevel_cubes(window_of({3, 3}), 2).size() == 81);
  CHECK(sublevel_cubes(window_of({3, 3}), 1).size() == 56);
}

TEST_CASE("cell cap") {
  setenv("GERMKIT_MAX_CELLS", "50", 1);
  CHECK(testing::error_kind([] { sublevel_cubes(window_of({3, 3}), 2); }) == "Inconclusive");
  unsetenv("GERMKIT_MAX_CELLS");
}

TEST_CASE("descending links") {
  Window w = window_of({3, 3, 3});
  Vertex v{kHidden, kHidden, kTrivial};
  auto h = reduced_homology(descending_link(w, v), 2);
  CHECK(h == std::vector<long>{0, 9, 0});
  Vertex all{kHidden, kHidden, kHidden};
  CHECK(reduced_homology(descending_link(w, all), 2) == std::vector<long>{0, 0, 27});
  Vertex one{kTrivial, kHidden, 0};
  CHECK(reduced_homology(descending_link(w, one), 1) == std::vector<long>{3, 0});
}

TEST_CASE("truncated germ lists") {
  Instance va = Instance::va();
  CHECK(truncated_germs(va, pt("0.(1)"), 1).size() == 3);
  CHECK(truncated_germs(va, pt("0.(1)"), 2).size() == 9);
  CHECK(truncated_germs(va, pt("0.(1)"), 3).size() == 19);
  Instance ex = Instance::example2();
  CHECK_FALSE(truncated_germs(ex, rational_to_point(Rational(1, 3)), 2).empty());
  Instance rn = Instance::rn(resolve_automaton("grigorchuk"));
  CHECK(truncated_germs(rn, pt("0.(1)"), 2).size() == 3);
  CHECK(testing::error_kind([] { make_window({pt("0.(1)")}, {{}}); }) != "");
}

TEST_CASE("connectivity of descending links on instance windows") {
  Instance va = Instance::va();
  std::vector<RationalPoint> pts{pt("0.(1)"), pt("0.(01)"), pt("0.1(0)")};
  for (int c = 2; c <= 3; ++c) {
    Window w = instance_window(va, pts, c);
    for (unsigned mask = 1; mask < 8; ++mask) {
      Vertex v(3, kTrivial);
      for (int i = 0; i < 3; ++i)
        if (mask >> i & 1)
          v[i] = kHidden;
      auto h = reduced_homology(descending_link(w, v), 2);
      std::size_t m = morse(v);
      if (m >= 2)
        CHECK(h[0] == 0);
      if (m >= 3)
        CHECK(h[1] == 0);
    }
  }
}

TEST_CASE("cube orbits") {
  Instance va = Instance::va();
  Window single = instance_window(va, {pt("0.(1)")}, 1);
  OrbitCount one = count_cube_orbits(va, single, 1, 16);
  CHECK(one.by_dimension == std::vector<long>{2, 1});
  CHECK(one.total == 3);

  Window same = make_window({pt("0.(1)"), pt("0.0(1)")}, {{"g"}, {"g"}});
  Window diff = make_window({pt("0.(1)"), pt("0.(01)")}, {{"g"}, {"g"}});
  OrbitCount s = count_cube_orbits(va, same, 2, 16), d = count_cube_orbits(va, diff, 2, 16);
  CHECK(s.total == 6);
  CHECK(d.total == 9);
  CHECK(d.total > s.total);
  CHECK(testing::error_kind([&] { count_cube_orbits(Instance::ta(), single, 1, 4); }) == "UnsupportedOrbit");
}

TEST_CASE("cube stabilizers") {
  Instance va = Instance::va();
  Window w = make_window({pt("0.(1)")}, {{"g"}});
  Cube c{{CubeCoord::Kind::EdgeTrivialHidden, kTrivial}};
  CHECK(cube_stabilizer_membership(va, VAElement::identity(), w, c));
  VElement t = parse_v(testing::slurp(testing::fixtures() / "valid/t-spiral-generator.v"));
  CHECK(cube_stabilizer_membership(va, t.as_va(), w, c));
  VElement s = parse_v("V[d=2,r=1]{ 0->1; 1->0 }");
  CHECK_FALSE(cube_stabilizer_membership(va, s.as_va(), w, c));
  CHECK(is_singular(Cube{{CubeCoord::Kind::EdgeHiddenGerm, 0}}));
  CHECK_FALSE(is_singular(c));
}
