#pragma once

#include <string>
#include <vector>

#include "germkit/germtheory.hpp"

namespace germkit {

// Finite window of singular points, each with a truncated list of nontrivial B-germs.
struct Window {
  std::vector<RationalPoint> points;
  std::vector<std::vector<std::string>> germs;
};

// sorts points, sorts and dedupes germ lists; throws if a list is empty
Window make_window(std::vector<RationalPoint> points, std::vector<std::vector<std::string>> germs);
// nontrivial B-germs at p of elements built from at most c generator moves
std::vector<std::string> truncated_germs(const Instance &inst, const RationalPoint &p, int c);
Window instance_window(const Instance &inst, const std::vector<RationalPoint> &points, int c);

// Vertex coordinate: Trivial = -2, Hidden = -1, Germ(i) = i >= 0
using Vertex = std::vector<int>;
constexpr int kTrivial = -2, kHidden = -1;

std::size_t morse(const Vertex &v);

struct CubeCoord {
  enum class Kind { Fixed, EdgeTrivialHidden, EdgeHiddenGerm } kind = Kind::Fixed;
  int value = kTrivial; // vertex label for Fixed, germ index for EdgeHiddenGerm
  bool operator==(const CubeCoord &o) const = default;
};
using Cube = std::vector<CubeCoord>;

std::size_t dimension(const Cube &c);
std::vector<Vertex> cube_vertices(const Cube &c);
bool is_singular(const Cube &c); // involves a germ coordinate
std::string to_string(const Cube &c);

struct SimplicialComplex {
  std::vector<std::string> vertices;
  std::vector<std::vector<int>> facets; // sorted vertex indices
};

// join of the discrete leaf sets {trivial} u germs over the hidden points of v
SimplicialComplex descending_link(const Window &w, const Vertex &v);
// join of discrete sets of the given sizes
SimplicialComplex join_of_discrete(const std::vector<std::size_t> &sizes);
// ranks of reduced homology over Q in degrees 0..maxdim
std::vector<long> reduced_homology(const SimplicialComplex &c, int maxdim = 2);

std::vector<Cube> sublevel_cubes(const Window &w, std::size_t n);

// sing(g) in M, g(M) = M and g(M') = M' for the cube's hidden set M and hidden-or-edge set M'
bool cube_stabilizer_membership(const Instance &inst, const InstanceElement &g, const Window &w,
                                const Cube &c);

struct OrbitCount {
  std::vector<long> by_dimension;
  long total = 0;
  std::vector<Cube> representatives;
};
// orbits of non-singular cubes at level <= n under the base group; equivalence
// is certified by transport elements of depth <= bfs_depth. Throws
// Error("Inconclusive") when a tail-compatible pair is left undecided or the
// cube count exceeds GERMKIT_MAX_CELLS (default 200000).
OrbitCount count_cube_orbits(const Instance &inst, const Window &w, std::size_t n, int bfs_depth);

} // namespace germkit
