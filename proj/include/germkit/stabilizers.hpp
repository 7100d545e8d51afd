#pragma once

#include <string>
#include <vector>

#include "germkit/cantor.hpp"

namespace germkit {

// V_{d,r} element that acts as alpha psi -> alpha beta psi near s = alpha beta-bar
// (attracting, germ exponent +1) and is the identity on a cone neighborhood of
// every point of `avoid`.
VElement spiral_generator(const RationalPoint &s, int d = 2, int r = 1,
                          const std::vector<RationalPoint> &avoid = {});

// shortest prefix A of s with t(C_A) a prefix replacement A -> A gamma
// (gamma nonempty) and s = A gamma-bar
RootedWord basin(const VElement &t, const RationalPoint &s);

// g = t^(i+j) h t^-j with h the identity on C_A
struct HNNWitness {
  long i = 0;
  long j = 0;
  VElement h;
};

HNNWitness hnn_decompose(const VElement &g, const RationalPoint &s, const VElement &t);
// t^(i+j) h t^-j
VElement reassemble(const HNNWitness &w, const VElement &t);
// one witness per point of S, each step decomposing the previous h; the spiral
// generators used are returned alongside
struct HNNChain {
  std::vector<VElement> generators;
  std::vector<HNNWitness> witnesses;
};
HNNChain hnn_decompose_chain(const VElement &g, const std::vector<RationalPoint> &points);

struct AscendingReport {
  bool t_outside_h = true;     // t^i moves C_A for i = 1..bound
  bool conjugates_inside = true; // t^-1 h t fixes C_A for every generator h
  bool covers = true;          // every sample decomposes and reassembles exactly
  std::vector<std::string> failures;
  bool ok() const { return t_outside_h && conjugates_inside && covers; }
};

// H = Fix(C_A) for the declared basin A
AscendingReport verify_ascending(const VElement &t, const RationalPoint &s, const RootedWord &a,
                                 const std::vector<VElement> &h_generators,
                                 const std::vector<VElement> &samples = {}, int bound = 8);
// A = basin(t, s)
AscendingReport verify_ascending(const VElement &t, const RationalPoint &s,
                                 const std::vector<VElement> &h_generators,
                                 const std::vector<VElement> &samples = {}, int bound = 8);

// elements supported off C_A, for use as H generators
std::vector<VElement> basin_complement_generators(const VElement &t, const RationalPoint &s);

} // namespace germkit
