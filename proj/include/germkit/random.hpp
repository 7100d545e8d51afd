#pragma once

#include <random>
#include <vector>

#include "germkit/cantor.hpp"
#include "germkit/plmap.hpp"
#include "germkit/rover.hpp"

// Seeded generators for property suites.
namespace germkit::gen {

using Rng = std::mt19937_64;

RationalPoint random_point(Rng &rng, int d = 2, int r = 1, int max_pre = 4, int max_period = 3);
// point of the form w 0-bar or w (d-1)-bar
RationalPoint random_spiral_point(Rng &rng, int d = 2, int max_base = 4);
// rational number in [0,1) with binary expansion of bounded size
Rational random_circle_point(Rng &rng, int max_pre = 4, int max_period = 3);

VElement random_v(Rng &rng, int d = 2, int r = 1, int splits = 4);
PLCircleMap random_t(Rng &rng, int splits = 4);
TbarElement random_tbar(Rng &rng, int length = 3);
// nontrivial germs at distinct spiral points
std::vector<GermPrescription> random_prescription(Rng &rng, int max_points = 3);
VAElement random_va(Rng &rng, int max_spirals = 2, int splits = 3);
TAElement random_ta(Rng &rng, int max_spirals = 2, int splits = 3);
// words in T and f0, the latter contributing breakpoints in the orbit of 1/3
PLCircleMap random_example2(Rng &rng, int length = 3, int splits = 3);
RNElement random_rn(Rng &rng, const AutomatonRef &a, int splits = 3, int max_word = 2);
// random V element fixing s
VElement random_fix(Rng &rng, const RationalPoint &s, int splits = 4);

} // namespace germkit::gen
