#pragma once

#include <string>
#include <vector>

#include "germkit/core.hpp"

namespace germkit {

struct PresSize {
  Integer generators = 0;
  Integer relations = 0;
  bool operator==(const PresSize &o) const = default;
};

std::string to_string(const PresSize &p);

PresSize extension(const PresSize &p, const PresSize &q);
PresSize amalgam(const std::vector<PresSize> &sizes, const std::vector<Integer> &intersection_gens);
PresSize wreath_c2(const PresSize &p);
PresSize asc_hnn(const PresSize &p);
PresSize fix_v(const Integer &m);
PresSize tietze(const PresSize &p, const Integer &k);

struct PipelineStep {
  std::string name;
  PresSize size;
};

// Both pipelines end with the 2-generator regeneration.
std::vector<PipelineStep> pipeline_ta();
std::vector<PipelineStep> pipeline_va();

extern const PresSize kPresT;
extern const PresSize kPresF;

} // namespace germkit
