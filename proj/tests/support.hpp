#pragma once

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "germkit/random.hpp"

namespace testing {

// GERMKIT_SEED overrides the pinned seed of every randomized suite
inline std::uint64_t seed(std::uint64_t pinned) {
  if (const char *s = std::getenv("GERMKIT_SEED"))
    return std::strtoull(s, nullptr, 10);
  return pinned;
}

inline germkit::gen::Rng rng(std::uint64_t pinned) { return germkit::gen::Rng(seed(pinned)); }

inline std::filesystem::path fixtures() { return GERMKIT_FIXTURES; }

inline std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F> std::string error_kind(F &&f) {
  try {
    f();
  } catch (const germkit::Error &e) {
    return e.kind();
  }
  return "";
}

} // namespace testing
