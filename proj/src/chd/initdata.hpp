#pragma once

#include <cstdint>
#include <string>

#include "chd/field.hpp"

namespace chd {

struct InitSpec {
  enum class Kind { Uniform, TanhDisc, Random, Snapshot };
  Kind kind = Kind::Uniform;
  double value = 0.0;  // uniform level
  double cx = 0.5, cy = 0.5, radius = 0.2, width = 0.0625;
  double inner = 0.9, outer = -0.9;
  double mean = 0.0, amplitude = 0.05;
  std::uint64_t seed = 0;
  std::string path;
  double clip_margin = 0.05;
};

// Deterministic initial data; generated fields are clipped to
// [-1 + clip_margin, 1 - clip_margin]; snapshots are loaded unmodified.
ScalarField generate(const InitSpec& spec, const Grid& grid);

}  // namespace chd
