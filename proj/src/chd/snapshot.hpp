#pragma once

#include <string>

#include "chd/field.hpp"

namespace chd {

// CHDFIELD v1: one text header line
//   CHDFIELD v1 <name> <nx> <ny> <lx> <ly> <t>
// followed by nx*ny little-endian 64-bit floats, row-major (j outer).
void write_snapshot(const std::string& path, const std::string& name,
                    const ScalarField& f, double t);

struct Snapshot {
  std::string name;
  ScalarField field;
  double t = 0.0;
};

Snapshot read_snapshot(const std::string& path);

}  // namespace chd
