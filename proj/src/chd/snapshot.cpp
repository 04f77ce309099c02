#include "chd/snapshot.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "chd/errors.hpp"

namespace chd {

void write_snapshot(const std::string& path, const std::string& name,
                    const ScalarField& f, double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("snapshot: cannot open " + path + " for writing");
  char header[256];
  std::snprintf(header, sizeof(header), "CHDFIELD v1 %s %d %d %.17g %.17g %.17g\n",
                name.c_str(), f.grid.nx, f.grid.ny, f.grid.lx, f.grid.ly, t);
  out << header;
  static_assert(sizeof(double) == 8);
  out.write(reinterpret_cast<const char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!out) throw IoError("snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("snapshot: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("snapshot: missing header in " + path);
  std::istringstream hs(line);
  std::string magic, version;
  Snapshot s;
  int nx = 0, ny = 0;
  double lx = 0, ly = 0;
  hs >> magic >> version >> s.name >> nx >> ny >> lx >> ly >> s.t;
  if (!hs || magic != "CHDFIELD" || version != "v1")
    throw IoError("snapshot: bad header in " + path);
  s.field = ScalarField(Grid(nx, ny, lx, ly));
  in.read(reinterpret_cast<char*>(s.field.v.data()),
          static_cast<std::streamsize>(s.field.v.size() * sizeof(double)));
  if (in.gcount() !=
      static_cast<std::streamsize>(s.field.v.size() * sizeof(double)))
    throw IoError("snapshot: truncated payload in " + path);
  return s;
}

}  // namespace chd
