#pragma once

#include "chd/errors.hpp"

namespace chd {

// Uniform rectangular MAC layout. Scalars live at cell centers
// ((i+1/2)hx, (j+1/2)hy), i=0..nx-1, j=0..ny-1, row-major with j outer.
// Vector x-components live on x-faces (i*hx, (j+1/2)hy), i=0..nx;
// y-components on y-faces ((i+1/2)hx, j*hy), j=0..ny.
struct Grid {
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  double hx = 0.0, hy = 0.0;

  Grid() = default;
  Grid(int nx_, int ny_, double lx_, double ly_)
      : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    if (nx < 4 || ny < 4) throw ConfigError("grid: cell counts must be >= 4");
    if (lx <= 0.0 || ly <= 0.0) throw ConfigError("grid: side lengths must be > 0");
    hx = lx / nx;
    hy = ly / ny;
  }

  int cells() const { return nx * ny; }
  int xfaces() const { return (nx + 1) * ny; }
  int yfaces() const { return nx * (ny + 1); }
  double area() const { return lx * ly; }
  double cell_area() const { return hx * hy; }

  int cidx(int i, int j) const { return j * nx + i; }
  int xf(int i, int j) const { return j * (nx + 1) + i; }
  int yf(int i, int j) const { return j * nx + i; }

  double xc(int i) const { return (i + 0.5) * hx; }
  double yc(int j) const { return (j + 0.5) * hy; }

  bool same_layout(const Grid& o) const {
    return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
  }
};

}  // namespace chd
