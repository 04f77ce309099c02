#pragma once

#include <span>
#include <vector>

#include "chd/grid.hpp"

namespace chd {

// Deterministic pairwise tree reduction; the summation order is fixed so
// results do not depend on threading or chunking anywhere above it.
double pairwise_sum(std::span<const double> a);

// Cell-centered scalar field (phi, mu, q, S carriers).
struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), v(static_cast<size_t>(g.cells()), fill) {}

  double& operator()(int i, int j) { return v[static_cast<size_t>(grid.cidx(i, j))]; }
  double operator()(int i, int j) const { return v[static_cast<size_t>(grid.cidx(i, j))]; }
  int size() const { return grid.cells(); }
};

// Face-centered vector field (u, fluxes like phi*grad(mu)).
struct VectorField {
  Grid grid;
  std::vector<double> x;  // (nx+1)*ny x-face components
  std::vector<double> y;  // nx*(ny+1) y-face components

  VectorField() = default;
  explicit VectorField(const Grid& g, double fill = 0.0)
      : grid(g),
        x(static_cast<size_t>(g.xfaces()), fill),
        y(static_cast<size_t>(g.yfaces()), fill) {}

  double& xf(int i, int j) { return x[static_cast<size_t>(grid.xf(i, j))]; }
  double xf(int i, int j) const { return x[static_cast<size_t>(grid.xf(i, j))]; }
  double& yf(int i, int j) { return y[static_cast<size_t>(grid.yf(i, j))]; }
  double yf(int i, int j) const { return y[static_cast<size_t>(grid.yf(i, j))]; }
};

// Prescribed normal-flux boundary data (outward normal derivative values),
// one entry per boundary face on each edge.
struct BoundaryFlux {
  std::vector<double> left, right;  // size ny
  std::vector<double> bottom, top;  // size nx

  BoundaryFlux() = default;
  explicit BoundaryFlux(const Grid& g, double fill = 0.0)
      : left(static_cast<size_t>(g.ny), fill),
        right(static_cast<size_t>(g.ny), fill),
        bottom(static_cast<size_t>(g.nx), fill),
        top(static_cast<size_t>(g.nx), fill) {}
};

}  // namespace chd
