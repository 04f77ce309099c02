#include "chd/ops.hpp"

#include <cmath>

namespace chd {

VectorField grad(const ScalarField& f, GradBc bc, const BoundaryFlux* flux) {
  const Grid& g = f.grid;
  if (bc == GradBc::Flux && flux == nullptr)
    throw Error("grad: Flux bc requires boundary data");
  VectorField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i)
      out.xf(i, j) = (f(i, j) - f(i - 1, j)) / g.hx;
    switch (bc) {
      case GradBc::NeumannZero:
        out.xf(0, j) = 0.0;
        out.xf(g.nx, j) = 0.0;
        break;
      case GradBc::DirichletZero:
        out.xf(0, j) = 2.0 * f(0, j) / g.hx;
        out.xf(g.nx, j) = -2.0 * f(g.nx - 1, j) / g.hx;
        break;
      case GradBc::Flux:
        out.xf(0, j) = -flux->left[static_cast<size_t>(j)];
        out.xf(g.nx, j) = flux->right[static_cast<size_t>(j)];
        break;
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.ny; ++j)
      out.yf(i, j) = (f(i, j) - f(i, j - 1)) / g.hy;
    switch (bc) {
      case GradBc::NeumannZero:
        out.yf(i, 0) = 0.0;
        out.yf(i, g.ny) = 0.0;
        break;
      case GradBc::DirichletZero:
        out.yf(i, 0) = 2.0 * f(i, 0) / g.hy;
        out.yf(i, g.ny) = -2.0 * f(i, g.ny - 1) / g.hy;
        break;
      case GradBc::Flux:
        out.yf(i, 0) = -flux->bottom[static_cast<size_t>(i)];
        out.yf(i, g.ny) = flux->top[static_cast<size_t>(i)];
        break;
    }
  }
  return out;
}

ScalarField div(const VectorField& v) {
  const Grid& g = v.grid;
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out(i, j) = (v.xf(i + 1, j) - v.xf(i, j)) / g.hx +
                  (v.yf(i, j + 1) - v.yf(i, j)) / g.hy;
  return out;
}

VectorField face_interp(const ScalarField& f) {
  const Grid& g = f.grid;
  VectorField out(g);
  for (int j = 0; j < g.ny; ++j) {
    out.xf(0, j) = f(0, j);
    for (int i = 1; i < g.nx; ++i)
      out.xf(i, j) = 0.5 * (f(i - 1, j) + f(i, j));
    out.xf(g.nx, j) = f(g.nx - 1, j);
  }
  for (int i = 0; i < g.nx; ++i) {
    out.yf(i, 0) = f(i, 0);
    for (int j = 1; j < g.ny; ++j)
      out.yf(i, j) = 0.5 * (f(i, j - 1) + f(i, j));
    out.yf(i, g.ny) = f(i, g.ny - 1);
  }
  return out;
}

double inner(const ScalarField& f, const ScalarField& g) {
  std::vector<double> prod(f.v.size());
  for (size_t k = 0; k < prod.size(); ++k) prod[k] = f.v[k] * g.v[k];
  return pairwise_sum(prod) * f.grid.cell_area();
}

double norm_l2(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double mean(const ScalarField& f) {
  return pairwise_sum(f.v) * f.grid.cell_area() / f.grid.area();
}

namespace {

// Shared face-pairing kernel; wb is the boundary-face weight (1/2 for the
// adjoint-exact quadrature, 0 to restrict to interior faces).
double face_pairing(const VectorField& v, const VectorField& w, double wb) {
  const Grid& g = v.grid;
  std::vector<double> prod;
  prod.reserve(v.x.size() + v.y.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      const double wgt = (i == 0 || i == g.nx) ? wb : 1.0;
      prod.push_back(wgt * v.xf(i, j) * w.xf(i, j));
    }
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double wgt = (j == 0 || j == g.ny) ? wb : 1.0;
      prod.push_back(wgt * v.yf(i, j) * w.yf(i, j));
    }
  return pairwise_sum(prod) * g.cell_area();
}

}  // namespace

double inner_faces(const VectorField& v, const VectorField& w) {
  return face_pairing(v, w, 0.5);
}

double norm_l2_faces(const VectorField& v) { return std::sqrt(inner_faces(v, v)); }

double inner_faces_interior(const VectorField& v, const VectorField& w) {
  return face_pairing(v, w, 0.0);
}

double boundary_integral(const VectorField& v, const ScalarField& f) {
  const Grid& g = v.grid;
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(2 * (g.nx + g.ny)));
  for (int j = 0; j < g.ny; ++j) {
    terms.push_back((-v.xf(0, j) * f(0, j) + v.xf(g.nx, j) * f(g.nx - 1, j)) * g.hy);
  }
  for (int i = 0; i < g.nx; ++i) {
    terms.push_back((-v.yf(i, 0) * f(i, 0) + v.yf(i, g.ny) * f(i, g.ny - 1)) * g.hx);
  }
  return pairwise_sum(terms);
}

std::pair<ScalarField, ScalarField> avg_to_centers(const VectorField& v) {
  const Grid& g = v.grid;
  ScalarField gx(g), gy(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      gx(i, j) = 0.5 * (v.xf(i, j) + v.xf(i + 1, j));
      gy(i, j) = 0.5 * (v.yf(i, j) + v.yf(i, j + 1));
    }
  return {std::move(gx), std::move(gy)};
}

ScalarField laplacian_neumann(const ScalarField& f) {
  return div(grad(f, GradBc::NeumannZero));
}

ScalarField laplacian_dirichlet_diag(const ScalarField& f) {
  const Grid& g = f.grid;
  ScalarField out(g);
  // Ghost value from the quadratic through (wall=0, f0, f1): f1/3 - 2*f0.
  auto ghost = [](double f0, double f1) { return f1 / 3.0 - 2.0 * f0; };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double fw = (i == 0) ? ghost(f(0, j), f(1, j)) : f(i - 1, j);
      const double fe = (i == g.nx - 1) ? ghost(f(g.nx - 1, j), f(g.nx - 2, j)) : f(i + 1, j);
      const double fs = (j == 0) ? ghost(f(i, 0), f(i, 1)) : f(i, j - 1);
      const double fn = (j == g.ny - 1) ? ghost(f(i, g.ny - 1), f(i, g.ny - 2)) : f(i, j + 1);
      out(i, j) = (fe - 2.0 * f(i, j) + fw) / (g.hx * g.hx) +
                  (fn - 2.0 * f(i, j) + fs) / (g.hy * g.hy);
    }
  return out;
}

namespace {

// Derivative along the inward direction at the wall from the first three
// cell centers (second order): (3*f1 - 2*f0 - f2)/h.
double inward_deriv(double f0, double f1, double f2, double h) {
  return (3.0 * f1 - 2.0 * f0 - f2) / h;
}

// Wall value by linear extrapolation of the first two centers (second order).
double wall_value(double f0, double f1) { return 0.5 * (3.0 * f0 - f1); }

}  // namespace

BoundaryFlux wall_normal_derivative(const ScalarField& f) {
  const Grid& g = f.grid;
  BoundaryFlux out(g);
  for (int j = 0; j < g.ny; ++j) {
    out.left[static_cast<size_t>(j)] =
        -inward_deriv(f(0, j), f(1, j), f(2, j), g.hx);
    out.right[static_cast<size_t>(j)] =
        -inward_deriv(f(g.nx - 1, j), f(g.nx - 2, j), f(g.nx - 3, j), g.hx);
  }
  for (int i = 0; i < g.nx; ++i) {
    out.bottom[static_cast<size_t>(i)] =
        -inward_deriv(f(i, 0), f(i, 1), f(i, 2), g.hy);
    out.top[static_cast<size_t>(i)] =
        -inward_deriv(f(i, g.ny - 1), f(i, g.ny - 2), f(i, g.ny - 3), g.hy);
  }
  return out;
}

BoundaryFlux wall_trace(const ScalarField& f) {
  const Grid& g = f.grid;
  BoundaryFlux out(g);
  for (int j = 0; j < g.ny; ++j) {
    out.left[static_cast<size_t>(j)] = wall_value(f(0, j), f(1, j));
    out.right[static_cast<size_t>(j)] = wall_value(f(g.nx - 1, j), f(g.nx - 2, j));
  }
  for (int i = 0; i < g.nx; ++i) {
    out.bottom[static_cast<size_t>(i)] = wall_value(f(i, 0), f(i, 1));
    out.top[static_cast<size_t>(i)] = wall_value(f(i, g.ny - 1), f(i, g.ny - 2));
  }
  return out;
}

VectorField face_multiply(const VectorField& a, const VectorField& v) {
  VectorField out(v.grid);
  for (size_t k = 0; k < out.x.size(); ++k) out.x[k] = a.x[k] * v.x[k];
  for (size_t k = 0; k < out.y.size(); ++k) out.y[k] = a.y[k] * v.y[k];
  return out;
}

}  // namespace chd
