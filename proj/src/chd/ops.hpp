#pragma once

#include <utility>

#include "chd/field.hpp"

namespace chd {

// Boundary closure for the face gradient.
//  NeumannZero:   boundary faces carry 0.
//  DirichletZero: odd ghost (ghost = -interior), boundary-face value 2*f_adj/h
//                 signed so the wall value is 0.
//  Flux:          boundary faces carry the prescribed outward-normal
//                 derivative from a BoundaryFlux, converted to component sign.
enum class GradBc { NeumannZero, DirichletZero, Flux };

VectorField grad(const ScalarField& f, GradBc bc, const BoundaryFlux* flux = nullptr);

// Per-cell (v_x right - v_x left)/hx + (v_y top - v_y bottom)/hy.
ScalarField div(const VectorField& v);

// Arithmetic mean of adjacent cells on interior faces, one-sided copy on
// boundary faces. Used both for transport fluxes and the Darcy force; the
// pressure RHS and velocity update must share it for div u = S to telescope.
VectorField face_interp(const ScalarField& f);

// Midpoint-rule quadrature on cells.
double inner(const ScalarField& f, const ScalarField& g);
double norm_l2(const ScalarField& f);
double mean(const ScalarField& f);

// Face quadrature: interior faces weigh hx*hy, boundary faces hx*hy/2
// (half cells at walls). With this pairing the Dirichlet-ghost gradient is
// the exact negative adjoint of div, which the discrete energy identity and
// the div u = S constraint rely on.
double inner_faces(const VectorField& v, const VectorField& w);
double norm_l2_faces(const VectorField& v);
// Same quadrature restricted to interior faces (realizes ||grad f||^2 for
// fields whose boundary data lives in the BC, e.g. ||grad mu||).
double inner_faces_interior(const VectorField& v, const VectorField& w);

// Discrete boundary integral of (v . n) * trace(f), trace = adjacent cell.
double boundary_integral(const VectorField& v, const ScalarField& f);

// Face-to-center averages of a gradient-like field: per-cell (gx, gy).
std::pair<ScalarField, ScalarField> avg_to_centers(const VectorField& v);

// div(grad(f, NeumannZero)): the 5-point Laplacian with homogeneous Neumann
// closure used by the chemical potential and initial data.
ScalarField laplacian_neumann(const ScalarField& f);

// Diagnostic Laplacian for homogeneous-Dirichlet fields: ghosts from a
// quadratic fit through (wall=0, first cell, second cell), first-order
// accurate at boundary cells (the odd ghost would be O(1) there).
ScalarField laplacian_dirichlet_diag(const ScalarField& f);

// One-sided second-order wall derivatives and traces (for the boundary
// relation diagnostic): outward-normal derivative and wall value of a
// cell field along each edge, indexed like BoundaryFlux.
BoundaryFlux wall_normal_derivative(const ScalarField& f);
BoundaryFlux wall_trace(const ScalarField& f);

// Scale every face value: out = a .* v (a is a face field of same shape).
VectorField face_multiply(const VectorField& a, const VectorField& v);

}  // namespace chd
