#pragma once

// The mean surface: Dirichlet solver for the degenerate elliptic equation
//   (1 - r^2) h_rr + h_r / r + h_tt / r^2 = 0
// (the polar form of Lap h - Hess h(x,x) = 0) on the unit disk, the Mean
// operator Mean(h) = L (Lap h - Hess h(x,x)) / 2, the CMC family h - tL, and
// second-fundamental-form extraction from solved fields.

#include <functional>

#include "hp/lamination.hpp"
#include "hp/mink.hpp"

namespace hp {

// Polar mesh: radii[0] = 0 (shared pole node), radii rising to 1 (boundary
// ring carrying Dirichlet data), with the last interior node at 1 - 1/(2 n_r)
// and interior gaps growing geometrically (factor 1.05, capped at 8x) away
// from the boundary, where the radial coefficient degenerates.
struct PolarGrid {
  Vec radii;  // size n_r + 2: pole, n_r interior nodes, ring at 1
  int n_theta = 0;
  static PolarGrid graded(int n_r, int n_theta);
  double theta(int j) const { return 2.0 * M_PI * j / n_theta; }
};

struct ScalarField {
  PolarGrid grid;
  Mat values;  // radii.size() x n_theta; row 0 is the pole (constant)
  // linear in r, cubic in theta; theta wraps, r clamped to [0, 1]
  double eval(const KleinPoint& x) const;
  double eval_polar(double r, double theta) const;
};

// Sample f(r, theta) on a graded grid (f must be finite at r = 1).
ScalarField sample_field(int n_r, int n_theta,
                         const std::function<double(double, double)>& f);

struct MeanProblem {
  BoundaryFunction boundary;
  int n_r = 192;
  int n_theta = 512;
  double tol = 1e-9;  // max residual of the scaled discrete equation
};

// Unique solution of the discrete Dirichlet problem.  The theta stencil uses
// the trigonometric denominator 2 - 2 cos(dt), which makes restrictions of
// affine functions exact discrete solutions.  Throws on solver failure or
// residual above tol.
ScalarField solve_mean(const MeanProblem& problem);

// Mean(h)(x) at the grid node nearest to x, by the solver's own stencils.
double mean_curvature(const ScalarField& h, const KleinPoint& x);

// h_mean - t L on the same grid; Mean of the result is Mean(h_mean) + t.
ScalarField cmc_family(const ScalarField& h_mean, double t);

// II_h(x) = L^{-1} Hess h at the nearest grid node (Cartesian components from
// polar finite differences).
Mat second_form(const ScalarField& h, const KleinPoint& x);

// max over interior sample nodes and directions of
// |d_x (Hess h)_{yz} - d_y (Hess h)_{xz}|: the Codazzi defect of L * II_h,
// zero for exact fields up to the finite-difference noise floor.
double codazzi_defect(const ScalarField& h);

}  // namespace hp
