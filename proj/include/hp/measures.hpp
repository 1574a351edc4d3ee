#pragma once

// Weak mean-curvature measure, the S1 asymmetric norm and the convex-core
// volume: quadrature over the Dirichlet polygon with the hyperbolic density
// L^-3, test-function pairings, and the norm report with composite error bar.

#include <string>
#include <vector>

#include "hp/duality.hpp"
#include "hp/envelope.hpp"
#include "hp/lamination.hpp"
#include "hp/mean_solver.hpp"

namespace hp {

// C^2 bump (1 - |x-c|^2/R^2)^3 on the disk |x-c| < R, zero outside; value,
// gradient and Hessian in closed form.  Support must be strictly interior:
// |c| + R < 1.
struct TestFunction {
  Vec center;
  double radius = 0.0;
  TestFunction(const KleinPoint& c, double R);
  double value(const Vec& x) const;
  Vec grad(const Vec& x) const;
  Mat hess(const Vec& x) const;
};

// Weak pairing of the mean-curvature measure of h against phi.  For smooth h
// the measure has density (Lap h - Hess h(x,x)) L^-2 dx; the pairing moves
// the full operator onto the test function,
//   integral of h * sum_ij d_i d_j ((delta_ij - x_i x_j) L^-2 phi),
// which is exact for nonsmooth h (a kink on a line contributes its angle
// times hyperbolic length; an affine h contributes zero).  Dropping the
// derivatives of the weight (pairing h L^-2 with Lap phi - Hess phi(x,x))
// does not reproduce either identity.
double mm_weak(const HeightFn& h, const TestFunction& phi, int n_cells = 96);
double mm_weak(const ScalarField& h, const TestFunction& phi, int n_cells = 96);
double mm_weak(const Wedge& w, const TestFunction& phi, int n_cells = 96);

// Same pairing for a C^2 test function given only as values (derivatives by
// central differences); support contained in |x| <= support_radius < 1.
double mm_weak_fd(const HeightFn& h, const std::function<double(const Vec&)>& phi,
                  double support_radius, int n_cells = 96);

// d=1 analogue on (-1,1) with the bump (1 - x^2/R^2)^3: pairs h with
// ((1-x^2) phi / sqrt(1-x^2))'' so that h = |x| gives exactly 2 phi(0).
double mm_weak_1d(const std::function<double(double)>& h, double radius,
                  int n_panels = 2000);

// Hyperbolic line integral of phi along the chord of l.
double line_integral_hyp(const GeodesicLine& l, const TestFunction& phi,
                         int n = 512);

// Gauss nodes on the Dirichlet polygon at the origin (fan of triangles,
// n_tri x n_tri tensor rule each).  Weights carry the hyperbolic area density
// L^-3, so area = sum of weights (= 4 pi for a genus-2 group).  Nodes with
// L <= 1e-3 are dropped and their area accumulated in truncated_area.
struct DomainQuadrature {
  std::vector<Vec> nodes;
  Vec weights;
  double area = 0.0;
  double truncated_area = 0.0;
  std::vector<Vec> polygon;  // CCW vertices
};
DomainQuadrature dirichlet_quadrature(const SurfaceGroup& G, int n_tri = 48,
                                      int word_len = 8);

struct QuadratureSettings {
  int n_r = 192;
  int n_theta = 512;      // should divide n_boundary (ring data stays exact)
  int n_boundary = 2048;  // boundary samples N
  int word_len = 8;
  int n_tri = 48;
  double tol = 1e-9;  // PDE residual tolerance
};

struct NormReport {
  double s1_plus = 0.0;
  double s1_minus = 0.0;
  double volume = 0.0;
  double lamination_length = 0.0;  // sum |coeff| omega l, laminations only
  double area_check = 0.0;
  double error_bar = 0.0;
  QuadratureSettings settings;
};

// Sum of weight * translation_length over the curves.
double lamination_length(const SimplicialLamination& lam);
double lamination_length(const Cocycle& tau);

// ||tau||_S1 = d * integral over the Dirichlet domain of
// (h_mean - h_minus) / L against the hyperbolic area (d = 2).  The 1/L is
// forced: a difference of equivariant heights transforms with the conformal
// ratio, so only its quotient by L descends to the surface; the prefactor d
// makes the norm the total mean-curvature measure of h_minus (the density
// identity (Lap g - Hess g(x,x)) L^-d = (Lap_H (g/L) - d g/L) omega_H), which
// in turn gives sum of weight * length for simplicial laminations.  Throws if
// the computed domain area is off 4 pi by more than 0.5%, or if the integrand
// dips below -1e-6 at a node (sandwich violation).
double s1_norm(const SurfaceGroup& G, const Cocycle& tau,
               const QuadratureSettings& qs = {});

// vol CC = (d/2) * integral of (h_plus - h_minus) / L against the hyperbolic
// area, so that volume = (s1(tau) + s1(-tau)) / 2 holds exactly.
double core_volume(const SurfaceGroup& G, const Cocycle& tau,
                   const QuadratureSettings& qs = {});

// Full pipeline: boundary series once, both envelopes, one PDE solve (the
// mean surface of -tau is the negation), all three integrals, and an error
// bar = quadrature-refinement delta + boundary-refinement delta (N/2)
// + grid-refinement delta (n_r/2, n_theta/2) + residual bound.
NormReport norm_report(const SurfaceGroup& G, const Cocycle& tau,
                       const QuadratureSettings& qs = {});

}  // namespace hp
