#pragma once

// Contracting-flow route to the boundary heights: the geodesic flow on unit
// tangent frames of the hyperboloid, lightlike planes (w, h), the frame
// distance d_x, the flow on sampled sections, measured contraction rates, and
// the equivariant fixed-point iteration whose heights reproduce the boundary
// series of a cocycle.

#include <utility>
#include <vector>

#include "hp/lamination.hpp"
#include "hp/mink.hpp"

namespace hp {

// <x,x> = -1 on the upper sheet, <v,v> = 1, <x,v> = 0.
struct UnitTangent {
  Vec x;
  Vec v;
};

// Frame with base point x (hyperboloid lift) and backward ideal endpoint at
// angle theta: v = x + w / <x,w> for w = (cos theta, sin theta, 1).
UnitTangent frame_at(const Vec& x, double theta);
// Frame based over a Klein point with v in the ball direction of angle alpha.
UnitTangent frame_klein(const KleinPoint& p, double alpha);

// max invariant defect of the frame
double frame_defect(const UnitTangent& u);

// A lightlike plane {y : <y, w> = h}: w future lightlike; h transforms with
// the normalization of w, so (lambda w, lambda h) is the same plane.  Stored
// normalized against a base point b, <b, w> = -1 (the reference b = (0,0,1)
// gives w = (xi, 1) over the ideal point xi).  For a coboundary v the
// invariant plane field over xi is h(xi) = -<(xi,1), v> = v_3 - <xi, vbar>.
struct LightlikePlane {
  Vec w;
  double h = 0.0;
};

// Sampled section of the plane bundle over frames; values[i] is normalized
// against frames[i].x.
struct SectionSample {
  std::vector<UnitTangent> frames;
  std::vector<LightlikePlane> values;
};

// (cosh t x + sinh t v, sinh t x + cosh t v); renormalizes (Minkowski
// Gram-Schmidt) if the drift exceeds 1e-8.
UnitTangent geodesic_flow(const UnitTangent& u, double t);

// Distance between two planes seen from frame_x: both renormalized to
// <frame_x, w> = -1, then sqrt(-2 <w1,w2> + (h1 - h2)^2).
double dx_metric(const Vec& frame_x, const LightlikePlane& p,
                 const LightlikePlane& q);

// Flow the section: frames advance by t and each plane is re-expressed in
// its new frame, w_t = lambda_t w, h_t = lambda_t h with
// lambda_t = 1 / (cosh t - sinh t <v, w>) > 0 for <v,w> in [-1, 1).
// Delta^- planes (w = x - v) give lambda_t = e^-t and stay Delta^-;
// Delta^+ planes (w = x + v) give lambda_t = e^t.
SectionSample flow_on_sections(const SectionSample& s, double t);

// max over frames of dx_metric between the sections (same frame sets).
double section_distance(const SectionSample& s1, const SectionSample& s2);

// Least-squares fit of log D(Phi^t s1, Phi^t s2) = log C - a t over
// t in [2, t_max]; returns (C, a).  Requires both sections uniformly inside
// aleph^+ (<v,w> <= 1 - 1e-6 at every frame); returns (0, 1) for identical
// sections.
std::pair<double, double> contraction_rate(const SectionSample& s1,
                                           const SectionSample& s2,
                                           double t_max);

// Fixed point of the tau-twisted flow on Delta^- -valued sections.  Heights
// are iterated in the collapsed coordinate (backward ideal angle theta);
// each step flows a frame backward by t_step, folds the base point into the
// Dirichlet domain by a group element g, reads the height at the folded
// angle (linear interpolation over the sampled angles) and transports the
// plane back by (A, tau(g))^-1.  Stops when successive heights differ by
// less than 1e-8; throws on non-convergence within iters.  The resulting
// heights at the sample angles equal the boundary series b_tau.
SectionSample fixed_point_section(const SurfaceGroup& G, const Cocycle& tau,
                                  const std::vector<UnitTangent>& frames,
                                  double t_step = 4.0, int iters = 50);

// Height of a section value re-normalized to the reference (0,0,1), i.e. the
// boundary value it represents at its ideal point.
double reference_height(const LightlikePlane& p);
// Backward ideal angle of a frame.
double backward_angle(const UnitTangent& u);

}  // namespace hp
