#pragma once

// Hyperplane <-> point duality between Minkowski and co-Minkowski space,
// canonical maps of geodesic lines, and wedges.

#include "hp/isometry.hpp"
#include "hp/mink.hpp"

namespace hp {

// h(x) = <x, vbar> + c on B^d; its graph is a spacelike hyperplane.
struct AffineFunction {
  Vec vbar;
  double c = 0.0;
  double operator()(const KleinPoint& x) const { return x.x.dot(vbar) + c; }
  double eval(const Vec& x) const { return x.dot(vbar) + c; }
};

// A geodesic of the Klein disk, stored as the Euclidean foot of the
// perpendicular from the origin (p) and a unit normal n with p = |p| n.
// The side l^- containing the origin is <x - p, n> < 0.
struct GeodesicLine {
  Vec p;
  Vec n;

  // From foot + normal.  If the line passes through the origin the caller
  // must supply n explicitly (the side choice is free there).
  static GeodesicLine from_foot(Vec p, Vec n_hint = Vec());
  // From two distinct ideal endpoints on the unit sphere.
  static GeodesicLine from_endpoints(const Vec& a, const Vec& b);
  // Ideal endpoints of the chord (d=2).
  std::pair<Vec, Vec> endpoints() const;
  // Signed side value <x - p, n>; positive on l^+.
  double side(const Vec& x) const { return (x - p).dot(n); }
};

// h = h_minus + angle * h_l * 1_{l^+}; convex iff angle > 0.
struct Wedge {
  AffineFunction h_minus;
  double angle;
  GeodesicLine line;
};

// Dual point of the affine function h(x) = <x,v> + c: the Minkowski point
// (v, -c).  Involution partner of dual_plane.
Vec dual_point(const AffineFunction& h);

// Affine function of the plane dual to P: h(x) = <P,(x,1)>_{d,1}.
AffineFunction dual_plane(const Vec& P);

// Canonical map of the line: h_l(x) = <x - p, n> / L(p).
double canonical_map(const GeodesicLine& l, const KleinPoint& x);
double canonical_map(const GeodesicLine& l, const Vec& x);

// Unit spacelike dual normal v_l = (n, |p|) / L(p); <v_l,v_l> = 1.
Vec normal_vector(const GeodesicLine& l);

// Transport the line by a linear isometry (endpoints mapped projectively).
GeodesicLine act_line(const Mat& A, const GeodesicLine& l);

double wedge_eval(const Wedge& w, const KleinPoint& x);

// Recover the angle of the transformed wedge (A,v)w by measuring the jump of
// the normal derivative across A.l; contract: equals w.angle.
double wedge_angle_invariance(const Isometry& iso, const Wedge& w);

}  // namespace hp
