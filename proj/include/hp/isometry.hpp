#pragma once

// The isometry group O_+(d,1) ⋉ R^{d,1} of Minkowski space, its action on the
// Klein ball, on cylindrical co-Minkowski coordinates (x, h), and the induced
// action on height functions over B^d.

#include <functional>

#include "hp/mink.hpp"

namespace hp {

// (A, v): A preserves the form and the upper sheet, v is a translation.
// Group law: (A1,v1)(A2,v2) = (A1 A2, v1 + A1 v2).
struct Isometry {
  Mat A;
  Vec v;

  static Isometry identity(int d);
  Isometry inverse() const;
  // Action on Minkowski space: y -> A y + v.
  Vec apply(const Vec& y) const { return A * y + v; }
};

// A point of co-Minkowski space in cylindrical coordinates.
struct CoMinkPoint {
  KleinPoint x;
  double h;
};

// A^T J A = J within tol and A_{d+1,d+1} > 0.
bool validate(const Isometry& iso, double tol = 1e-10);

// Orthogonality defect |A^T J A - J|_max.
double j_defect(const Mat& A);

// Re-orthonormalize A w.r.t. the Minkowski form (Gram-Schmidt on columns,
// spacelike columns first, timelike last).  Used after long word products.
Mat j_orthonormalize(const Mat& A);

Isometry compose(const Isometry& a, const Isometry& b);

// Projective action on the Klein ball: A.x = proj of A (x,1).
KleinPoint act_klein(const Mat& A, const KleinPoint& x);

// The last coordinate of A (x,1); equals L(x)/L(A.x), always positive on O_+.
double klein_last_coordinate(const Mat& A, const KleinPoint& x);

// (A,v)(x,h) = (A.x, (L(A.x)/L(x)) h + <A.x, vbar> - v_{d+1}).
CoMinkPoint act_comink(const Isometry& iso, const CoMinkPoint& p);

using HeightFn = std::function<double(const KleinPoint&)>;

// ((A,v)h)(x) = (L(x)/L(A^-1.x)) h(A^-1.x) + <x, vbar> - v_{d+1}.
HeightFn act_function(const Isometry& iso, HeightFn h);

// Max over a boundary/interior sample set of |(iso.h_P)(x) - h_{iso(P)}(x)|
// where h_P(x) = <P,(x,1)>_{d,1}.  Duality equivariance probe; contract: ~0.
double dual_action_check(const Isometry& iso, const Vec& P, int nsamples = 64);

// Builders (d=2 unless stated): rotation by angle in the ball plane, and a
// boost of given rapidity along the unit direction (cos a, sin a).
Mat rotation2(double angle);
Mat boost2(double rapidity, double direction_angle = 0.0);
// Generic boost in the (e_i, e_{d+1}) plane of R^{d,1}.
Mat boost(int d, int axis, double rapidity);

}  // namespace hp
