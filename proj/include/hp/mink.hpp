#pragma once

// Minkowski linear algebra on R^{d,1} and the Klein ball model of H^d.
// The last coordinate is timelike: <x,y> = x_1 y_1 + ... + x_d y_d - x_{d+1} y_{d+1}.
// Everything here is a pure function on value types.

#include <Eigen/Dense>

namespace hp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Signature (d,1) bilinear form.
double mink_form(const Vec& x, const Vec& y);

// diag(1,...,1,-1) of size n x n.
Mat mink_J(int n);

// A point of the open unit ball B^d.  Construction rejects points on or
// outside the sphere (tolerance 1e-12); the metric formulas below blow up
// like L^-4 near the boundary, so an additional interior guard (1e-9) is
// applied by the curvature-sensitive operations.
struct KleinPoint {
  Vec x;
  explicit KleinPoint(Vec p);
  int dim() const { return static_cast<int>(x.size()); }
};

// L(x) = sqrt(1 - |x|^2), in (0,1].
double conformal_factor(const KleinPoint& p);

// Lift to the upper hyperboloid: L(x)^{-1} (x, 1), a unit timelike vector.
Vec hyperboloid_lift(const KleinPoint& p);

// Hyperbolic metric matrix at p: g(X,Y) = L^-2 <X,Y> + L^-4 <x,X><x,Y>.
Mat hyp_metric(const KleinPoint& p);

// Distance via arccosh(-<X,Y>) of the hyperboloid lifts (argument clamped to >= 1).
double hyp_distance(const KleinPoint& a, const KleinPoint& b);

// Hyperbolic volume density against Lebesgue measure: L^{-(d+1)}.
double hyp_volume_density(const KleinPoint& p);

// Convert a Euclidean Hessian + gradient at p into the hyperbolic Hessian:
//   Hess^H f (X,Y) = Hess f (X,Y) - L^-2 ( <x,X> df(Y) + <x,Y> df(X) ).
Mat euclid_to_hyp_hessian(const Mat& hess, const Vec& grad, const KleinPoint& p);

// tr_{g_H} Hess f = L^2 ( Lap f - Hess f(x,x) ), from the Euclidean Hessian.
double mean_trace(const Mat& hess, const KleinPoint& p);

}  // namespace hp
