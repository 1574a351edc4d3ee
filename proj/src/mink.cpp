#include "hp/mink.hpp"

#include <cmath>
#include <stdexcept>

namespace hp {

double mink_form(const Vec& x, const Vec& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("mink_form: mismatched or undersized vectors");
  const long n = x.size();
  return x.head(n - 1).dot(y.head(n - 1)) - x[n - 1] * y[n - 1];
}

Mat mink_J(int n) {
  Mat J = Mat::Identity(n, n);
  J(n - 1, n - 1) = -1.0;
  return J;
}

KleinPoint::KleinPoint(Vec p) : x(std::move(p)) {
  if (x.size() < 1) throw std::invalid_argument("KleinPoint: empty coordinate vector");
  if (!x.allFinite()) throw std::domain_error("KleinPoint: non-finite coordinates");
  if (x.squaredNorm() >= 1.0 - 1e-12)
    throw std::domain_error("KleinPoint: not strictly inside the unit ball");
}

namespace {
// Guard for the curvature-sensitive formulas (L^-4 blow-up).
void require_interior(const KleinPoint& p) {
  if (p.x.norm() > 1.0 - 1e-9)
    throw std::domain_error("KleinPoint too close to the boundary for metric operations");
}
}  // namespace

double conformal_factor(const KleinPoint& p) {
  return std::sqrt(1.0 - p.x.squaredNorm());
}

Vec hyperboloid_lift(const KleinPoint& p) {
  const int d = p.dim();
  Vec X(d + 1);
  X.head(d) = p.x;
  X[d] = 1.0;
  return X / conformal_factor(p);
}

Mat hyp_metric(const KleinPoint& p) {
  require_interior(p);
  const double L2 = 1.0 - p.x.squaredNorm();
  return Mat::Identity(p.dim(), p.dim()) / L2 + (p.x * p.x.transpose()) / (L2 * L2);
}

double hyp_distance(const KleinPoint& a, const KleinPoint& b) {
  const double c = -mink_form(hyperboloid_lift(a), hyperboloid_lift(b));
  return std::acosh(std::max(c, 1.0));
}

double hyp_volume_density(const KleinPoint& p) {
  const double L = conformal_factor(p);
  return std::pow(L, -(p.dim() + 1));
}

Mat euclid_to_hyp_hessian(const Mat& hess, const Vec& grad, const KleinPoint& p) {
  require_interior(p);
  const double L2 = 1.0 - p.x.squaredNorm();
  Mat corr = p.x * grad.transpose();
  return hess - (corr + corr.transpose()) / L2;
}

double mean_trace(const Mat& hess, const KleinPoint& p) {
  require_interior(p);
  const double L2 = 1.0 - p.x.squaredNorm();
  return L2 * (hess.trace() - p.x.dot(hess * p.x));
}

}  // namespace hp
