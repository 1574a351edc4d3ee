#include "hp/isometry.hpp"

#include <cmath>
#include <stdexcept>

namespace hp {

Isometry Isometry::identity(int d) {
  return {Mat::Identity(d + 1, d + 1), Vec::Zero(d + 1)};
}

Isometry Isometry::inverse() const {
  const long n = A.rows();
  Mat J = mink_J(static_cast<int>(n));
  Mat Ainv = J * A.transpose() * J;  // A^-1 = J A^T J for J-orthogonal A
  return {Ainv, -(Ainv * v)};
}

double j_defect(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  Mat J = mink_J(n);
  return (A.transpose() * J * A - J).cwiseAbs().maxCoeff();
}

bool validate(const Isometry& iso, double tol) {
  const long n = iso.A.rows();
  if (iso.A.cols() != n || iso.v.size() != n) return false;
  if (!iso.A.allFinite() || !iso.v.allFinite()) return false;
  if (j_defect(iso.A) > tol) return false;
  return iso.A(n - 1, n - 1) > 0.0;  // preserves the upper sheet
}

Mat j_orthonormalize(const Mat& A) {
  // Newton step for the J-orthogonal polar factor: B <- (B + J B^-T J)/2.
  // Unlike Gram-Schmidt this moves B only by O(defect), which matters for
  // the element-deduplication threshold in the word enumeration (big-entry
  // matrices would otherwise drift by ~1e-6 per renormalization).
  const int n = static_cast<int>(A.rows());
  Mat J = mink_J(n);
  Mat B = A;
  for (int it = 0; it < 4 && j_defect(B) > 1e-13; ++it)
    B = 0.5 * (B + J * B.inverse().transpose() * J);
  return B;
}

Isometry compose(const Isometry& a, const Isometry& b) {
  return {a.A * b.A, a.v + a.A * b.v};
}

double klein_last_coordinate(const Mat& A, const KleinPoint& x) {
  const int d = x.dim();
  Vec lift(d + 1);
  lift.head(d) = x.x;
  lift[d] = 1.0;
  return (A * lift)[d];
}

KleinPoint act_klein(const Mat& A, const KleinPoint& x) {
  const int d = x.dim();
  Vec lift(d + 1);
  lift.head(d) = x.x;
  lift[d] = 1.0;
  Vec y = A * lift;
  if (y[d] <= 0.0)
    throw std::domain_error("act_klein: sheet not preserved (invalid matrix)");
  return KleinPoint(y.head(d) / y[d]);
}

CoMinkPoint act_comink(const Isometry& iso, const CoMinkPoint& p) {
  const int d = p.x.dim();
  KleinPoint Ax = act_klein(iso.A, p.x);
  // L(A.x)/L(x) = 1 / (A (x,1))_{d+1}
  double ratio = 1.0 / klein_last_coordinate(iso.A, p.x);
  double h = ratio * p.h + Ax.x.dot(iso.v.head(d)) - iso.v[d];
  return {Ax, h};
}

HeightFn act_function(const Isometry& iso, HeightFn h) {
  Isometry inv = iso.inverse();
  Mat Ainv = inv.A;
  Vec v = iso.v;
  return [Ainv, v, h](const KleinPoint& x) {
    const int d = x.dim();
    // L(x)/L(A^-1.x) = (A^-1 (x,1))_{d+1}
    double ratio = klein_last_coordinate(Ainv, x);
    KleinPoint y = act_klein(Ainv, x);
    return ratio * h(y) + x.x.dot(v.head(d)) - v[d];
  };
}

double dual_action_check(const Isometry& iso, const Vec& P, int nsamples) {
  const int d = static_cast<int>(P.size()) - 1;
  if (d != 2) throw std::invalid_argument("dual_action_check: implemented for d=2");
  auto hP = [](const Vec& Q) {
    return [Q](const KleinPoint& x) {
      const int dd = x.dim();
      return x.x.dot(Q.head(dd)) - Q[dd];
    };
  };
  HeightFn lhs = act_function(iso, hP(P));
  auto rhs = hP(iso.apply(P));
  double worst = 0.0;
  for (int i = 0; i < nsamples; ++i) {
    double th = 2.0 * M_PI * i / nsamples;
    for (double r : {0.0, 0.35, 0.7, 0.95}) {
      Vec x(2);
      x << r * std::cos(th), r * std::sin(th);
      KleinPoint p(x);
      worst = std::max(worst, std::abs(lhs(p) - rhs(p)));
    }
  }
  return worst;
}

Mat rotation2(double angle) {
  Mat R = Mat::Identity(3, 3);
  R(0, 0) = std::cos(angle);
  R(0, 1) = -std::sin(angle);
  R(1, 0) = std::sin(angle);
  R(1, 1) = std::cos(angle);
  return R;
}

Mat boost(int d, int axis, double rapidity) {
  if (axis < 0 || axis >= d) throw std::invalid_argument("boost: bad axis");
  Mat B = Mat::Identity(d + 1, d + 1);
  B(axis, axis) = std::cosh(rapidity);
  B(axis, d) = std::sinh(rapidity);
  B(d, axis) = std::sinh(rapidity);
  B(d, d) = std::cosh(rapidity);
  return B;
}

Mat boost2(double rapidity, double direction_angle) {
  return rotation2(direction_angle) * boost(2, 0, rapidity) *
         rotation2(-direction_angle);
}

}  // namespace hp
