#include "hp/duality.hpp"

#include <cmath>
#include <stdexcept>

namespace hp {

GeodesicLine GeodesicLine::from_foot(Vec p, Vec n_hint) {
  GeodesicLine l;
  double r = p.norm();
  if (r >= 1.0 - 1e-12)
    throw std::domain_error("GeodesicLine: foot outside the open ball");
  if (r > 1e-12) {
    l.n = p / r;
  } else {
    if (n_hint.size() == 0)
      throw std::invalid_argument(
          "GeodesicLine through the origin needs an explicit normal");
    l.n = n_hint.normalized();
    p = Vec::Zero(n_hint.size());
  }
  l.p = std::move(p);
  return l;
}

GeodesicLine GeodesicLine::from_endpoints(const Vec& a, const Vec& b) {
  if ((a - b).norm() < 1e-12)
    throw std::invalid_argument("GeodesicLine: coincident endpoints");
  Vec u = (b - a).normalized();
  Vec foot = a - a.dot(u) * u;  // Euclidean foot of the perpendicular from 0
  if (foot.norm() > 1e-12) return from_foot(foot);
  // chord through the origin: normal is the rotation of u (d=2)
  if (a.size() != 2)
    throw std::invalid_argument("origin chord normal choice implemented for d=2");
  Vec n(2);
  n << -u[1], u[0];
  return from_foot(Vec::Zero(2), n);
}

std::pair<Vec, Vec> GeodesicLine::endpoints() const {
  if (p.size() != 2) throw std::invalid_argument("endpoints: d=2 only");
  Vec t(2);
  t << -n[1], n[0];  // tangent direction of the chord
  double half = std::sqrt(std::max(0.0, 1.0 - p.squaredNorm()));
  return {p + half * t, p - half * t};
}

Vec dual_point(const AffineFunction& h) {
  Vec P(h.vbar.size() + 1);
  P.head(h.vbar.size()) = h.vbar;
  P[h.vbar.size()] = -h.c;
  return P;
}

AffineFunction dual_plane(const Vec& P) {
  const long d = P.size() - 1;
  return {P.head(d), -P[d]};
}

double canonical_map(const GeodesicLine& l, const Vec& x) {
  double L = std::sqrt(1.0 - l.p.squaredNorm());
  return (x - l.p).dot(l.n) / L;
}

double canonical_map(const GeodesicLine& l, const KleinPoint& x) {
  return canonical_map(l, x.x);
}

Vec normal_vector(const GeodesicLine& l) {
  const long d = l.p.size();
  double L = std::sqrt(1.0 - l.p.squaredNorm());
  Vec v(d + 1);
  v.head(d) = l.n;
  v[d] = l.p.norm();
  return v / L;
}

namespace {
// Projective image of an ideal point under a linear isometry.
Vec act_ideal(const Mat& A, const Vec& e) {
  const long d = e.size();
  Vec lift(d + 1);
  lift.head(d) = e;
  lift[d] = 1.0;
  Vec y = A * lift;  // future lightlike, last coordinate positive on O_+
  return (y.head(d) / y[d]).eval();
}
}  // namespace

GeodesicLine act_line(const Mat& A, const GeodesicLine& l) {
  auto [a, b] = l.endpoints();
  return GeodesicLine::from_endpoints(act_ideal(A, a), act_ideal(A, b));
}

double wedge_eval(const Wedge& w, const KleinPoint& x) {
  double val = w.h_minus(x);
  if (w.line.side(x.x) > 0.0) val += w.angle * canonical_map(w.line, x);
  return val;
}

double wedge_angle_invariance(const Isometry& iso, const Wedge& w) {
  // transported line
  GeodesicLine l2 = act_line(iso.A, w.line);
  // transported function
  HeightFn f = act_function(
      iso, [&w](const KleinPoint& x) { return wedge_eval(w, x); });
  // the image wedge is affine on each side of l2, so one-sided slopes along
  // the normal are exact finite differences
  const Vec q = l2.p;  // foot lies on the chord, inside the disk
  const double delta = 1e-3;
  auto at = [&](double s) { return f(KleinPoint(q + s * l2.n)); };
  double splus = (at(2 * delta) - at(delta)) / delta;
  double sminus = (at(-delta) - at(-2 * delta)) / delta;
  double L2 = std::sqrt(1.0 - l2.p.squaredNorm());
  return (splus - sminus) * L2;
}

}  // namespace hp
