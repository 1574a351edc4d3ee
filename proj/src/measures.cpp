#include "hp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hp {
namespace {

void gauss_legendre(int n, Vec& x, Vec& w) {
  x = Vec(n);
  w = Vec(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

// adjoint of the measure-density operator applied to the test function:
// D(phi) = sum_ij d_i d_j ((delta_ij - x_i x_j) psi), psi = phi L^-2, i.e.
// Lap psi - Hess psi(x,x) - 6 x.grad psi - 6 psi  (d = 2)
double adjoint_density(const Vec& x, double phi, const Vec& gphi, const Mat& hphi) {
  double L2 = 1.0 - x.squaredNorm();
  double W = 1.0 / L2;
  Vec gW = 2.0 * x / (L2 * L2);
  Mat hW = 2.0 / (L2 * L2) * Mat::Identity(2, 2) +
           8.0 / (L2 * L2 * L2) * (x * x.transpose());
  double psi = phi * W;
  Vec gpsi = W * gphi + phi * gW;
  Mat hpsi = W * hphi + gphi * gW.transpose() + gW * gphi.transpose() + phi * hW;
  return hpsi.trace() - x.dot(hpsi * x) - 6.0 * x.dot(gpsi) - 6.0 * psi;
}

const double g4x[4] = {-0.8611363115940526, -0.3399810435848563,
                       0.3399810435848563, 0.8611363115940526};
const double g4w[4] = {0.3478548451374538, 0.6521451548625461,
                       0.6521451548625461, 0.3478548451374538};

// tensor 4-point Gauss over n x n cells of [lo, hi]^2, restricted to the
// open support disk
double integrate_box(const std::function<double(const Vec&)>& f, const Vec& center,
                     double lo_off, double hi_off, double supp_r, int n_cells) {
  double cell = (hi_off - lo_off) / n_cells;
  double total = 0.0;
  Vec x(2);
  for (int ci = 0; ci < n_cells; ++ci)
    for (int cj = 0; cj < n_cells; ++cj) {
      double cx = center[0] + lo_off + (ci + 0.5) * cell;
      double cy = center[1] + lo_off + (cj + 0.5) * cell;
      // cell entirely outside the support
      double dx = std::abs(cx - center[0]) - cell, dy = std::abs(cy - center[1]) - cell;
      if (std::max(dx, 0.0) * std::max(dx, 0.0) +
              std::max(dy, 0.0) * std::max(dy, 0.0) >
          supp_r * supp_r)
        continue;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          x[0] = cx + 0.5 * cell * g4x[a];
          x[1] = cy + 0.5 * cell * g4x[b];
          if ((x - center).squaredNorm() >= supp_r * supp_r) continue;
          total += 0.25 * cell * cell * g4w[a] * g4w[b] * f(x);
        }
    }
  return total;
}

}  // namespace

TestFunction::TestFunction(const KleinPoint& c, double R) : center(c.x), radius(R) {
  if (R <= 0 || c.x.norm() + R >= 1.0)
    throw std::domain_error("TestFunction: support must be strictly interior");
}

double TestFunction::value(const Vec& x) const {
  double s = (x - center).squaredNorm() / (radius * radius);
  return s < 1.0 ? (1.0 - s) * (1.0 - s) * (1.0 - s) : 0.0;
}

Vec TestFunction::grad(const Vec& x) const {
  double R2 = radius * radius;
  double s = (x - center).squaredNorm() / R2;
  if (s >= 1.0) return Vec::Zero(2);
  return -6.0 * (1.0 - s) * (1.0 - s) / R2 * (x - center);
}

Mat TestFunction::hess(const Vec& x) const {
  double R2 = radius * radius;
  Vec d = x - center;
  double s = d.squaredNorm() / R2;
  if (s >= 1.0) return Mat::Zero(2, 2);
  return -6.0 / R2 *
         ((1.0 - s) * (1.0 - s) * Mat::Identity(2, 2) -
          4.0 * (1.0 - s) / R2 * (d * d.transpose()));
}

double mm_weak(const HeightFn& h, const TestFunction& phi, int n_cells) {
  auto f = [&](const Vec& x) {
    return h(KleinPoint(x)) *
           adjoint_density(x, phi.value(x), phi.grad(x), phi.hess(x));
  };
  return integrate_box(f, phi.center, -phi.radius, phi.radius, phi.radius, n_cells);
}

double mm_weak(const ScalarField& h, const TestFunction& phi, int n_cells) {
  return mm_weak([&](const KleinPoint& x) { return h.eval(x); }, phi, n_cells);
}

double mm_weak(const Wedge& w, const TestFunction& phi, int n_cells) {
  return mm_weak([&](const KleinPoint& x) { return wedge_eval(w, x); }, phi,
                 n_cells);
}

double mm_weak_fd(const HeightFn& h, const std::function<double(const Vec&)>& phi,
                  double support_radius, int n_cells) {
  if (support_radius <= 0 || support_radius >= 1.0)
    throw std::domain_error("mm_weak_fd: support must be strictly interior");
  const double e = 1e-4;
  auto f = [&](const Vec& x) {
    double p0 = phi(x);
    Vec xp = x, xm = x;
    Vec g(2);
    Mat H(2, 2);
    for (int i = 0; i < 2; ++i) {
      xp = x;
      xm = x;
      xp[i] += e;
      xm[i] -= e;
      double pp = phi(xp), pm = phi(xm);
      g[i] = (pp - pm) / (2 * e);
      H(i, i) = (pp - 2 * p0 + pm) / (e * e);
    }
    Vec y(2);
    y << x[0] + e, x[1] + e;
    double a = phi(y);
    y << x[0] - e, x[1] - e;
    double b = phi(y);
    y << x[0] + e, x[1] - e;
    double c = phi(y);
    y << x[0] - e, x[1] + e;
    double d = phi(y);
    H(0, 1) = H(1, 0) = (a + b - c - d) / (4 * e * e);
    return h(KleinPoint(x)) * adjoint_density(x, p0, g, H);
  };
  Vec origin = Vec::Zero(2);
  return integrate_box(f, origin, -support_radius, support_radius, support_radius,
                       n_cells);
}

double mm_weak_1d(const std::function<double(double)>& h, double radius,
                  int n_panels) {
  if (radius <= 0 || radius >= 1.0)
    throw std::domain_error("mm_weak_1d: support must be strictly interior");
  double R2 = radius * radius;
  double total = 0.0;
  double cell = 2.0 * radius / n_panels;
  for (int c = 0; c < n_panels; ++c) {
    double mid = -radius + (c + 0.5) * cell;
    for (int a = 0; a < 4; ++a) {
      double x = mid + 0.5 * cell * g4x[a];
      double s = x * x / R2;
      if (s >= 1.0) continue;
      double phi = (1 - s) * (1 - s) * (1 - s);
      double dphi = -6.0 * x * (1 - s) * (1 - s) / R2;
      double d2phi = -6.0 * (1 - s) * (1 - s) / R2 + 24.0 * x * x * (1 - s) / (R2 * R2);
      double L2 = 1 - x * x, L = std::sqrt(L2);
      double W = 1.0 / L, dW = x / (L2 * L), d2W = 1.0 / (L2 * L) + 3 * x * x / (L2 * L2 * L);
      double psi = phi * W;
      double dpsi = dphi * W + phi * dW;
      double d2psi = d2phi * W + 2 * dphi * dW + phi * d2W;
      double D = L2 * d2psi - 4 * x * dpsi - 2 * psi;
      total += 0.5 * cell * g4w[a] * h(x) * D;
    }
  }
  return total;
}

double line_integral_hyp(const GeodesicLine& l, const TestFunction& phi, int n) {
  auto [a, b] = l.endpoints();
  Vec d = b - a;
  // chord points inside the support disk: |a - c + t d|^2 < R^2
  Vec m = a - phi.center;
  double A = d.squaredNorm(), B = 2.0 * m.dot(d), C = m.squaredNorm() - phi.radius * phi.radius;
  double disc = B * B - 4 * A * C;
  if (disc <= 0) return 0.0;
  double t0 = (-B - std::sqrt(disc)) / (2 * A), t1 = (-B + std::sqrt(disc)) / (2 * A);
  t0 = std::max(t0, 0.0);
  t1 = std::min(t1, 1.0);
  if (t1 <= t0) return 0.0;
  double total = 0.0;
  double cell = (t1 - t0) / n;
  for (int c = 0; c < n; ++c) {
    double mid = t0 + (c + 0.5) * cell;
    for (int q = 0; q < 4; ++q) {
      double t = mid + 0.5 * cell * g4x[q];
      Vec x = a + t * d;
      double L2 = 1.0 - x.squaredNorm();
      double xv = x.dot(d);
      double speed = std::sqrt((d.squaredNorm() + xv * xv / L2) / L2);
      total += 0.5 * cell * g4w[q] * phi.value(x) * speed;
    }
  }
  return total;
}

namespace {
std::vector<Vec> clip_halfplane(const std::vector<Vec>& poly, const Vec& nrm,
                                double c) {
  std::vector<Vec> out;
  int m = static_cast<int>(poly.size());
  for (int i = 0; i < m; ++i) {
    const Vec& p = poly[i];
    const Vec& q = poly[(i + 1) % m];
    double sp = nrm.dot(p) - c, sq = nrm.dot(q) - c;
    if (sp <= 0) out.push_back(p);
    if ((sp < 0) != (sq < 0)) out.push_back(p + sp / (sp - sq) * (q - p));
  }
  return out;
}
}  // namespace

DomainQuadrature dirichlet_quadrature(const SurfaceGroup& G, int n_tri,
                                      int word_len) {
  if (n_tri < 2) throw std::invalid_argument("dirichlet_quadrature: n_tri < 2");
  // walls are perpendicular bisectors of orbit points: straight chords
  // x . q <= 1 - L(q); bisectors of points beyond twice the circumradius
  // cannot cut the polygon, so a fixed prune radius is safe
  std::vector<GroupWord> words = G.enumerate_words(word_len, 7.0);
  std::vector<Vec> poly = {Vec(2), Vec(2), Vec(2), Vec(2)};
  poly[0] << -1.2, -1.2;
  poly[1] << 1.2, -1.2;
  poly[2] << 1.2, 1.2;
  poly[3] << -1.2, 1.2;
  for (const GroupWord& w : words) {
    if (w.letters.empty()) continue;
    Vec col = w.M.col(2);
    Vec q = col.head(2) / col[2];
    double qn = q.norm();
    if (qn < 1e-9) continue;
    poly = clip_halfplane(poly, q, 1.0 - std::sqrt(1.0 - qn * qn));
    if (poly.size() < 3) throw std::runtime_error("dirichlet_quadrature: empty domain");
  }
  // drop duplicate corners left by touching bisectors
  std::vector<Vec> verts;
  for (const Vec& v : poly)
    if (verts.empty() || (v - verts.back()).norm() > 1e-10) verts.push_back(v);
  if (verts.size() > 1 && (verts.front() - verts.back()).norm() <= 1e-10)
    verts.pop_back();

  Vec gx, gw;
  gauss_legendre(n_tri, gx, gw);
  DomainQuadrature Q;
  Q.polygon = verts;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  int m = static_cast<int>(verts.size());
  for (int k = 0; k < m; ++k) {
    const Vec& vi = verts[k];
    const Vec& vj = verts[(k + 1) % m];
    double cross = std::abs(vi[0] * vj[1] - vi[1] * vj[0]);
    if (cross < 1e-14) continue;
    // triangle (0, vi, vj): x = u ((1-w) vi + w vj), |J| = u |vi x vj|
    for (int a = 0; a < n_tri; ++a) {
      double u = 0.5 * (gx[a] + 1.0), wu = 0.5 * gw[a];
      for (int b = 0; b < n_tri; ++b) {
        double s = 0.5 * (gx[b] + 1.0), ws = 0.5 * gw[b];
        Vec x = u * ((1.0 - s) * vi + s * vj);
        double L2 = 1.0 - x.squaredNorm();
        double jac = u * cross * wu * ws;
        if (L2 <= 1e-6) {  // L <= 1e-3: truncated, tail reported separately
          Q.truncated_area += jac * 1e9;
          continue;
        }
        nodes.push_back(x);
        weights.push_back(jac / (L2 * std::sqrt(L2)));
      }
    }
  }
  Q.nodes = std::move(nodes);
  Q.weights = Eigen::Map<Vec>(weights.data(), static_cast<long>(weights.size()));
  Q.area = Q.weights.sum();
  return Q;
}

double lamination_length(const SimplicialLamination& lam) {
  double total = 0.0;
  for (const auto& [core, weight] : lam.curves)
    total += weight * translation_length(core.M);
  return total;
}

double lamination_length(const Cocycle& tau) {
  double total = 0.0;
  for (const auto& [lam, coeff] : tau.lam_parts)
    total += std::abs(coeff) * lamination_length(lam);
  return total;
}

namespace {

void check_area(const DomainQuadrature& Q) {
  double target = 4.0 * M_PI;
  if (std::abs(Q.area - target) > 0.005 * target)
    throw std::runtime_error("norm quadrature: domain area off 4 pi by > 0.5%");
}

// integral of coeff * (upper - lower) / L against the hyperbolic area, with
// the sandwich guard; the 1/L makes the equivariant height difference (a
// conformal-weight-one object) a genuine function on the quotient
double integrate_gap(const DomainQuadrature& Q,
                     const std::function<double(const KleinPoint&)>& upper,
                     const std::function<double(const KleinPoint&)>& lower,
                     double coeff) {
  double total = 0.0;
  for (size_t i = 0; i < Q.nodes.size(); ++i) {
    KleinPoint x(Q.nodes[i]);
    double gap = upper(x) - lower(x);
    if (gap < -1e-6)
      throw std::runtime_error("norm quadrature: sandwich violated at a node");
    double L = std::sqrt(1.0 - x.x.squaredNorm());
    total += Q.weights[static_cast<long>(i)] * coeff / L * gap;
  }
  return total;
}

struct Surfaces {
  LowerEnvelope lo, hi;
  ScalarField h;
};

Surfaces make_surfaces(const BoundaryFunction& b, int n_r, int n_theta, double tol) {
  Surfaces s;
  s.lo = lower_envelope(b);
  s.hi = upper_envelope(b);
  s.h = solve_mean({b, n_r, n_theta, tol});
  return s;
}

}  // namespace

double s1_norm(const SurfaceGroup& G, const Cocycle& tau,
               const QuadratureSettings& qs) {
  DomainQuadrature Q = dirichlet_quadrature(G, qs.n_tri, qs.word_len);
  check_area(Q);
  BoundaryFunction b = sample_boundary(G, tau, qs.n_boundary);
  LowerEnvelope lo = lower_envelope(b);
  ScalarField h = solve_mean({b, qs.n_r, qs.n_theta, qs.tol});
  return integrate_gap(
      Q, [&](const KleinPoint& x) { return h.eval(x); },
      [&](const KleinPoint& x) { return envelope_eval(lo, x); }, 2.0);
}

double core_volume(const SurfaceGroup& G, const Cocycle& tau,
                   const QuadratureSettings& qs) {
  DomainQuadrature Q = dirichlet_quadrature(G, qs.n_tri, qs.word_len);
  check_area(Q);
  BoundaryFunction b = sample_boundary(G, tau, qs.n_boundary);
  LowerEnvelope lo = lower_envelope(b);
  LowerEnvelope hi = upper_envelope(b);
  return integrate_gap(
      Q, [&](const KleinPoint& x) { return envelope_eval(hi, x); },
      [&](const KleinPoint& x) { return envelope_eval(lo, x); }, 1.0);
}

NormReport norm_report(const SurfaceGroup& G, const Cocycle& tau,
                       const QuadratureSettings& qs) {
  NormReport rep;
  rep.settings = qs;
  DomainQuadrature Q = dirichlet_quadrature(G, qs.n_tri, qs.word_len);
  rep.area_check = Q.area;
  check_area(Q);

  BoundaryFunction b = sample_boundary(G, tau, qs.n_boundary);
  Surfaces s = make_surfaces(b, qs.n_r, qs.n_theta, qs.tol);
  auto mean_f = [&](const KleinPoint& x) { return s.h.eval(x); };
  auto lo_f = [&](const KleinPoint& x) { return envelope_eval(s.lo, x); };
  auto hi_f = [&](const KleinPoint& x) { return envelope_eval(s.hi, x); };

  rep.s1_plus = integrate_gap(Q, mean_f, lo_f, 2.0);
  rep.s1_minus = integrate_gap(Q, hi_f, mean_f, 2.0);
  rep.volume = integrate_gap(Q, hi_f, lo_f, 1.0);
  rep.lamination_length = lamination_length(tau);

  // composite error bar: refine each discretization once and take the deltas
  DomainQuadrature Qh = dirichlet_quadrature(G, std::max(4, qs.n_tri / 2), qs.word_len);
  double dq = std::abs(integrate_gap(Qh, mean_f, lo_f, 2.0) - rep.s1_plus);

  BoundaryFunction bh;
  bh.samples = Vec(qs.n_boundary / 2);
  for (int k = 0; k < qs.n_boundary / 2; ++k) bh.samples[k] = b.samples[2 * k];
  Surfaces sh = make_surfaces(bh, qs.n_r, qs.n_theta, qs.tol);
  double db = std::abs(integrate_gap(
                           Q, [&](const KleinPoint& x) { return sh.h.eval(x); },
                           [&](const KleinPoint& x) { return envelope_eval(sh.lo, x); },
                           2.0) -
                       rep.s1_plus);

  ScalarField hg = solve_mean({b, qs.n_r / 2, qs.n_theta / 2, qs.tol});
  double dg = std::abs(integrate_gap(
                           Q, [&](const KleinPoint& x) { return hg.eval(x); }, lo_f,
                           2.0) -
                       rep.s1_plus);

  rep.error_bar = dq + db + dg + qs.tol * Q.area + Q.truncated_area;
  return rep;
}

}  // namespace hp
