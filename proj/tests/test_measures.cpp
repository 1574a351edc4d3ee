// Weak mean-curvature measure, Dirichlet-domain quadrature, the S1 norm and
// core volume: oracles (angle x length, 2 phi(0), weighted curve length) and
// the norm axioms.

#include <doctest.h>

#include <cmath>
#include <random>

#include "hp/isometry.hpp"
#include "hp/measures.hpp"

using namespace hp;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::mt19937& rng() {
  static std::mt19937 r(811);
  return r;
}
double uni(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

Cocycle a_curve(const SurfaceGroup& G, int letter, double weight) {
  SimplicialLamination lam;
  GroupWord core;
  core.letters = {letter};
  core.M = G.letter(letter);
  lam.curves.push_back({core, weight});
  lam.basepoint = KleinPoint(v2(0.03, 0.041));
  Cocycle tau;
  tau.lam_parts.push_back({lam, 1.0});
  return tau;
}

// light but converged settings for the multi-run property tests
QuadratureSettings light() {
  QuadratureSettings qs;
  qs.n_r = 64;
  qs.n_theta = 192;
  qs.n_boundary = 768;
  qs.n_tri = 24;
  return qs;
}
}  // namespace

TEST_CASE("d=1 analogue: |x| has measure 2 delta_0") {
  for (double R : {0.3, 0.6, 0.9}) {
    double v = mm_weak_1d([](double x) { return std::abs(x); }, R);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-3));
  }
  // affine input vanishes, and the pairing is linear
  double va = mm_weak_1d([](double x) { return 0.7 * x - 0.2; }, 0.5);
  CHECK(std::abs(va) < 1e-10);
  double vc = mm_weak_1d([](double x) { return 0.3 * std::abs(x) + 0.7 * x; }, 0.5);
  CHECK(vc == doctest::Approx(0.6).epsilon(1e-3));
}

TEST_CASE("affine functions have zero measure") {
  for (int i = 0; i < 10; ++i) {
    AffineFunction a{v2(uni(), uni()), uni()};
    TestFunction phi(KleinPoint(v2(uni(-0.4, 0.4), uni(-0.4, 0.4))), uni(0.15, 0.45));
    double v = mm_weak([&](const KleinPoint& x) { return a(x); }, phi);
    CHECK(std::abs(v) < 1e-4);
  }
  CHECK_THROWS_AS(TestFunction(KleinPoint(v2(0.8, 0.0)), 0.3), std::domain_error);
}

TEST_CASE("wedge measure is angle times hyperbolic length") {
  int done = 0;
  while (done < 20) {
    double t0 = uni(-M_PI, M_PI), t1 = t0 + uni(0.5 * M_PI, 1.5 * M_PI);
    GeodesicLine l = GeodesicLine::from_endpoints(v2(std::cos(t0), std::sin(t0)),
                                                  v2(std::cos(t1), std::sin(t1)));
    TestFunction phi(KleinPoint(v2(uni(-0.35, 0.35), uni(-0.35, 0.35))),
                     uni(0.2, 0.45));
    double alpha = uni(0.2, 1.5);
    double ref = alpha * line_integral_hyp(l, phi);
    if (ref < 0.01) continue;  // chord misses the bump
    Wedge w{AffineFunction{v2(uni(), uni()), uni()}, alpha, l};
    CHECK(mm_weak(w, phi) == doctest::Approx(ref).epsilon(0.01));
    ++done;
  }
}

TEST_CASE("solved mean surface has zero measure") {
  SurfaceGroup G = build_octagon_group();
  Cocycle tau = a_curve(G, 1, 1.0);
  BoundaryFunction b = sample_boundary(G, tau, 1024);
  ScalarField h = solve_mean({b, 96, 256, 1e-9});
  for (double cx : {0.0, 0.3, -0.25}) {
    TestFunction phi(KleinPoint(v2(cx, 0.1 * cx)), 0.35);
    CHECK(std::abs(mm_weak(h, phi)) < 1e-3);
    // while the invariant wedge sum carries the lamination's mass
    double wm = mm_weak(
        [&](const KleinPoint& x) { return wedge_sum_eval(G, tau.lam_parts[0].first, x); },
        phi);
    CHECK(wm > 0.1);
  }
}

TEST_CASE("dirichlet quadrature calibrates to 4 pi") {
  SurfaceGroup G = build_octagon_group();
  double target = 4.0 * M_PI;
  double prev = 1e300;
  for (int n : {12, 24, 48}) {
    DomainQuadrature Q = dirichlet_quadrature(G, n);
    double err = std::abs(Q.area - target);
    CHECK(err < prev);
    prev = err;
  }
  DomainQuadrature Q = dirichlet_quadrature(G, 48);
  CHECK(Q.area == doctest::Approx(target).epsilon(1e-8));
  CHECK(Q.polygon.size() == 8);
  CHECK(Q.truncated_area == 0.0);
  for (size_t i = 0; i < Q.nodes.size(); i += 97)
    CHECK(in_dirichlet_domain(G, KleinPoint(Q.nodes[i])));
  CHECK(Q.weights.minCoeff() > 0.0);
}

TEST_CASE("lamination length") {
  SurfaceGroup G = build_octagon_group();
  double l1 = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
  SimplicialLamination empty;
  CHECK(lamination_length(empty) == 0.0);
  Cocycle t1 = a_curve(G, 1, 1.0);
  CHECK(lamination_length(t1) == doctest::Approx(l1).epsilon(1e-12));
  // additive over curves, linear in the weight
  Cocycle t2 = a_curve(G, 3, 0.7);
  CHECK(lamination_length(add_cocycles(t1, t2)) ==
        doctest::Approx(l1 + 0.7 * l1).epsilon(1e-12));
}

TEST_CASE("norm of a weighted curve is weight times length") {
  SurfaceGroup G = build_octagon_group();
  QuadratureSettings qs;
  qs.n_r = 96;
  qs.n_theta = 256;
  qs.n_boundary = 1024;
  qs.n_tri = 32;
  Cocycle t1 = a_curve(G, 1, 1.0);
  double wl = lamination_length(t1);
  double s = s1_norm(G, t1, qs);
  CHECK(s == doctest::Approx(wl).epsilon(0.01));
  // discrepancy shrinks when every discretization is refined
  QuadratureSettings qf;
  qf.n_r = 160;
  qf.n_theta = 512;
  qf.n_boundary = 2048;
  qf.n_tri = 48;
  CHECK(std::abs(s1_norm(G, t1, qf) - wl) < std::abs(s - wl));
  // a different curve, reweighted
  Cocycle t2 = a_curve(G, 2, 0.6);
  CHECK(s1_norm(G, t2, qs) == doctest::Approx(0.6 * wl / 1.0).epsilon(0.01));
}

TEST_CASE("coboundaries are null vectors") {
  SurfaceGroup G = build_octagon_group();
  QuadratureSettings qs = light();
  for (int i = 0; i < 3; ++i) {
    Cocycle cb;
    cb.coboundary = (Vec(3) << uni(), uni(), uni()).finished();
    CHECK(std::abs(s1_norm(G, cb, qs)) < 1e-4);
    CHECK(std::abs(core_volume(G, cb, qs)) < 1e-4);
    // the mean surface is affine: fit h(r, t) = c + r (w0 cos t + w1 sin t)
    // over the grid nodes and measure the residual
    BoundaryFunction b = sample_boundary(G, cb, qs.n_boundary);
    ScalarField h = solve_mean({b, qs.n_r, qs.n_theta, 1e-10});
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    auto design = [&](int ri, int tj) {
      double r = h.grid.radii[ri], t = h.grid.theta(tj);
      return Eigen::Vector3d(1.0, r * std::cos(t), r * std::sin(t));
    };
    for (int ri = 0; ri < h.values.rows(); ++ri)
      for (int tj = 0; tj < qs.n_theta; ++tj) {
        Eigen::Vector3d row = design(ri, tj);
        ata += row * row.transpose();
        atb += row * h.values(ri, tj);
      }
    Eigen::Vector3d coef = ata.ldlt().solve(atb);
    double worst = 0.0;
    for (int ri = 0; ri < h.values.rows(); ++ri)
      for (int tj = 0; tj < qs.n_theta; ++tj)
        worst = std::max(worst,
                         std::abs(h.values(ri, tj) - design(ri, tj).dot(coef)));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("asymmetric norm axioms") {
  SurfaceGroup G = build_octagon_group();
  QuadratureSettings qs = light();
  Cocycle t1 = a_curve(G, 1, 1.0);
  Cocycle t2 = a_curve(G, 2, 0.8);
  double s1 = s1_norm(G, t1, qs), s2 = s1_norm(G, t2, qs);
  CHECK(s1 > 0.0);
  CHECK(s2 > 0.0);
  // positive homogeneity
  for (double a : {0.5, 2.0})
    CHECK(s1_norm(G, scale_cocycle(t1, a), qs) == doctest::Approx(a * s1).epsilon(0.01));
  // triangle inequality (quadrature noise slack)
  double s12 = s1_norm(G, add_cocycles(t1, t2), qs);
  CHECK(s12 <= s1 + s2 + 1e-6);
  // invariance under adding a coboundary
  Cocycle cb;
  cb.coboundary = (Vec(3) << 0.4, -0.7, 0.2).finished();
  CHECK(s1_norm(G, add_cocycles(t1, cb), qs) == doctest::Approx(s1).epsilon(0.01));
}

TEST_CASE("volume is the symmetrization of the norm") {
  SurfaceGroup G = build_octagon_group();
  QuadratureSettings qs = light();
  Cocycle cb;
  cb.coboundary = (Vec(3) << 0.2, 0.3, -0.1).finished();
  std::vector<Cocycle> configs = {
      a_curve(G, 1, 1.0), add_cocycles(a_curve(G, 1, 1.0), a_curve(G, 2, 0.7)),
      add_cocycles(a_curve(G, 1, 0.5), cb)};
  for (const Cocycle& tau : configs) {
    NormReport rep = norm_report(G, tau, qs);
    CHECK(rep.s1_plus >= 0.0);
    CHECK(rep.s1_minus >= 0.0);
    CHECK(rep.volume >= 0.0);
    CHECK(rep.error_bar > 0.0);
    CHECK(std::abs(rep.volume - 0.5 * (rep.s1_plus + rep.s1_minus)) <= rep.error_bar);
    CHECK(rep.area_check == doctest::Approx(4.0 * M_PI).epsilon(1e-5));
    // independent route: s1_norm of -tau integrates the negated surfaces
    double sm = s1_norm(G, scale_cocycle(tau, -1.0), qs);
    CHECK(sm == doctest::Approx(rep.s1_minus).epsilon(1e-6));
    // volume is symmetric in tau -> -tau
    CHECK(core_volume(G, scale_cocycle(tau, -1.0), qs) ==
          doctest::Approx(rep.volume).epsilon(1e-9));
  }
}

TEST_CASE("norm is continuous along cocycle perturbations") {
  SurfaceGroup G = build_octagon_group();
  QuadratureSettings qs = light();
  Cocycle t1 = a_curve(G, 1, 1.0);
  Cocycle t2 = a_curve(G, 2, 1.0);
  double s = s1_norm(G, t1, qs);
  double d4 = std::abs(s1_norm(G, add_cocycles(t1, scale_cocycle(t2, 0.25)), qs) - s);
  double d16 = std::abs(s1_norm(G, add_cocycles(t1, scale_cocycle(t2, 0.0625)), qs) - s);
  CHECK(d16 < d4);
  CHECK(d16 < 0.1 * s);
}

TEST_CASE("norm equals the total measure over a partition of unity") {
  SurfaceGroup G = build_octagon_group();
  Cocycle tau = a_curve(G, 1, 1.0);
  double wl = lamination_length(tau);
  // u = psi0 / sum_gamma psi0(gamma x) sums to one over every orbit: a single
  // pairing returns the measure of the quotient.  The bump must cover the
  // Dirichlet domain (hyperbolic circumradius 2.449), and the word set every
  // element moving the origin by at most twice the bump radius.
  double Rk = std::tanh(2.6);
  TestFunction psi0(KleinPoint(Vec::Zero(2)), Rk);
  std::vector<GroupWord> words = G.enumerate_words(6, 5.25);
  auto S = [&](const Vec& x) {
    double s = 0.0;
    KleinPoint kx(x);
    for (const GroupWord& w : words) s += psi0.value(act_klein(w.M, kx).x);
    return s;
  };
  auto u = [&](const Vec& x) {
    if (x.squaredNorm() >= Rk * Rk) return 0.0;
    double v = psi0.value(x);
    return v == 0.0 ? 0.0 : v / S(x);
  };
  CocycleEvaluator ev(G, tau);
  HeightFn h = [&](const KleinPoint& x) { return ev.height(x); };
  double coarse = mm_weak_fd(h, u, Rk, 96);
  double fine = mm_weak_fd(h, u, Rk, 160);
  CHECK(std::abs(fine - wl) / wl < 0.03);
  CHECK(std::abs(fine - wl) < std::abs(coarse - wl));
}

TEST_CASE("area gate refuses an uncalibrated domain") {
  SurfaceGroup G = build_octagon_group();
  QuadratureSettings qs = light();
  qs.word_len = 0;  // no walls: the clipped region is not a fundamental domain
  Cocycle t1 = a_curve(G, 1, 1.0);
  CHECK_THROWS_AS(s1_norm(G, t1, qs), std::runtime_error);
}
