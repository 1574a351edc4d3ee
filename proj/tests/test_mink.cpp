// Unit tests for the Minkowski / Klein-ball primitives.

#include <doctest.h>

#include <cmath>
#include <random>

#include "hp/mink.hpp"

using namespace hp;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

// Random point with |x| <= rmax, fixed seed for reproducibility.
KleinPoint random_point(std::mt19937& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (;;) {
    Vec x = v2(U(rng), U(rng));
    if (x.norm() < rmax) return KleinPoint(x);
  }
}
}  // namespace

TEST_CASE("mink_form signature cases") {
  CHECK(mink_form(v2(1, 0), v2(1, 0)) == doctest::Approx(1.0));
  CHECK(mink_form(v2(0, 1), v2(0, 1)) == doctest::Approx(-1.0));
  CHECK(mink_form(v2(1, 1), v2(1, 1)) == doctest::Approx(0.0));
  CHECK(mink_form(v3(1, 2, 3), v3(4, -1, 2)) == doctest::Approx(4 - 2 - 6));
}

TEST_CASE("conformal factor") {
  CHECK(conformal_factor(KleinPoint(v2(0, 0))) == doctest::Approx(1.0));
  CHECK(conformal_factor(KleinPoint(v2(0.6, 0))) == doctest::Approx(0.8));
  // monotone decay toward the boundary
  double prev = 1.0;
  for (double r : {0.3, 0.6, 0.9, 0.99, 0.99999}) {
    double L = conformal_factor(KleinPoint(v2(r, 0)));
    CHECK(L < prev);
    prev = L;
  }
  CHECK(prev < 1e-2);
  CHECK_THROWS_AS(KleinPoint(v2(1.0, 0.0)), std::domain_error);
  // L^2 + |x|^2 = 1 on random points
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    KleinPoint p = random_point(rng);
    double L = conformal_factor(p);
    CHECK(std::abs(L * L + p.x.squaredNorm() - 1.0) < 1e-14);
  }
}

TEST_CASE("hyp_metric values and positivity") {
  CHECK((hyp_metric(KleinPoint(v2(0, 0))) - Mat::Identity(2, 2)).norm() ==
        doctest::Approx(0.0));

  // direct substitution at x=(0.6,0): L=0.8
  Mat g = hyp_metric(KleinPoint(v2(0.6, 0)));
  double L2 = 0.64, L4 = L2 * L2;
  CHECK(g(0, 0) == doctest::Approx(1.0 / L2 + 0.36 / L4).epsilon(1e-12));
  CHECK(g(1, 1) == doctest::Approx(1.0 / L2).epsilon(1e-12));
  CHECK(g(0, 1) == doctest::Approx(0.0));

  std::mt19937 rng(11);
  for (int i = 0; i < 10000; ++i) {
    KleinPoint p = random_point(rng);
    Mat gm = hyp_metric(p);
    CHECK((gm - gm.transpose()).norm() < 1e-12);
    Eigen::LLT<Mat> llt(gm);
    CHECK(llt.info() == Eigen::Success);  // SPD via Cholesky
    // radial eigenvalue is L^-4
    if (p.x.norm() > 1e-6) {
      Vec u = p.x.normalized();
      double L = conformal_factor(p);
      CHECK(u.dot(gm * u) == doctest::Approx(std::pow(L, -4)).epsilon(1e-10));
    }
  }
}

TEST_CASE("hyp_distance closed form and metric axioms") {
  KleinPoint o(v2(0, 0));
  CHECK(hyp_distance(o, o) == doctest::Approx(0.0));
  // from the origin: d = arctanh(r) = log((1+r)/(1-r))/2, i.e. log(3)/2 for r = 0.5
  CHECK(hyp_distance(o, KleinPoint(v2(0.5, 0))) ==
        doctest::Approx(std::atanh(0.5)).epsilon(1e-12));
  // cross-check against geodesic integration of the metric along the chord
  {
    int n = 20000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = (i + 0.5) / n * 0.5;
      double L2 = 1.0 - s * s;
      acc += std::sqrt(1.0 / L2 + s * s / (L2 * L2)) * (0.5 / n);
    }
    CHECK(acc == doctest::Approx(std::atanh(0.5)).epsilon(1e-7));
  }

  std::mt19937 rng(13);
  for (int i = 0; i < 2000; ++i) {
    KleinPoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
    double ab = hyp_distance(a, b), ba = hyp_distance(b, a);
    CHECK(std::abs(ab - ba) < 1e-10);
    CHECK(ab >= 0.0);
    CHECK(hyp_distance(a, c) <= ab + hyp_distance(b, c) + 1e-10);
  }
}

TEST_CASE("volume density and hyperbolic disk area") {
  CHECK(hyp_volume_density(KleinPoint(v2(0, 0))) == doctest::Approx(1.0));
  CHECK(hyp_volume_density(KleinPoint(v2(0.6, 0))) == doctest::Approx(1.953125));

  // area of a hyperbolic disk of radius rho: 2*pi*(cosh(rho)-1),
  // Euclidean radius r = tanh(rho)
  double rho = 1.3, r = std::tanh(rho);
  int n = 4000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = (i + 0.5) / n * r;  // midpoint rule in radius
    double L = std::sqrt(1.0 - s * s);
    sum += 2.0 * M_PI * s / (L * L * L) * (r / n);
  }
  CHECK(sum == doctest::Approx(2.0 * M_PI * (std::cosh(rho) - 1.0)).epsilon(1e-5));
}

namespace {
// quadratic test function f(x) = x^T Q x / 2 + b.x + c and its exact data
struct Quad {
  Mat Q;
  Vec b;
  double c;
  double val(const Vec& x) const { return 0.5 * x.dot(Q * x) + b.dot(x) + c; }
  Vec grad(const Vec& x) const { return Q * x + b; }
};
}  // namespace

TEST_CASE("hyperbolic Hessian conversion") {
  // at the origin the correction vanishes
  Quad q{(Mat(2, 2) << 2, 1, 1, 3).finished(), v2(0.4, -0.7), 0.2};
  KleinPoint o(v2(0, 0));
  CHECK((euclid_to_hyp_hessian(q.Q, q.grad(o.x), o) - q.Q).norm() < 1e-14);

  // finite-difference check of the formula through geodesic second derivatives
  // is indirect; instead verify the product identity
  //   L^-1 Hess f = Hess^H (L^-1 f) - (L^-1 f) g_H
  // with f a quadratic (all Euclidean derivatives exact, Hess(L^-1 f) by FD).
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Quad f{(Mat(2, 2) << 1 + U(rng), U(rng), 0, 2 + U(rng)).finished(),
           v2(U(rng), U(rng)), U(rng)};
    f.Q(1, 0) = f.Q(0, 1);
    KleinPoint p = random_point(rng, 0.8);
    auto Lf = [&](const Vec& y) {
      return f.val(y) / std::sqrt(1.0 - y.squaredNorm());
    };
    // FD Hessian and gradient of L^-1 f at p
    const double h = 1e-5;
    Mat H(2, 2);
    Vec gr(2);
    for (int i = 0; i < 2; ++i) {
      Vec ei = Vec::Zero(2);
      ei[i] = h;
      gr[i] = (Lf(p.x + ei) - Lf(p.x - ei)) / (2 * h);
      H(i, i) = (Lf(p.x + ei) - 2 * Lf(p.x) + Lf(p.x - ei)) / (h * h);
    }
    Vec e0 = Vec::Zero(2), e1 = Vec::Zero(2);
    e0[0] = h;
    e1[1] = h;
    H(0, 1) = H(1, 0) = (Lf(p.x + e0 + e1) - Lf(p.x + e0 - e1) - Lf(p.x - e0 + e1) +
                         Lf(p.x - e0 - e1)) /
                        (4 * h * h);
    double L = conformal_factor(p);
    Mat lhs = f.Q / L;
    Mat rhs = euclid_to_hyp_hessian(H, gr, p) - (f.val(p.x) / L) * hyp_metric(p);
    CHECK((lhs - rhs).norm() < 2e-4);  // FD noise floor
  }
}

TEST_CASE("Euclidean Hess L = -L g_H") {
  std::mt19937 rng(19);
  for (int i = 0; i < 200; ++i) {
    KleinPoint p = random_point(rng, 0.9);
    double L = conformal_factor(p);
    // analytic Euclidean Hessian of L
    Mat HL = -Mat::Identity(2, 2) / L - (p.x * p.x.transpose()) / (L * L * L);
    Mat target = -L * hyp_metric(p);
    CHECK((HL - target).norm() / target.norm() < 1e-9);
  }
}

TEST_CASE("mean_trace") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    KleinPoint p = random_point(rng);
    // affine: zero Hessian -> zero trace
    CHECK(mean_trace(Mat::Zero(2, 2), p) == 0.0);
    // h = -L: trace of Hess(-L) w.r.t. g is d*L (since Hess L = -L g, tr_g g = d)
    double L = conformal_factor(p);
    Mat HmL = Mat::Identity(2, 2) / L + (p.x * p.x.transpose()) / (L * L * L);
    CHECK(mean_trace(HmL, p) == doctest::Approx(2.0 * L).epsilon(1e-10));
  }
  // h = |x|^2/2 at origin: Laplacian d, correction 0
  CHECK(mean_trace(Mat::Identity(2, 2), KleinPoint(v2(0, 0))) == doctest::Approx(2.0));
}
