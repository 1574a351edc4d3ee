// Convex envelopes of boundary data: hull construction, LP cross-check,
// convexity/maximality, and agreement with the wedge-sum surface of a
// lamination boundary.

#include <doctest.h>

#include <cmath>
#include <random>

#include "hp/envelope.hpp"
#include "hp/fuchsian2.hpp"

using namespace hp;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::mt19937& rng() {
  static std::mt19937 r(509);
  return r;
}
double uni(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

BoundaryFunction sample(int N, const std::function<double(double)>& f) {
  BoundaryFunction b;
  b.samples = Vec(N);
  for (int k = 0; k < N; ++k) b.samples[k] = f(2.0 * M_PI * k / N);
  return b;
}

BoundaryFunction random_trig(int N) {
  double a0 = uni(), a1 = uni(), b1 = uni(), a2 = uni(), b2 = uni(), a3 = uni();
  return sample(N, [=](double t) {
    return a0 + a1 * std::cos(t) + b1 * std::sin(t) + a2 * std::cos(2 * t) +
           b2 * std::sin(2 * t) + a3 * std::cos(3 * t);
  });
}

KleinPoint random_interior(double rmax = 0.8) {
  double r = rmax * std::sqrt(uni(0.0, 1.0)), th = uni(-M_PI, M_PI);
  return KleinPoint(v2(r * std::cos(th), r * std::sin(th)));
}
}  // namespace

TEST_CASE("affine data reproduces the affine function") {
  AffineFunction a{v2(0.4, -0.7), 0.3};
  BoundaryFunction b =
      sample(64, [&](double t) { return a.eval(v2(std::cos(t), std::sin(t))); });
  LowerEnvelope lo = lower_envelope(b);
  LowerEnvelope hi = upper_envelope(b);
  CHECK(static_cast<int>(lo.faces.size()) == 62);  // triangulated 64-gon
  for (int i = 0; i < 100; ++i) {
    KleinPoint x = random_interior(0.95);
    CHECK(envelope_eval(lo, x) == doctest::Approx(a(x)).epsilon(1e-12));
    // h+ = h- exactly when the data is affine
    CHECK(envelope_eval(hi, x) == doctest::Approx(a(x)).epsilon(1e-12));
    CHECK(lp_oracle(b, x) == doctest::Approx(a(x)).epsilon(1e-10));
  }
}

TEST_CASE("convexity and boundary interpolation") {
  BoundaryFunction b = random_trig(256);
  LowerEnvelope env = lower_envelope(b);
  // midpoint inequality
  for (int i = 0; i < 1000; ++i) {
    Vec p = random_interior(0.9).x, q = random_interior(0.9).x;
    double mid = envelope_eval(env, KleinPoint((0.5 * (p + q)).eval()));
    double avg = 0.5 * (envelope_eval(env, KleinPoint(p)) +
                        envelope_eval(env, KleinPoint(q)));
    CHECK(mid <= avg + 1e-11);
  }
  // minorant of the data, and equal to it at the samples (hull vertices)
  for (int k = 0; k < 256; ++k) {
    double t = 2.0 * M_PI * k / 256;
    Vec xi = v2(std::cos(t), std::sin(t));
    double m = -1e300;
    for (const AffineFunction& p : env.planes) m = std::max(m, p.eval(xi));
    CHECK(m <= b.samples[k] + 1e-10);
    CHECK(m == doctest::Approx(b.samples[k]).epsilon(1e-9));
  }
  // upper envelope dominates: h+ >= h-
  LowerEnvelope up = upper_envelope(b);
  for (int i = 0; i < 200; ++i) {
    KleinPoint x = random_interior(0.95);
    CHECK(envelope_eval(up, x) >= envelope_eval(env, x) - 1e-11);
  }
}

TEST_CASE("cos 2 theta envelope") {
  BoundaryFunction b = sample(256, [](double t) { return std::cos(2 * t); });
  LowerEnvelope lo = lower_envelope(b);
  LowerEnvelope hi = upper_envelope(b);
  KleinPoint o(v2(0, 0));
  // the minorant at 0 is pinned by the two sample pairs at theta = pi/2, 3pi/2
  CHECK(envelope_eval(lo, o) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(envelope_eval(hi, o) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lp_oracle(b, o) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(envelope_eval(hi, o) > envelope_eval(lo, o) + 1.0);
}

TEST_CASE("lp oracle agrees with the hull evaluator") {
  for (int trial = 0; trial < 20; ++trial) {
    BoundaryFunction b = random_trig(128);
    LowerEnvelope env = lower_envelope(b);
    for (int i = 0; i < 5; ++i) {
      KleinPoint x = random_interior();
      double lp = lp_oracle(b, x);
      CHECK(lp == doctest::Approx(envelope_eval(env, x)).epsilon(1e-9));
      // h+ via negation dominates h-
      BoundaryFunction nb{(-b.samples).eval()};
      CHECK(-lp_oracle(nb, x) >= lp - 1e-9);
    }
  }
}

TEST_CASE("homogeneity and superadditivity") {
  BoundaryFunction b1 = random_trig(128), b2 = random_trig(128);
  LowerEnvelope e1 = lower_envelope(b1), e2 = lower_envelope(b2);
  for (double alpha : {0.5, 2.0}) {
    LowerEnvelope ea = lower_envelope(BoundaryFunction{(alpha * b1.samples).eval()});
    for (int i = 0; i < 50; ++i) {
      KleinPoint x = random_interior(0.95);
      CHECK(envelope_eval(ea, x) ==
            doctest::Approx(alpha * envelope_eval(e1, x)).epsilon(1e-11));
    }
  }
  LowerEnvelope es = lower_envelope(BoundaryFunction{(b1.samples + b2.samples).eval()});
  for (int i = 0; i < 200; ++i) {
    KleinPoint x = random_interior(0.95);
    CHECK(envelope_eval(e1, x) + envelope_eval(e2, x) <=
          envelope_eval(es, x) + 1e-10);
  }
}

TEST_CASE("maximality over affine minorants") {
  BoundaryFunction b = random_trig(256);
  LowerEnvelope env = lower_envelope(b);
  for (int i = 0; i < 200; ++i) {
    AffineFunction a{v2(uni(), uni()), uni()};
    double excess = -1e300;
    for (int k = 0; k < 256; ++k) {
      double t = 2.0 * M_PI * k / 256;
      excess = std::max(excess, a.eval(v2(std::cos(t), std::sin(t))) - b.samples[k]);
    }
    a.c -= excess;  // now a <= b at every sample
    KleinPoint x = random_interior(0.95);
    CHECK(a(x) <= envelope_eval(env, x) + 1e-10);
  }
}

TEST_CASE("lamination boundary data recovers the wedge sum") {
  SurfaceGroup G = build_octagon_group();
  SimplicialLamination lam;
  GroupWord core;
  core.letters = {1};
  core.M = G.letter(1);
  lam.curves.push_back({core, 1.0});
  lam.basepoint = KleinPoint(v2(0.03, 0.041));
  Cocycle tau;
  tau.lam_parts.push_back({lam, 1.0});

  double prev = 1e300;
  for (int N : {256, 512, 1024}) {
    BoundaryFunction b = sample_boundary(G, tau, N);
    LowerEnvelope env = lower_envelope(b);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      double r = 0.8 * std::sqrt((i + 0.5) / 40.0), th = 2.399963 * i;
      KleinPoint x(v2(r * std::cos(th), r * std::sin(th)));
      worst = std::max(worst,
                       std::abs(envelope_eval(env, x) - wedge_sum_eval(G, lam, x)));
    }
    CHECK(worst < 40.0 / N);  // empirical first-order envelope error
    CHECK(worst <= prev + 1e-9);
    prev = worst;
  }
}
