#include "hp/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace hp {

namespace {

// plane z = <q, w> + c through three lifted samples
AffineFunction plane_through(const std::vector<Vec>& q, const Vec& z, int i, int j,
                             int k) {
  Eigen::Matrix3d M;
  M << q[i][0], q[i][1], 1.0, q[j][0], q[j][1], 1.0, q[k][0], q[k][1], 1.0;
  Eigen::Vector3d rhs(z[i], z[j], z[k]);
  Eigen::Vector3d sol = M.fullPivLu().solve(rhs);
  AffineFunction a;
  a.vbar = Vec(2);
  a.vbar << sol[0], sol[1];
  a.c = sol[2];
  return a;
}

LowerEnvelope hull_of(const Vec& z) {
  const int N = static_cast<int>(z.size());
  if (N < 16) throw std::invalid_argument("lower_envelope: need at least 16 samples");
  std::vector<Vec> q(N);
  for (int k = 0; k < N; ++k) {
    q[k] = Vec(2);
    q[k] << std::cos(2.0 * M_PI * k / N), std::sin(2.0 * M_PI * k / N);
  }
  const double eps = 1e-12 * (1.0 + z.cwiseAbs().maxCoeff());

  LowerEnvelope env;
  env.samples = z;

  // gift-wrap from the boundary edges: each directed edge (i,j) with the
  // polygon interior on its left gets exactly one face (i,j,k)
  std::set<std::pair<int, int>> have_face;  // directed edges already in a face
  std::deque<std::pair<int, int>> todo;
  for (int k = 0; k < N; ++k) todo.push_back({k, (k + 1) % N});
  while (!todo.empty()) {
    auto [i, j] = todo.front();
    todo.pop_front();
    if (have_face.count({i, j})) continue;
    // pivot: among vertices left of i->j, keep the one whose plane through
    // (i, j, .) has no sample below it
    int k = -1;
    AffineFunction pl;
    Vec e = q[j] - q[i];
    for (int m = 0; m < N; ++m) {
      if (m == i || m == j) continue;
      Vec d = q[m] - q[i];
      if (e[0] * d[1] - e[1] * d[0] <= 0.0) continue;  // right side / collinear
      if (k < 0 || z[m] < pl.eval(q[m]) - eps) {
        k = m;
        pl = plane_through(q, z, i, j, m);
      }
    }
    if (k < 0) continue;  // N=2-style degeneracy cannot happen for N >= 16
    env.faces.push_back({i, j, k});
    env.planes.push_back(pl);
    have_face.insert({i, j});
    have_face.insert({j, k});
    have_face.insert({k, i});
    for (auto [a, b] : {std::pair{k, j}, std::pair{i, k}}) {
      if (b == (a + N - 1) % N) continue;  // reversed boundary: exterior side
      if (!have_face.count({a, b})) todo.push_back({a, b});
    }
  }

  // hull certificate: every face plane is a minorant of the data
  for (const AffineFunction& p : env.planes)
    for (int m = 0; m < N; ++m)
      if (p.eval(q[m]) > z[m] + 1e-10)
        throw std::runtime_error("lower_envelope: face plane exceeds a sample");
  return env;
}

// --- Seidel's randomized LP, maximize c.z, A z <= b, |z_i| <= box ---

struct Cons {
  Eigen::Vector3d a;
  double b;
};

double lp1(double c, double box, const std::vector<std::pair<double, double>>& cons) {
  double lo = -box, hi = box;
  for (auto [a, b] : cons) {
    if (a > 1e-14) hi = std::min(hi, b / a);
    else if (a < -1e-14) lo = std::max(lo, b / a);
    else if (b < -1e-9) throw std::runtime_error("lp_oracle: infeasible (1d)");
  }
  if (lo > hi + 1e-9) throw std::runtime_error("lp_oracle: infeasible (1d)");
  return c >= 0.0 ? hi : lo;
}

Eigen::Vector2d lp2(const Eigen::Vector2d& c, double box, std::vector<Cons> cons,
                    std::mt19937& rng) {
  std::shuffle(cons.begin(), cons.end(), rng);
  Eigen::Vector2d z(c[0] >= 0 ? box : -box, c[1] >= 0 ? box : -box);
  for (size_t i = 0; i < cons.size(); ++i) {
    const Eigen::Vector2d a = cons[i].a.head<2>();
    if (a.dot(z) <= cons[i].b + 1e-11) continue;
    // optimum on the line a.z = b: z = p0 + t d
    double n2 = a.squaredNorm();
    if (n2 < 1e-28) throw std::runtime_error("lp_oracle: infeasible (2d)");
    Eigen::Vector2d p0 = a * (cons[i].b / n2);
    Eigen::Vector2d d(-a[1], a[0]);
    std::vector<std::pair<double, double>> sub;
    for (size_t j = 0; j < i; ++j)
      sub.push_back({cons[j].a.head<2>().dot(d), cons[j].b - cons[j].a.head<2>().dot(p0)});
    // box faces as constraints
    for (int ax = 0; ax < 2; ++ax)
      for (double s : {1.0, -1.0}) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e[ax] = s;
        sub.push_back({e.dot(d), box - e.dot(p0)});
      }
    double t = lp1(c.dot(d), 2.0 * box, sub);
    z = p0 + t * d;
  }
  return z;
}

Eigen::Vector3d lp3(const Eigen::Vector3d& c, double box, std::vector<Cons> cons,
                    std::mt19937& rng) {
  std::shuffle(cons.begin(), cons.end(), rng);
  Eigen::Vector3d z(c[0] >= 0 ? box : -box, c[1] >= 0 ? box : -box,
                    c[2] >= 0 ? box : -box);
  for (size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].a.dot(z) <= cons[i].b + 1e-11) continue;
    // optimum on the plane a.z = b: orthonormal in-plane frame (u, v)
    const Eigen::Vector3d& a = cons[i].a;
    double n2 = a.squaredNorm();
    if (n2 < 1e-28) throw std::runtime_error("lp_oracle: infeasible (3d)");
    Eigen::Vector3d p0 = a * (cons[i].b / n2);
    Eigen::Vector3d u = a.unitOrthogonal();
    Eigen::Vector3d v = a.normalized().cross(u);
    std::vector<Cons> sub;
    auto project = [&](const Eigen::Vector3d& aa, double bb) {
      Cons cc;
      cc.a = Eigen::Vector3d(aa.dot(u), aa.dot(v), 0.0);
      cc.b = bb - aa.dot(p0);
      sub.push_back(cc);
    };
    for (size_t j = 0; j < i; ++j) project(cons[j].a, cons[j].b);
    for (int ax = 0; ax < 3; ++ax)
      for (double s : {1.0, -1.0}) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e[ax] = s;
        project(e, box);
      }
    Eigen::Vector2d t = lp2(Eigen::Vector2d(c.dot(u), c.dot(v)), 2.0 * box, sub, rng);
    z = p0 + t[0] * u + t[1] * v;
  }
  return z;
}

}  // namespace

LowerEnvelope lower_envelope(const BoundaryFunction& b) { return hull_of(b.samples); }

LowerEnvelope upper_envelope(const BoundaryFunction& b) {
  LowerEnvelope env = hull_of((-b.samples).eval());
  env.sign = -1.0;
  env.samples = b.samples;
  return env;
}

double envelope_eval(const LowerEnvelope& env, const KleinPoint& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (const AffineFunction& p : env.planes) m = std::max(m, p.eval(x.x));
  return env.sign * m;
}

double lp_oracle(const BoundaryFunction& b, const KleinPoint& x) {
  const int N = static_cast<int>(b.samples.size());
  std::vector<Cons> cons(N);
  for (int k = 0; k < N; ++k) {
    double t = 2.0 * M_PI * k / N;
    cons[k].a = Eigen::Vector3d(std::cos(t), std::sin(t), 1.0);
    cons[k].b = b.samples[k];
  }
  // a generous box: the optimal slope is bounded by the data oscillation over
  // the sample spacing, far below this
  const double box = 1e6 * (1.0 + b.samples.cwiseAbs().maxCoeff());
  std::mt19937 rng(777);
  Eigen::Vector3d z = lp3(Eigen::Vector3d(x.x[0], x.x[1], 1.0), box, cons, rng);
  return x.x[0] * z[0] + x.x[1] * z[1] + z[2];
}

}  // namespace hp
