#include "hp/anosov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <stdexcept>

namespace hp {

namespace {

Vec boundary_w(double theta) {
  Vec w(3);
  w << std::cos(theta), std::sin(theta), 1.0;
  return w;
}

}  // namespace

UnitTangent frame_at(const Vec& x, double theta) {
  Vec w = boundary_w(theta);
  double s = mink_form(x, w);  // < 0 for x on the upper sheet
  if (s >= -1e-12) throw std::invalid_argument("frame_at: base not future timelike");
  return {x, x + w / s};
}

UnitTangent frame_klein(const KleinPoint& p, double alpha) {
  Vec x = hyperboloid_lift(p);
  Vec e(3);
  e << std::cos(alpha), std::sin(alpha), 0.0;
  Vec v = e + mink_form(e, x) * x;  // project onto the tangent space
  return {x, v / std::sqrt(mink_form(v, v))};
}

double frame_defect(const UnitTangent& u) {
  return std::max({std::abs(mink_form(u.x, u.x) + 1.0),
                   std::abs(mink_form(u.v, u.v) - 1.0),
                   std::abs(mink_form(u.x, u.v))});
}

UnitTangent geodesic_flow(const UnitTangent& u, double t) {
  double c = std::cosh(t), s = std::sinh(t);
  UnitTangent r{c * u.x + s * u.v, s * u.x + c * u.v};
  if (frame_defect(r) > 1e-8) {  // Gram-Schmidt in the Minkowski form
    r.x /= std::sqrt(-mink_form(r.x, r.x));
    r.v += mink_form(r.v, r.x) * r.x;
    r.v /= std::sqrt(mink_form(r.v, r.v));
  }
  return r;
}

namespace {

// renormalize to <frame_x, w> = -1
LightlikePlane at_frame(const Vec& frame_x, const LightlikePlane& p) {
  double lam = -1.0 / mink_form(frame_x, p.w);
  if (!(lam > 0.0)) throw std::invalid_argument("plane is not future lightlike");
  return {lam * p.w, lam * p.h};
}

}  // namespace

double dx_metric(const Vec& frame_x, const LightlikePlane& p,
                 const LightlikePlane& q) {
  LightlikePlane a = at_frame(frame_x, p), b = at_frame(frame_x, q);
  double dh = a.h - b.h;
  // <dw, dw> = -2 <w1, w2> for lightlike w1, w2, but without the cancellation
  Vec dw = a.w - b.w;
  double d2 = mink_form(dw, dw) + dh * dh;
  return std::sqrt(std::max(d2, 0.0));
}

SectionSample flow_on_sections(const SectionSample& s, double t) {
  if (s.values.size() != s.frames.size())
    throw std::invalid_argument("section: frames/values size mismatch");
  SectionSample out;
  out.frames.reserve(s.frames.size());
  out.values.reserve(s.frames.size());
  double ch = std::cosh(t), sh = std::sinh(t);
  for (size_t i = 0; i < s.frames.size(); ++i) {
    const UnitTangent& u = s.frames[i];
    LightlikePlane p = at_frame(u.x, s.values[i]);
    double lam = 1.0 / (ch - sh * mink_form(u.v, p.w));
    if (!(lam > 0.0)) throw std::runtime_error("flow_on_sections: lambda <= 0");
    out.frames.push_back(geodesic_flow(u, t));
    out.values.push_back({lam * p.w, lam * p.h});
  }
  return out;
}

double section_distance(const SectionSample& s1, const SectionSample& s2) {
  if (s1.frames.size() != s2.frames.size())
    throw std::invalid_argument("section_distance: size mismatch");
  double d = 0.0;
  for (size_t i = 0; i < s1.frames.size(); ++i)
    d = std::max(d, dx_metric(s1.frames[i].x, s1.values[i], s2.values[i]));
  return d;
}

std::pair<double, double> contraction_rate(const SectionSample& s1,
                                           const SectionSample& s2,
                                           double t_max) {
  if (t_max <= 2.5) throw std::invalid_argument("contraction_rate: t_max too small");
  for (const SectionSample* s : {&s1, &s2})
    for (size_t i = 0; i < s->frames.size(); ++i) {
      LightlikePlane p = at_frame(s->frames[i].x, s->values[i]);
      if (mink_form(s->frames[i].v, p.w) > 1.0 - 1e-6)
        throw std::invalid_argument("contraction_rate: section touches Delta^+");
    }
  const int n = 9;
  std::vector<double> ts(n), logd(n);
  double dmax = 0.0;
  for (int j = 0; j < n; ++j) {
    ts[j] = 2.0 + (t_max - 2.0) * j / (n - 1);
    double d = section_distance(flow_on_sections(s1, ts[j]),
                                flow_on_sections(s2, ts[j]));
    dmax = std::max(dmax, d);
    logd[j] = std::log(std::max(d, 1e-300));
  }
  if (dmax < 1e-15) return {0.0, 1.0};
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (int j = 0; j < n; ++j) {
    st += ts[j];
    sl += logd[j];
    stt += ts[j] * ts[j];
    stl += ts[j] * logd[j];
  }
  double slope = (n * stl - st * sl) / (n * stt - st * st);
  double icept = (sl - slope * st) / n;
  return {std::exp(icept), -slope};
}

double reference_height(const LightlikePlane& p) { return p.h / p.w(2); }

double backward_angle(const UnitTangent& u) {
  Vec w = u.x - u.v;
  return std::atan2(w(1), w(0));
}

SectionSample fixed_point_section(const SurfaceGroup& G, const Cocycle& tau,
                                  const std::vector<UnitTangent>& frames,
                                  double t_step, int iters) {
  const int m = static_cast<int>(frames.size());
  SectionSample out;
  out.frames = frames;
  out.values.resize(m);
  if (m == 0) return out;

  // generator walls (perpendicular bisectors toward the one-letter orbit)
  const int nl = G.n_letters();
  std::vector<Vec> wall_q(nl);
  std::vector<double> wall_rhs(nl);
  std::vector<Vec> letter_tau(nl);
  std::vector<Mat> letter_mat(nl);
  CocycleEvaluator ev(G, tau);
  for (int k = 0; k < nl; ++k) {
    int s = (k < nl / 2) ? k + 1 : -(k - nl / 2 + 1);
    Mat M = G.letter(s);
    Vec o = M.col(2);  // lift of s . origin
    wall_q[k] = o.head(2) / o(2);
    wall_rhs[k] = 1.0 - std::sqrt(std::max(1.0 - wall_q[k].squaredNorm(), 0.0));
    GroupWord w;
    w.letters = {s};
    w.M = M;
    letter_tau[k] = ev.value(w);
    letter_mat[k] = M;
  }
  auto letter_index = [nl](int s) { return s > 0 ? s - 1 : nl / 2 - s - 1; };
  const Mat J = mink_J(3);

  // Per frame: flow backward, fold the base into the Dirichlet domain by g,
  // record the folded backward angle theta', the twist offset <tau(g), w'>
  // and the renormalization d = (g^-1 w')_3; all independent of the heights.
  std::vector<double> theta(m), theta_p(m), dnorm(m), offset(m), lam_frame(m);
  for (int i = 0; i < m; ++i) {
    if (frame_defect(frames[i]) > 1e-10)
      throw std::invalid_argument("fixed_point_section: bad frame");
    theta[i] = backward_angle(frames[i]);
    lam_frame[i] = -1.0 / mink_form(frames[i].x, boundary_w(theta[i]));
    UnitTangent ub = geodesic_flow(frames[i], -t_step);
    Vec y = ub.x;
    Mat A = Mat::Identity(3, 3);
    Vec tg = Vec::Zero(3);
    for (int guard = 0;; ++guard) {
      if (guard > 200)
        throw std::runtime_error("fixed_point_section: folding did not terminate");
      Vec xk = y.head(2) / y(2);
      int worst = -1;
      double viol = 1e-12;
      for (int k = 0; k < nl; ++k) {
        double v = xk.dot(wall_q[k]) - wall_rhs[k];
        if (v > viol) {
          viol = v;
          worst = k;
        }
      }
      if (worst < 0) break;
      int s = (worst < nl / 2) ? worst + 1 : -(worst - nl / 2 + 1);
      int back = letter_index(-s);
      y = letter_mat[back] * y;
      A = letter_mat[back] * A;
      tg = letter_tau[back] + letter_mat[back] * tg;
    }
    Vec wb_dir = A * (ub.x - ub.v);
    theta_p[i] = std::atan2(wb_dir(1), wb_dir(0));
    Vec wp = boundary_w(theta_p[i]);
    Vec wb = J * A.transpose() * J * wp;  // A^-1 w'
    dnorm[i] = wb(2);
    if (!(dnorm[i] > 1.0))
      throw std::runtime_error("fixed_point_section: transport is not contracting");
    offset[i] = mink_form(tg, wp);
  }

  // interpolation grid: sorted unique sample angles (duplicates share a node)
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return theta[a] < theta[b]; });
  std::vector<double> th_s;
  std::vector<int> rep;  // representative frame per unique angle
  for (int i : order)
    if (th_s.empty() || theta[i] - th_s.back() > 1e-13) {
      th_s.push_back(theta[i]);
      rep.push_back(i);
    }
  const int mu = static_cast<int>(th_s.size());
  // cubic Lagrange on the circle (linear for tiny grids)
  auto interp = [&](const std::vector<double>& H, double t) {
    int j = static_cast<int>(std::upper_bound(th_s.begin(), th_s.end(), t) -
                             th_s.begin());  // t in [th_s[j-1], th_s[j])
    if (mu == 1) return H[rep[0]];
    auto node = [&](int k) {  // unwrapped angle of node j - 2 + k, k = 0..3
      int idx = ((j - 2 + k) % mu + mu) % mu;
      double shift = 2.0 * M_PI * std::floor((j - 2.0 + k) / mu);
      return std::make_pair(th_s[idx] + shift, H[rep[idx]]);
    };
    if (mu < 4) {
      auto [xa, ya] = node(1);
      auto [xb, yb] = node(2);
      double u = (t - xa) / (xb - xa);
      return (1.0 - u) * ya + u * yb;
    }
    double x[4], y[4];
    for (int k = 0; k < 4; ++k) std::tie(x[k], y[k]) = node(k);
    double out = 0.0;
    for (int k = 0; k < 4; ++k) {
      double w = y[k];
      for (int l = 0; l < 4; ++l)
        if (l != k) w *= (t - x[l]) / (x[k] - x[l]);
      out += w;
    }
    return out;
  };

  std::vector<double> H(m, 0.0), Hn(m);
  bool done = false;
  for (int it = 0; it < iters && !done; ++it) {
    double dist = 0.0;
    for (int i = 0; i < m; ++i) {
      Hn[i] = (interp(H, theta_p[i]) - offset[i]) / dnorm[i];
      dist = std::max(dist, lam_frame[i] * std::abs(Hn[i] - H[i]));
    }
    H.swap(Hn);
    done = dist < 1e-8;
  }
  if (!done) throw std::runtime_error("fixed_point_section: no convergence");

  for (int i = 0; i < m; ++i) {
    Vec w = frames[i].x - frames[i].v;  // <x, w> = -1 already
    out.values[i] = {w, w(2) * H[i]};
  }
  return out;
}

}  // namespace hp
