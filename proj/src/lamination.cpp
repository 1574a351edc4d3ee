#include "hp/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hp {

namespace {

// hyperbolic circumradius of the domain cut out by the walls
double wall_circumradius(const std::vector<GeodesicLine>& walls) {
  double r = 0.0;
  for (size_t i = 0; i < walls.size(); ++i)
    for (size_t j = i + 1; j < walls.size(); ++j) {
      Mat M(2, 2);
      M.row(0) = walls[i].n.transpose();
      M.row(1) = walls[j].n.transpose();
      if (std::abs(M.determinant()) < 1e-12) continue;
      Vec rhs(2);
      rhs << walls[i].p.dot(walls[i].n), walls[j].p.dot(walls[j].n);
      Vec x = M.inverse() * rhs;
      if (x.norm() >= 1.0 - 1e-12) continue;
      bool vertex = true;
      for (const GeodesicLine& w : walls)
        if (w.side(x) > 1e-9) {
          vertex = false;
          break;
        }
      if (vertex) r = std::max(r, std::atanh(x.norm()));
    }
  return r;
}

bool same_line(const GeodesicLine& a, const GeodesicLine& b) {
  return (a.p - b.p).norm() < 1e-8 &&
         std::min((a.n - b.n).norm(), (a.n + b.n).norm()) < 1e-8;
}

bool lines_cross(const GeodesicLine& a, const GeodesicLine& b) {
  auto [a1, a2] = a.endpoints();
  double s1 = b.side(a1), s2 = b.side(a2);
  if (s1 * s2 >= -1e-16) return false;
  auto [b1, b2] = b.endpoints();
  return a.side(b1) * a.side(b2) < -1e-16;
}

// lifts of the axis of `core` meeting the ball of hyperbolic radius r_keep
std::vector<GeodesicLine> collect_lifts(const SurfaceGroup& G, const GroupWord& core,
                                        double r_keep) {
  GeodesicLine ax = axis(core.M);
  const double lgam = translation_length(core.M);
  const double delta = std::atanh(std::min(ax.p.norm(), 1.0 - 1e-12));
  // any lift meeting the ball has a conjugating representative moving the
  // origin at most r_keep + lgam/2 + delta (slide along the axis stabilizer)
  const double R = r_keep + 0.5 * lgam + delta + 0.3;
  const double keep_klein = std::tanh(r_keep);
  std::vector<GeodesicLine> lines, prev;
  for (int len = 12; len <= 20; len += 2) {
    lines.clear();
    for (const GroupWord& g : G.enumerate_words(len, R)) {
      GeodesicLine l = act_line(g.M, ax);
      if (l.p.norm() > keep_klein) continue;
      bool dup = false;
      for (const GeodesicLine& seen : lines)
        if (same_line(seen, l)) {
          dup = true;
          break;
        }
      if (!dup) lines.push_back(l);
    }
    if (len > 12 && lines.size() == prev.size()) return lines;
    prev = lines;
  }
  throw std::runtime_error("collect_lifts: lift system did not saturate");
}

}  // namespace

LaminationWalker::LaminationWalker(const SurfaceGroup& G,
                                   const SimplicialLamination& lam, int perturb)
    : G_(&G) {
  if (lam.curves.empty())
    throw std::invalid_argument("LaminationWalker: empty lamination");
  const int ng = static_cast<int>(G.gens.size());
  std::vector<GeodesicLine> wall_lines;
  for (int k = 1; k <= ng; ++k)
    for (int sgn : {1, -1}) {
      int s = sgn * k;
      Vec P = G.letter(s).col(2);  // hyperboloid lift of s.0
      double nn = P.head(2).norm();
      if (nn < 1e-12) throw std::invalid_argument("LaminationWalker: elliptic letter");
      Vec n = P.head(2) / nn;
      // the bisector of 0 and s.0: <x, n> = (P_3 - 1)/|P_12|
      GeodesicLine w{((P[2] - 1.0) / nn) * n, n};
      walls_.push_back({w, s});
      wall_lines.push_back(w);
    }
  const double r_circ = wall_circumradius(wall_lines);
  for (const auto& [core, weight] : lam.curves) {
    if (weight <= 0.0)
      throw std::domain_error("LaminationWalker: non-positive weight");
    for (const GeodesicLine& l : collect_lifts(G, core, r_circ + 0.05)) {
      lifts_.push_back({l, weight});
      normals_.push_back(normal_vector(l));
      // one crossing of this lift at a lightlike w = mu (t, 1), |t| = 1,
      // contributes at most mu (|v_bar| + |v_3|)
      fold_bound_ += weight * (normals_.back().head(2).norm() +
                               std::abs(normals_.back()[2]));
    }
  }
  // basepoint: must be in the domain; nudge deterministically off the lifts
  base_ = lam.basepoint.x;
  if (!in_dirichlet_domain(G, lam.basepoint))
    throw std::domain_error("LaminationWalker: basepoint outside the Dirichlet domain");
  for (int attempt = 0;; ++attempt) {
    double worst = std::numeric_limits<double>::infinity();
    for (const LocalLift& l : lifts_)
      worst = std::min(worst, std::abs(l.line.side(base_)));
    if (worst > 2e-7) break;
    if (attempt >= 3)
      throw std::domain_error("LaminationWalker: basepoint stuck on a lift");
    double phi = 0.8473 + 2.399963 * (perturb + attempt);
    Vec dir(2);
    dir << std::cos(phi), std::sin(phi);
    base_ = lam.basepoint.x + 1.7e-6 * (1.0 + perturb + attempt) * dir;
  }
  if (perturb > 0) {
    double phi = 0.8473 + 2.399963 * perturb;
    Vec dir(2);
    dir << std::cos(phi), std::sin(phi);
    base_ += 1.3e-6 * perturb * dir;
  }
}

void LaminationWalker::walk(
    Vec w, bool ideal,
    const std::function<void(const Mat&, int, double, const Vec&)>& cb) const {
  Vec a = base_;
  Mat Gacc = Mat::Identity(3, 3);
  std::vector<double> mu{w[2]};
  const int max_folds = 400;
  for (int fold = 0; fold < max_folds; ++fold) {
    Vec t = (w.head(2) / w[2]).eval();
    if (ideal) t.normalize();
    Vec d = t - a;
    if (!ideal && d.norm() < 1e-14) return;
    // first wall exit along a + s d
    double s_end = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    int exit_i = -1;
    for (size_t i = 0; i < walls_.size(); ++i) {
      double den = d.dot(walls_[i].line.n);
      if (den <= 1e-15) continue;
      double s = (walls_[i].line.p - a).dot(walls_[i].line.n) / den;
      // a point within rounding of a wall counts as inside: a fold can land
      // ~1e-13 past the image wall and the spurious re-exit would ping-pong
      // forever; genuine corner-clip windows stay orders above this
      if (s <= 1e-12) continue;
      if (s < s_end) {
        second = s_end;
        s_end = s;
        exit_i = static_cast<int>(i);
      } else {
        second = std::min(second, s);
      }
    }
    const bool final_piece = exit_i < 0 || (!ideal && s_end >= 1.0 - 1e-12);
    if (ideal && exit_i < 0)
      throw TransversalityError("walk: ray failed to exit the domain");
    // near-vertex passes legitimately produce tiny windows and near-tied
    // walls; only an exact tie is ambiguous
    if (!final_piece && second - s_end < 1e-13)
      throw TransversalityError("walk: wall tie (vertex hit)");
    const double s_stop = final_piece ? 1.0 : s_end;
    // lift crossings inside the current window
    for (size_t i = 0; i < lifts_.size(); ++i) {
      const GeodesicLine& l = lifts_[i].line;
      double den = d.dot(l.n);
      if (std::abs(den) < 1e-15) continue;
      double s = (l.p - a).dot(l.n) / den;
      if (s <= 0.0 || s >= s_stop) continue;
      if (s < 1e-13 || s_stop - s < 1e-13)
        throw TransversalityError("walk: crossing at a fold boundary");
      double st = (t - l.p).dot(l.n);
      if (std::abs(st) < 1e-13) {
        if (ideal) continue;  // lift sharing the ideal endpoint: zero term
        throw TransversalityError("walk: target point on a lift");
      }
      cb(Gacc, static_cast<int>(i), st > 0.0 ? 1.0 : -1.0, w);
    }
    if (final_piece) return;
    // fold through the exit wall
    Vec xe = a + s_end * d;
    const Mat gi = G_->letter(-walls_[exit_i].letter);
    // fold the point projectively: near-ideal exits sit within rounding of
    // the circle, where the strict KleinPoint guard would reject them, and
    // the walk only ever intersects Euclidean chords
    Vec xl(3);
    xl << xe[0], xe[1], 1.0;
    Vec ya = gi * xl;
    a = ya.head(2) / ya[2];
    w = gi * w;
    // plain product: renormalizing here would move Gacc by O(defect) and
    // pollute the cocycle terms; Gacc is never inverted, so drift is harmless
    Gacc *= G_->letter(walls_[exit_i].letter);
    if (ideal) {
      mu.push_back(w[2]);
      size_t k = mu.size();
      // mu decays strictly along the ray; growth means the folded direction
      // has lost too many digits to cancellation to continue
      if (mu[k - 1] > 1.5 * mu[k - 2])
        throw std::runtime_error("walk: numerical breakdown before the tail bound");
      // decay rate over a trailing window, up to 8 folds: long enough to
      // average over the near-stationary long fold of a vertex-chain period,
      // but usable from 5 folds so fast rays stop before mu hits the
      // cancellation floor
      if (k > 5) {
        size_t win = std::min<size_t>(8, k - 1);
        double rho = std::pow(mu[k - 1] / mu[k - 1 - win], 1.0 / win);
        if (rho < 0.95 && fold_bound_ * mu[k - 1] * rho / (1.0 - rho) < 1e-6) return;
      }
    }
  }
  throw std::runtime_error(
      ideal ? "walk: boundary series missed the 1e-6 tail bound at the fold cap"
            : "walk: fold limit exceeded");
}

Vec LaminationWalker::cocycle_value(const GroupWord& A) const {
  KleinPoint tgt = act_klein(A.M, KleinPoint(base_));
  Vec w(3);
  w << tgt.x[0], tgt.x[1], 1.0;
  Vec out = Vec::Zero(3);
  walk(w, false, [&](const Mat& G, int i, double sg, const Vec&) {
    out += lifts_[i].weight * sg * (G * normals_[i]);
  });
  return out;
}

double LaminationWalker::height(const KleinPoint& y) const {
  Vec w(3);
  w << y.x[0], y.x[1], 1.0;
  double out = 0.0;
  walk(w, false, [&](const Mat&, int i, double sg, const Vec& wc) {
    out += lifts_[i].weight * sg * mink_form(wc, normals_[i]);
  });
  return out;
}

double LaminationWalker::boundary(double theta) const {
  Vec w(3);
  w << std::cos(theta), std::sin(theta), 1.0;
  double out = 0.0;
  walk(w, true, [&](const Mat&, int i, double sg, const Vec& wc) {
    out += lifts_[i].weight * sg * mink_form(wc, normals_[i]);
  });
  return out;
}

CocycleEvaluator::CocycleEvaluator(const SurfaceGroup& G, Cocycle tau)
    : G_(&G), coboundary_(std::move(tau.coboundary)) {
  for (auto& [lam, coeff] : tau.lam_parts) {
    Part p;
    p.lam = std::move(lam);
    p.coeff = coeff;
    p.walker = std::make_shared<const LaminationWalker>(G, p.lam);
    parts_.push_back(std::move(p));
  }
}

template <class F>
auto CocycleEvaluator::with_retry(const Part& p, F&& f) const
    -> decltype(f(*p.walker)) {
  for (;;) {
    try {
      return f(*p.walker);
    } catch (const TransversalityError&) {
      if (p.perturb >= 3) throw;
      ++p.perturb;
      p.walker = std::make_shared<const LaminationWalker>(*G_, p.lam, p.perturb);
    }
  }
}

Vec CocycleEvaluator::value(const GroupWord& A) const {
  Vec out = A.M * coboundary_ - coboundary_;
  for (const Part& p : parts_)
    out += p.coeff *
           with_retry(p, [&](const LaminationWalker& w) { return w.cocycle_value(A); });
  return out;
}

double CocycleEvaluator::boundary(double theta) const {
  Vec xi(2);
  xi << std::cos(theta), std::sin(theta);
  // the invariant map of the coboundary part is -<x, v_bar> + v_3
  double out = coboundary_[2] - xi.dot(coboundary_.head(2));
  for (const Part& p : parts_)
    out += p.coeff *
           with_retry(p, [&](const LaminationWalker& w) { return w.boundary(theta); });
  return out;
}

double CocycleEvaluator::height(const KleinPoint& y) const {
  double out = coboundary_[2] - y.x.dot(coboundary_.head(2));
  for (const Part& p : parts_)
    out += p.coeff *
           with_retry(p, [&](const LaminationWalker& w) { return w.height(y); });
  return out;
}

void validate_lamination(const SurfaceGroup& G, const SimplicialLamination& lam) {
  for (const auto& [core, weight] : lam.curves)
    if (weight <= 0.0) throw std::domain_error("lamination: non-positive weight");
  LaminationWalker walker(G, lam);  // checks basepoint and enumerates lifts
  const auto& lifts = walker.local_lifts();
  for (size_t i = 0; i < lifts.size(); ++i)
    for (size_t j = i + 1; j < lifts.size(); ++j)
      if (lines_cross(lifts[i].line, lifts[j].line))
        throw std::domain_error("lamination: lift systems cross");
}

Cocycle scale_cocycle(const Cocycle& tau, double a) {
  Cocycle s = tau;
  for (auto& part : s.lam_parts) part.second *= a;
  s.coboundary *= a;
  return s;
}

Cocycle add_cocycles(const Cocycle& t1, const Cocycle& t2) {
  Cocycle s = t1;
  s.lam_parts.insert(s.lam_parts.end(), t2.lam_parts.begin(), t2.lam_parts.end());
  s.coboundary += t2.coboundary;
  return s;
}

Vec cocycle_value(const SurfaceGroup& G, const Cocycle& tau, const GroupWord& A) {
  return CocycleEvaluator(G, tau).value(A);
}

double wedge_sum_eval(const SurfaceGroup& G, const SimplicialLamination& lam,
                      const KleinPoint& y) {
  Cocycle tau;
  tau.lam_parts.push_back({lam, 1.0});
  return CocycleEvaluator(G, tau).height(y);
}

double boundary_value(const SurfaceGroup& G, const Cocycle& tau, double theta) {
  return CocycleEvaluator(G, tau).boundary(theta);
}

double BoundaryFunction::operator()(double theta) const {
  const int N = static_cast<int>(samples.size());
  double u = theta / (2.0 * M_PI) * N;
  u -= std::floor(u / N) * N;
  int i = static_cast<int>(std::floor(u));
  if (i >= N) i = 0;
  double f = u - i;
  return samples[i] * (1.0 - f) + samples[(i + 1) % N] * f;
}

BoundaryFunction sample_boundary(const SurfaceGroup& G, const Cocycle& tau, int N) {
  if (N < 16) throw std::invalid_argument("sample_boundary: N < 16");
  CocycleEvaluator ev(G, tau);
  BoundaryFunction b;
  b.samples = Vec(N);
  for (int k = 0; k < N; ++k) b.samples[k] = ev.boundary(2.0 * M_PI * k / N);
  return b;
}

double check_equivariance(const SurfaceGroup& G, const Cocycle& tau,
                          const HeightFn& h, const GroupWord& A, int nsamples) {
  Isometry iso{A.M, cocycle_value(G, tau, A)};
  HeightFn moved = act_function(iso, h);
  double worst = 0.0;
  for (int i = 0; i < nsamples; ++i) {
    double r = 0.85 * std::sqrt((i + 0.5) / nsamples);
    double th = 2.399963229728653 * i;
    Vec x(2);
    x << r * std::cos(th), r * std::sin(th);
    KleinPoint p(x);
    worst = std::max(worst, std::abs(moved(p) - h(p)));
  }
  return worst;
}

}  // namespace hp
