#include "hp/fuchsian2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace hp {

namespace {

// Deduplication of group elements.  Two elements are identified when their
// matrices differ by < 1e-6 in max norm.  Distinct elements of a cocompact
// torsion-free group move the origin apart by at least the systole, which
// makes the translation columns at least ~2 apart in max norm, so a coarse
// spatial hash on the translation column with neighbor scan is exact.
struct ElementSet {
  struct Key {
    long a, b, c;
    bool operator==(const Key& o) const { return a == o.a && b == o.b && c == o.c; }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return std::hash<long>()(k.a * 73856093L ^ k.b * 19349663L ^ k.c * 83492791L);
    }
  };
  static constexpr double cell = 1.0;
  std::unordered_map<Key, std::vector<Mat>, KeyHash> buckets;

  Key key_of(const Mat& M, long da, long db, long dc) const {
    return {static_cast<long>(std::floor(M(0, 2) / cell)) + da,
            static_cast<long>(std::floor(M(1, 2) / cell)) + db,
            static_cast<long>(std::floor(M(2, 2) / cell)) + dc};
  }

  bool insert(const Mat& M) {  // returns false if already present
    for (long da = -1; da <= 1; ++da)
      for (long db = -1; db <= 1; ++db)
        for (long dc = -1; dc <= 1; ++dc) {
          auto it = buckets.find(key_of(M, da, db, dc));
          if (it == buckets.end()) continue;
          for (const Mat& N : it->second)
            if ((M - N).cwiseAbs().maxCoeff() < 1e-6) return false;
        }
    buckets[key_of(M, 0, 0, 0)].push_back(M);
    return true;
  }
};

double origin_displacement(const Mat& M) {  // d(0, g.0)
  return std::acosh(std::max(1.0, M(2, 2)));
}

}  // namespace

Mat SurfaceGroup::letter(int s) const {
  if (s == 0 || std::abs(s) > static_cast<int>(gens.size()))
    throw std::invalid_argument("SurfaceGroup::letter: bad index");
  const Mat& A = gens[std::abs(s) - 1];
  if (s > 0) return A;
  Mat J = mink_J(3);
  return J * A.transpose() * J;
}

std::vector<GroupWord> SurfaceGroup::enumerate_words(int max_len,
                                                     double prune_radius) const {
  if (max_len < 0) throw std::invalid_argument("enumerate_words: negative length");
  const bool cacheable = std::isfinite(prune_radius);
  std::pair<int, long> key{max_len, cacheable ? std::lround(prune_radius * 4096) : 0};
  if (cacheable) {
    auto it = word_cache_.find(key);
    if (it != word_cache_.end()) return it->second;
  }
  // Prefixes are kept up to prune_radius + slack so that elements inside the
  // radius reachable only through slightly longer excursions are not missed;
  // the saturation checks downstream validate this margin.
  const double slack = 3.5;
  std::vector<GroupWord> out;
  ElementSet seen;
  GroupWord id{{}, Mat::Identity(3, 3)};
  seen.insert(id.M);
  out.push_back(id);
  std::vector<GroupWord> frontier{id};
  const int ng = static_cast<int>(gens.size());
  for (int len = 1; len <= max_len && !frontier.empty(); ++len) {
    std::vector<GroupWord> next;
    for (const GroupWord& w : frontier) {
      int last = w.letters.empty() ? 0 : w.letters.back();
      for (int s = -ng; s <= ng; ++s) {
        if (s == 0 || s == -last) continue;  // reduced words only
        Mat M = w.M * letter(s);
        if (j_defect(M) > 1e-10) M = j_orthonormalize(M);
        double disp = origin_displacement(M);
        if (disp > prune_radius + slack) continue;
        if (!seen.insert(M)) continue;
        GroupWord nw;
        nw.letters = w.letters;
        nw.letters.push_back(s);
        nw.M = std::move(M);
        if (disp <= prune_radius) out.push_back(nw);
        next.push_back(std::move(nw));
      }
    }
    frontier = std::move(next);
  }
  if (cacheable) word_cache_[key] = out;
  return out;
}

const std::vector<Vec>& SurfaceGroup::orbit_lifts(int word_len, double radius) const {
  auto key = std::make_pair(word_len, static_cast<int>(radius * 64));
  auto it = orbit_cache_.find(key);
  if (it != orbit_cache_.end()) return it->second;
  std::vector<Vec> pts;
  for (const GroupWord& w : enumerate_words(word_len, radius)) {
    if (w.letters.empty()) continue;
    pts.push_back(w.M.col(2));  // hyperboloid lift of g.0
  }
  std::sort(pts.begin(), pts.end(),
            [](const Vec& a, const Vec& b) { return a[2] < b[2]; });
  return orbit_cache_.emplace(key, std::move(pts)).first->second;
}

SurfaceGroup build_octagon_group() {
  SurfaceGroup G;
  const double ell = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
  for (int k = 0; k < 4; ++k)
    G.gens.push_back(rotation2(k * M_PI / 4) * boost(2, 0, ell) *
                     rotation2(-k * M_PI / 4));
  G.relator = {1, -2, 3, -4, -1, 2, -3, 4};
  Mat R = Mat::Identity(3, 3);
  for (int s : G.relator) R *= G.letter(s);
  if ((R - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("octagon group: relator defect too large");
  return G;
}

double translation_length(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A);
  double mu = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(es.eigenvalues()[i].imag()) > 1e-9) continue;
    mu = std::max(mu, es.eigenvalues()[i].real());
  }
  if (mu < 1.0 + 1e-9)
    throw std::domain_error("translation_length: element is not hyperbolic");
  return std::log(mu);
}

GeodesicLine axis(const Mat& A) {
  const double mu = std::exp(translation_length(A));  // throws if not hyperbolic
  // eigenvectors as kernels of A - lambda I (robust, stays real)
  auto ideal = [&](double lam) {
    Eigen::JacobiSVD<Mat> svd(A - lam * Mat::Identity(3, 3), Eigen::ComputeFullV);
    Vec v = svd.matrixV().col(2);
    if (std::abs(v[2]) < 1e-12) throw std::domain_error("axis: degenerate eigenvector");
    Vec e = v.head(2) / v[2];
    return (e / e.norm()).eval();  // lightlike eigenvectors project to the circle
  };
  return GeodesicLine::from_endpoints(ideal(1.0 / mu), ideal(mu));
}

bool in_dirichlet_domain(const SurfaceGroup& G, const KleinPoint& x, int word_len) {
  // Orbit points beyond hyperbolic radius 2 d(0,x) + eps cannot beat the
  // origin; radius 10 covers every point of B^2 we ever integrate over
  // (L > 1e-3 truncation, d < ~7.6).
  const std::vector<Vec>& orbit = G.orbit_lifts(word_len, 10.0);
  Vec X = hyperboloid_lift(x);
  const double cosh_d0 = X[2];
  const double tol = 1e-12 * std::max(1.0, cosh_d0);
  // orbit is sorted by distance to the origin; a point with
  // d(0,p) > 2 d(0,x) satisfies d(p,x) >= d(0,p) - d(0,x) > d(0,x) and can
  // never beat the origin, so we may stop there
  const double stop = 2.0 * cosh_d0 * cosh_d0 - 1.0 + 1e-9;  // cosh(2 d(0,x))
  for (const Vec& P : orbit) {
    if (P[2] > stop) break;
    double cosh_dp = P[2] * X[2] - P.head(2).dot(X.head(2));  // -<P,X> = cosh d(p,x)
    if (cosh_dp < cosh_d0 - tol) return false;
  }
  return true;
}

std::vector<GeodesicLift> lifts_crossing_segment(const SurfaceGroup& G,
                                                 const std::vector<GroupWord>& cores,
                                                 const KleinPoint& a,
                                                 const KleinPoint& b, int word_len) {
  std::vector<GeodesicLift> out;
  if ((a.x - b.x).norm() < 1e-15) return out;
  const double R =
      std::max(hyp_distance(KleinPoint(Vec::Zero(2)), a),
               hyp_distance(KleinPoint(Vec::Zero(2)), b)) + 3.0;
  std::vector<GroupWord> words = G.enumerate_words(word_len, R);
  Mat J = mink_J(3);
  for (const GroupWord& core : cores) {
    GeodesicLine ax = axis(core.M);
    auto [e1, e2] = ax.endpoints();
    for (const GroupWord& g : words) {
      // transported chord endpoints
      auto map_ideal = [&](const Vec& e) {
        Vec lift(3);
        lift << e[0], e[1], 1.0;
        Vec y = g.M * lift;
        return ((y.head(2) / y[2]).normalized()).eval();
      };
      Vec f1 = map_ideal(e1), f2 = map_ideal(e2);
      GeodesicLine line = GeodesicLine::from_endpoints(f1, f2);
      double sa = line.side(a.x), sb = line.side(b.x);
      if (std::abs(sa) < 1e-12 || std::abs(sb) < 1e-12)
        throw std::runtime_error(
            "lifts_crossing_segment: endpoint on a lift (degenerate transversality)");
      if (sa * sb >= 0.0) continue;  // no crossing of the open segment
      // dedup by line geometry
      bool dup = false;
      for (const GeodesicLift& seen : out) {
        if ((seen.line.p - line.p).norm() < 1e-8 &&
            std::min((seen.line.n - line.n).norm(), (seen.line.n + line.n).norm()) <
                1e-8) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
      GeodesicLift lift;
      lift.line = line;
      lift.element.letters = g.letters;
      lift.element.letters.insert(lift.element.letters.end(), core.letters.begin(),
                                  core.letters.end());
      for (auto it = g.letters.rbegin(); it != g.letters.rend(); ++it)
        lift.element.letters.push_back(-*it);
      lift.element.M = g.M * core.M * (J * g.M.transpose() * J);
      out.push_back(std::move(lift));
    }
  }
  return out;
}

}  // namespace hp
