#pragma once

// Weighted systems of disjoint closed geodesics on the quotient surface,
// their crossing cocycles tau(A) = sum of weighted lift normals over the
// segment [x~, A.x~], the piecewise-affine invariant map h, and its boundary
// values.  Evaluation folds segments/rays back into the Dirichlet domain, so
// only the finite set of lifts meeting the domain is ever enumerated.

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hp/fuchsian2.hpp"

namespace hp {

struct SimplicialLamination {
  // core word + strictly positive weight, one entry per closed geodesic;
  // the lift systems of all entries together must be pairwise disjoint
  std::vector<std::pair<GroupWord, double>> curves;
  // must lie in the Dirichlet domain; nudged deterministically at walker
  // construction if it falls on a lift (the default origin does, for any
  // generator core), so every evaluation of the same object agrees
  KleinPoint basepoint{Vec::Zero(2)};
};

// A cocycle: linear combination of lamination crossing cocycles plus a
// coboundary part A |-> A.v - v.
struct Cocycle {
  std::vector<std::pair<SimplicialLamination, double>> lam_parts;
  Vec coboundary = Vec::Zero(3);
};

// Raised when a segment/ray passes through a tiling vertex or hits a lift at
// a fold boundary; callers retry with a perturbed basepoint.
struct TransversalityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LocalLift {
  GeodesicLine line;
  double weight;
};

// Folding evaluator for one weighted lamination.  Construction enumerates the
// lifts meeting the Dirichlet domain (saturated in word length) once; each
// query walks a straight segment or ray, folding back into the domain through
// the generator walls while accumulating the conjugating element.
class LaminationWalker {
 public:
  LaminationWalker(const SurfaceGroup& G, const SimplicialLamination& lam,
                   int perturb = 0);

  // tau(A): signed weighted lift normals over the crossings of [x~, A.x~];
  // each normal points to the side of A.x~.
  Vec cocycle_value(const GroupWord& A) const;
  // h(y): sum of weight * h_l(y) over lifts crossing [x~, y], each canonical
  // map positive at y; convex, zero on the basepoint cell.
  double height(const KleinPoint& y) const;
  // Boundary value of h at (cos theta, sin theta): the crossing series along
  // the ray, truncated under a certified geometric tail bound of 1e-6 (rays
  // asymptotic to a vertex chain hit cancellation around 1e-7, so the target
  // leaves headroom).
  double boundary(double theta) const;

  const Vec& basepoint() const { return base_; }
  const std::vector<LocalLift>& local_lifts() const { return lifts_; }

 private:
  struct Wall {
    GeodesicLine line;  // n points away from the origin
    int letter;
  };
  const SurfaceGroup* G_;
  std::vector<Wall> walls_;
  std::vector<LocalLift> lifts_;
  std::vector<Vec> normals_;  // unit spacelike normal of each lift, side of stored n
  Vec base_;
  double fold_bound_ = 0.0;  // series contribution bound of one fold at |w| = 1

  // cb(accumulated element, lift index, orientation sign, current target lift)
  void walk(Vec w, bool ideal,
            const std::function<void(const Mat&, int, double, const Vec&)>& cb) const;
};

// Evaluator for a full cocycle (laminations + coboundary) with deterministic
// basepoint-perturbation retries on transversality failures (3 attempts).
class CocycleEvaluator {
 public:
  CocycleEvaluator(const SurfaceGroup& G, Cocycle tau);
  Vec value(const GroupWord& A) const;
  double boundary(double theta) const;
  // the invariant map: weighted lamination heights plus the invariant affine
  // map v_3 - <x, v_bar> of the coboundary part
  double height(const KleinPoint& y) const;

 private:
  struct Part {
    SimplicialLamination lam;
    double coeff;
    mutable std::shared_ptr<const LaminationWalker> walker;
    mutable int perturb = 0;
  };
  const SurfaceGroup* G_;
  Vec coboundary_;
  std::vector<Part> parts_;

  template <class F>
  auto with_retry(const Part& p, F&& f) const -> decltype(f(*p.walker));
};

// Throws domain_error on non-positive weights, crossing lift systems, or a
// basepoint outside the Dirichlet domain.
void validate_lamination(const SurfaceGroup& G, const SimplicialLamination& lam);

// Linear structure on cocycles: coefficients and coboundary scale/add.
Cocycle scale_cocycle(const Cocycle& tau, double a);
Cocycle add_cocycles(const Cocycle& t1, const Cocycle& t2);

Vec cocycle_value(const SurfaceGroup& G, const Cocycle& tau, const GroupWord& A);
double wedge_sum_eval(const SurfaceGroup& G, const SimplicialLamination& lam,
                      const KleinPoint& y);
double boundary_value(const SurfaceGroup& G, const Cocycle& tau, double theta);

// Boundary values sampled at theta_k = 2 pi k / N, linearly interpolated.
struct BoundaryFunction {
  Vec samples;
  double operator()(double theta) const;
};
BoundaryFunction sample_boundary(const SurfaceGroup& G, const Cocycle& tau, int N);

// max over interior samples of |((A, tau(A)) h)(x) - h(x)|; ~0 for maps
// equivariant under the deformed action.
double check_equivariance(const SurfaceGroup& G, const Cocycle& tau,
                          const HeightFn& h, const GroupWord& A,
                          int nsamples = 200);

}  // namespace hp
