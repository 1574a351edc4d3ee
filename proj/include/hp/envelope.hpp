#pragma once

// Convex envelopes of boundary data on the disk (d = 2 only): the largest
// convex function below the data (lower) and its concave mirror (upper),
// computed as the lower hull of the lifted circle samples
// (cos t_k, sin t_k, b(t_k)).

#include <array>
#include <vector>

#include "hp/duality.hpp"
#include "hp/lamination.hpp"

namespace hp {

// Piecewise-affine convex (sign=+1) or concave (sign=-1) function on the
// closed disk.  faces triangulate the N-gon of boundary samples; planes hold
// one affine function per face, and the value at x is sign * max over planes.
struct LowerEnvelope {
  double sign = 1.0;
  Vec samples;  // the envelope's own boundary values at t_k = 2 pi k / N
  std::vector<std::array<int, 3>> faces;
  std::vector<AffineFunction> planes;  // planes of the underlying lower hull
};

// Lower hull of the lifted samples by gift-wrapping from the boundary edges;
// every sample is a hull vertex since the projections are in convex position.
// Requires N >= 16.  Affine data degenerates to coplanar faces (still valid).
LowerEnvelope lower_envelope(const BoundaryFunction& b);

// Concave envelope via the negation identity: value -lower_envelope(-b).
LowerEnvelope upper_envelope(const BoundaryFunction& b);

// sign * max over face planes; exact for interior and boundary points.
double envelope_eval(const LowerEnvelope& env, const KleinPoint& x);

// Reference value by direct optimization: maximize <x,w> + c subject to
// <xi_k, w> + c <= b(xi_k) for all samples (Seidel's randomized LP in 3
// variables, deterministic seed).  Agrees with envelope_eval to rounding.
double lp_oracle(const BoundaryFunction& b, const KleinPoint& x);

}  // namespace hp
