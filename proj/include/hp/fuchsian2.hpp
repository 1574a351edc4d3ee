#pragma once

// A cocompact genus-2 lattice in O_+(2,1) built from the regular octagon,
// word enumeration with pruning/deduplication, axes, translation lengths,
// Dirichlet-domain membership and enumeration of geodesic lifts.

#include <limits>
#include <map>
#include <vector>

#include "hp/duality.hpp"
#include "hp/isometry.hpp"

namespace hp {

// A word in the generators.  Letters are signed 1-based generator indices:
// +k means generator k-1, -k its inverse.
struct GroupWord {
  std::vector<int> letters;
  Mat M;  // cached ordered product
};

struct SurfaceGroup {
  std::vector<Mat> gens;     // linear parts, v = 0
  std::vector<int> relator;  // signed letters; evaluates to the identity
  int genus = 2;

  Mat letter(int s) const;  // matrix of a signed letter
  int n_letters() const { return 2 * static_cast<int>(gens.size()); }

  // All reduced words up to length max_len, deduplicated as group elements
  // (matrix proximity 1e-6).  Words whose element moves the origin farther
  // than prune_radius (hyperbolic) are dropped; the search keeps prefixes up
  // to prune_radius + slack so short representatives are not lost.
  std::vector<GroupWord> enumerate_words(
      int max_len,
      double prune_radius = std::numeric_limits<double>::infinity()) const;

  // Orbit of the origin under words of length <= word_len within the given
  // hyperbolic radius; cached.  Points returned as hyperboloid lifts.
  const std::vector<Vec>& orbit_lifts(int word_len, double radius) const;

 private:
  mutable std::map<std::pair<int, int>, std::vector<Vec>> orbit_cache_;
  mutable std::map<std::pair<int, long>, std::vector<GroupWord>> word_cache_;
};

// The genus-2 group of the regular octagon with vertex angle pi/4:
// generators R(k pi/4) B(l) R(-k pi/4), l = 2 arccosh(1 + sqrt 2),
// relator a b^-1 c d^-1 a^-1 b c^-1 d.
SurfaceGroup build_octagon_group();

// l = log of the top eigenvalue of a hyperbolic element of SO_+(2,1).
// Throws for elliptic/parabolic input (top eigenvalue within 1e-9 of 1).
double translation_length(const Mat& A);

// Axis of a hyperbolic element: the chord joining its two lightlike
// eigendirections (repelling endpoint, attracting endpoint order).
GeodesicLine axis(const Mat& A);

// Dirichlet-domain indicator at the origin: true iff d(0,x) <= d(0, g.x)
// for all non-identity g of word length <= word_len (ties count as inside).
bool in_dirichlet_domain(const SurfaceGroup& G, const KleinPoint& x,
                         int word_len = 8);

struct GeodesicLift {
  GroupWord element;  // g gamma g^-1, whose axis is the line
  GeodesicLine line;
};

// All distinct lifts g.axis(core_i) (|g| <= word_len) crossing the open
// segment (a, b).  Throws if an endpoint sits on a lift (within 1e-12).
std::vector<GeodesicLift> lifts_crossing_segment(
    const SurfaceGroup& G, const std::vector<GroupWord>& cores,
    const KleinPoint& a, const KleinPoint& b, int word_len = 8);

}  // namespace hp
