#pragma once

// Line-oriented plain-text ingestion and export: group and cocycle files with
// versioned headers, the norm key-value record, polar field dumps, the
// Dirichlet mask and the envelope mesh.  All writers format numbers with
// %.17g, so fixed inputs give byte-identical outputs.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hp/envelope.hpp"
#include "hp/measures.hpp"

namespace hp {

// Carries "file:line: message".
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// hp-group v1: "genus g", "gens n", n x "gen <9 entries, row-major>",
// "relator <signed letters>".  Matrix entries are taken as written; isometry
// defects are the validator's job, not the parser's.
SurfaceGroup load_group(const std::string& path);
void save_group(const std::string& path, const SurfaceGroup& G);

// hp-cocycle v1: optional "coboundary vx vy vz", then blocks
// "part <coeff>" / optional "basepoint x y" / "curve <weight> <letters...>".
Cocycle load_cocycle(const SurfaceGroup& G, const std::string& path);
void save_cocycle(const std::string& path, const Cocycle& tau);

// hp-norm v1 record: one "key value" line per field, keys s1_plus, s1_minus,
// volume, lam_length, area_check, error_bar plus the settings.
std::string norm_record(const NormReport& r);

// hp-field v1: header (field name, nr, ntheta), then one "r theta value"
// line per node in row-major (radius-major) order.
void write_polar_field(std::ostream& os, const std::string& name,
                       const ScalarField& f);

// hp-mask v1: n x n Cartesian grid over [-1,1]^2, rows of 0/1 flags for
// membership in the Dirichlet domain at the origin.
void write_mask_grid(std::ostream& os, const SurfaceGroup& G, int n,
                     int word_len = 8);

// hp-mesh v1: envelope boundary samples, faces and face planes.
void write_envelope_mesh(std::ostream& os, const LowerEnvelope& env);

// %.17g, the round-trip format used by every writer here.
std::string fmt_g17(double v);

}  // namespace hp
