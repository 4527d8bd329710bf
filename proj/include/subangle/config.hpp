#pragma once

#include <cstddef>
#include <optional>

namespace subangle {

/// Numerical thresholds shared by every routine in the library.
///
/// All defaults are absolute or relative as documented per field. Every
/// public operation takes a `const Tolerances&` defaulting to `{}` so a caller
/// can override any threshold for a single call.
struct Tolerances {
  /// Orthonormality check on produced bases: |<u,v> - delta| <= orth.
  double orth = 1e-10;

  /// Absolute rank threshold. When unset the threshold is
  /// max(rows, cols) * machine-epsilon * (largest input row norm).
  std::optional<double> rank;

  /// Jacobi stops when off-diagonal Frobenius mass <= jacobi_rel * ||A||_F.
  double jacobi_rel = 1e-14;
  int jacobi_max_sweeps = 64;

  /// Accepted asymmetry for symmetric routines, relative to ||A||_max.
  double symmetry = 1e-12;

  /// Two eigenvalues in [0,1] belong to one principal value iff they differ
  /// by at most this much. Values within it of 0 or 1 snap to 0 or 1.
  double cluster = 1e-7;

  /// Containment: projector residual and |det[MM^T] - 1| bound.
  double containment = 1e-9;

  /// Relative zero threshold for eigenvalues in the inertia module.
  double zero = 1e-9;
};

}  // namespace subangle
