#pragma once

#include "rebit/pauli.hpp"

namespace rebit {

/// Local invertible maps in their action on Bloch 4-vectors, so that a
/// state transforms as Gamma -> A Gamma B^T. Maps produced here are proper
/// orthochronous Lorentz transformations (unit-determinant filters); for
/// the Real field they act as the identity on the y component.
struct LocalMapPair {
  Matrix4 alice = Matrix4::Identity();
  Matrix4 bob = Matrix4::Identity();
  Field field = Field::Complex;
};

struct StandardFormOptions {
  /// Target for the relative marginal Bloch length after filtering.
  double tol = 1e-13;
  /// Smallest admissible marginal eigenvalue.
  double rank_tol = 1e-6;
  int max_iters = 200;
};

struct StandardFormResult {
  /// Diagonal A Gamma B^T. Entry [0,0] is the scale left by the filters and
  /// is generally below one; the remaining diagonal may be negative.
  CorrelationMatrix gamma_std;
  LocalMapPair maps;
  double residual_offdiag = 0.0;
  int filter_iterations = 0;
};

/// Two-step reduction: iterative local filtering removes both marginals,
/// then an SVD of the 3x3 correlation block (restricted to the z-x plane for
/// rebits) diagonalizes the remainder with proper rotations. The Real field
/// reduces real_projection(g).
///
/// Throws SingularMarginal for rank-deficient marginals and NonConvergence
/// when filtering stalls.
StandardFormResult to_standard_form(const CorrelationMatrix& g, Field field,
                                    const StandardFormOptions& opts = {});

/// A^{-1} Gamma_std B^{-T}, renormalized to Gamma[0,0] = 1.
CorrelationMatrix apply_local_maps(const CorrelationMatrix& g_std, const LocalMapPair& maps);

/// Lorentz boost taking the future-timelike 4-vector v to the rest frame,
/// i.e. boost(v) * v is proportional to (1, 0, 0, 0).
Matrix4 rest_frame_boost(const Vector4& v);

}  // namespace rebit
