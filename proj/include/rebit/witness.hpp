#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rebit/pauli.hpp"

namespace rebit {

/// L = lz sz(x)sz + lx sx(x)sx + ly sy(x)sy.
struct DiagObservable {
  double lz = 0.0;
  double lx = 0.0;
  double ly = 0.0;

  /// Real symmetric matrix in the (HH, HV, VH, VV) basis.
  Matrix4 matrix() const;
  double coefficient(Pauli p) const;
};

/// sy (x) sy, the witness separating rebit from qubit entanglement.
inline constexpr DiagObservable kSigmaYY{0.0, 0.0, 1.0};

struct SeparabilityEigenpair {
  double value = 0.0;
  LocalState alice;
  LocalState bob;
  Field field = Field::Complex;
  /// A reduced operator vanished identically; every unit vector solves the
  /// corresponding half of the eigenvalue equations.
  bool degenerate = false;
};

struct OrdinaryEigenpair {
  double value = 0.0;
  BellState which;
  Vector4c ket;
};

struct Bounds {
  double min = 0.0;
  double max = 0.0;
  /// Number of solver starts that failed to converge (numeric path only).
  int unconverged_starts = 0;
};

/// Closed-form separability spectrum of a Pauli-diagonal observable.
/// Real: 8 pairs over {H,V}^2 and {D,A}^2. Complex adds {R,L}^2.
std::vector<SeparabilityEigenpair> analytic_spectrum(const DiagObservable& obs, Field field);

/// Bell eigenvectors and eigenvalues, ordered (Phi+, Phi-, Psi+, Psi-).
std::vector<OrdinaryEigenpair> ordinary_spectrum(const DiagObservable& obs);

struct SolverOptions {
  int n_starts = 64;
  std::uint64_t seed = 0;
  int max_iters = 500;
  /// Convergence threshold on the change of the separability value.
  double tol = 1e-13;
  /// Tolerance for merging duplicate fixed points.
  double dedup_tol = 1e-6;
};

struct NumericSpectrum {
  std::vector<SeparabilityEigenpair> pairs;  // sorted by value, deduplicated
  int unconverged_starts = 0;
};

/// Multistart alternating solver for the separability eigenvalue equations
///   L_b |a> = g |a>,  L_a |b> = g |b>
/// of a real symmetric 4x4 observable. Each start follows both the
/// largest- and smallest-eigenvalue branch; converged points are polished
/// with Newton steps on the stationarity conditions.
NumericSpectrum numeric_separability_eigs(const Matrix4& obs, Field field,
                                          const SolverOptions& opts = {});

/// Largest residual of the two fixed-point equations for a candidate pair.
double separability_residual(const Matrix4& obs, const SeparabilityEigenpair& pair);

/// Reduced operator on Bob's side, (<a| (x) 1) L (|a> (x) 1).
Matrix2c reduce_on_alice(const Matrix4& obs, const Vector2c& a);
/// Reduced operator on Alice's side, (1 (x) <b|) L (1 (x) |b>).
Matrix2c reduce_on_bob(const Matrix4& obs, const Vector2c& b);

Bounds bounds(const DiagObservable& obs, Field field);
Bounds bounds(const Matrix4& obs, Field field, const SolverOptions& opts = {});

/// Smallest and largest ordinary eigenvalue.
Bounds ordinary_bounds(const DiagObservable& obs);

inline constexpr double kDefaultSignificance = 5.0;

struct WitnessVerdict {
  double expectation = 0.0;
  double sigma = 0.0;
  Bounds real_bounds;
  Bounds complex_bounds;
  bool r_entangled = false;
  bool c_entangled = false;
  /// Excess over the nearest violated separable bound in units of sigma;
  /// +infinity for an exact violation, 0 when nothing is violated.
  double significance = 0.0;
};

WitnessVerdict evaluate_witness(const CorrelationMatrix& g, const DiagObservable& obs,
                                const std::optional<Matrix4>& sigma_gamma = std::nullopt,
                                double k = kDefaultSignificance, double tol = kDefaultTol);

}  // namespace rebit
