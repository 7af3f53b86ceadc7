#pragma once

#include <span>
#include <vector>

#include "rebit/pauli.hpp"
#include "rebit/standard_form.hpp"

namespace rebit {

/// Quasiprobabilities P_std(a, b) over the rebit alphabet {H,V,D,A} (4x4) or
/// the qubit alphabet {H,V,D,A,R,L} (6x6), rows indexed by Alice.
struct WeightTable {
  Field field = Field::Complex;
  Eigen::MatrixXd weights;

  std::span<const Polarization> alphabet() const;
};

struct QuasiEntry {
  /// Standard-form polarization states the transformed ones originate from.
  Polarization alice_source = Polarization::H;
  Polarization bob_source = Polarization::H;
  LocalState alice;
  LocalState bob;
  double weight = 0.0;
};

struct QuasiDecomposition {
  std::vector<QuasiEntry> entries;
  Field field = Field::Complex;
  /// Coefficient of sy (x) sy left over by a rebit expansion; zero for qubits.
  double residual_coeff = 0.0;

  double weight_sum() const;
  double min_weight() const;
  /// Weights laid out as the source alphabet table.
  WeightTable table() const;
};

WeightTable pstd_rebit(const CorrelationMatrix& g_std, double tol = kDefaultTol);
WeightTable pstd_qubit(const CorrelationMatrix& g_std, double tol = kDefaultTol);

/// Moves a standard-form expansion back to the original frame:
/// Gamma_a' = A^{-1} Gamma_a / (A^{-1} Gamma_a)_0, weights rescaled by the
/// product of the [0] components and renormalized. Structural zeros of the
/// table (outside its diagonal blocks) are omitted.
QuasiDecomposition transform_quasi(const WeightTable& p_std, const LocalMapPair& maps);

/// sum weight * alice.bloch * bob.bloch^T.
CorrelationMatrix local_reconstruction(const QuasiDecomposition& d);

struct DecompositionResult {
  QuasiDecomposition decomposition;
  double distance = 0.0;
  CorrelationMatrix reconstruction;
  StandardFormResult standard_form;
  WeightTable p_std;
};

/// Standard form -> closed-form P_std -> back-transformation -> local
/// reconstruction. The distance is measured against the unprojected input.
DecompositionResult decompose(const CorrelationMatrix& g, Field field,
                              const StandardFormOptions& opts = {});

/// True iff every weight is >= -tol and the residual vanishes.
bool separability_certificate(const QuasiDecomposition& d, double tol = kDefaultTol);
/// Additionally requires the reconstruction to match the source state.
bool separability_certificate(const DecompositionResult& r, double tol = kDefaultTol);

/// Rounds |w| < 1e-12 to exactly zero for presentation.
double display_weight(double w);

}  // namespace rebit
