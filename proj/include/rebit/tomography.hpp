#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "rebit/pauli.hpp"

namespace rebit {

/// Coincidence counts of one basis setting, ordered (++, +-, -+, --) with
/// the first sign for Alice.
using OutcomeCounts = std::array<std::uint64_t, 4>;

using Setting = std::pair<Pauli, Pauli>;

inline constexpr std::array<Pauli, 3> kBases = {Pauli::Z, Pauli::X, Pauli::Y};
inline constexpr std::uint64_t kDefaultEvents = 100000;
inline constexpr int kDefaultMonteCarloSamples = 10000;

struct CountsDataset {
  std::map<Setting, OutcomeCounts> settings;

  /// Throws ParseError naming the first missing setting.
  void require_complete() const;
  bool operator==(const CountsDataset&) const = default;
};

struct EstimatedState {
  CorrelationMatrix gamma;
  Matrix4 sigma = Matrix4::Zero();
};

/// Multinomial coincidence counts for all nine settings. Each setting draws
/// from its own generator seeded with (seed, setting index).
CountsDataset simulate_counts(const CorrelationMatrix& g_true, std::uint64_t events_per_setting,
                              std::uint64_t seed);

/// Outcome probabilities (++, +-, -+, --) of setting (mu, nu).
std::array<double, 4> outcome_probabilities(const CorrelationMatrix& g, Pauli mu, Pauli nu);

/// Linear-inversion estimate with binomial standard errors. Marginals are
/// averaged over the partner's three settings.
EstimatedState estimate_correlations(const CountsDataset& c);

/// Weighted classical mixture of datasets: counts are scaled by the
/// normalized weights and summed per setting. Rounding to integers uses the
/// largest remainders, so each setting keeps its rounded weighted total.
CountsDataset mix_datasets(const std::vector<std::pair<CountsDataset, double>>& parts);

/// Clips negative eigenvalues of the density matrix and renormalizes.
/// Returns the input unchanged (second = false) when it is already physical.
std::pair<CorrelationMatrix, bool> repair_physical(const CorrelationMatrix& g);

using Analysis = std::function<Eigen::VectorXd(const CorrelationMatrix&)>;

struct MonteCarloResult {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;
  int samples = 0;
  int failures = 0;
  int repaired = 0;
};

/// Propagates the estimate's uncertainties through `analysis` by sampling
/// entrywise normal correlation matrices, repairing each to a physical state.
/// Sample i uses a generator seeded with (seed, i). Individual analysis
/// failures are tolerated up to 10% of the samples.
MonteCarloResult monte_carlo_propagate(const EstimatedState& e, int n_samples, std::uint64_t seed,
                                       const Analysis& analysis);

}  // namespace rebit
