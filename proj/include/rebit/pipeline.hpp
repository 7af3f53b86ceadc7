#pragma once

// End-to-end analysis used by the command-line tool and the Python module:
// state descriptions, counts files, and analysis reports.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rebit/pauli.hpp"
#include "rebit/quasiprob.hpp"
#include "rebit/tomography.hpp"
#include "rebit/witness.hpp"

namespace rebit {

/// Parsed state description. Grammar:
///   cfr:q=<v> | product:<P><P> | bell:(phi+|phi-|psi+|psi-) | file:<path>
///   mix:<P><P>=<w>,<P><P>=<w>,...
/// each optionally followed by ";v=<visibility>", where P is one of HVDARL.
/// Mixtures are simulated component by component and combined like the
/// per-preparation datasets of an experiment.
struct StateSpec {
  std::string text;
  std::vector<std::pair<CorrelationMatrix, double>> components;
  double visibility = 1.0;

  /// Exact mixture with visibility applied, normalized weights.
  CorrelationMatrix truth() const;
};

StateSpec parse_state_spec(const std::string& text);

/// Reads a 4x4 whitespace-separated correlation matrix ('#' starts a comment).
CorrelationMatrix read_gamma_file(const std::filesystem::path& path);

/// Simulates counts for a spec. Component i of a mixture uses seed + i.
CountsDataset simulate_state(const StateSpec& spec, std::uint64_t events_per_setting,
                             std::uint64_t seed);

// ---- counts files ---------------------------------------------------------

using Provenance = std::map<std::string, std::string>;

struct CountsFile {
  CountsDataset data;
  Provenance provenance;
  bool operator==(const CountsFile&) const = default;
};

/// Text format: "# key: value" header lines, then one record per setting
/// "<alice basis><bob basis> n_pp n_pm n_mp n_mm", e.g. "zy 51 49 50 50".
void write_counts(std::ostream& os, const CountsFile& f);
CountsFile read_counts(std::istream& is);
void write_counts_file(const std::filesystem::path& path, const CountsFile& f);
CountsFile read_counts_file(const std::filesystem::path& path);

// ---- reports --------------------------------------------------------------

struct Estimate {
  double value = 0.0;
  double std = 0.0;
  bool operator==(const Estimate&) const = default;
};

struct WitnessReport {
  DiagObservable observable;
  WitnessVerdict verdict;
  double mc_std = 0.0;
};

struct WeightReport {
  Polarization alice_source = Polarization::H;
  Polarization bob_source = Polarization::H;
  Vector4 alice = Vector4::Zero();
  Vector4 bob = Vector4::Zero();
  Estimate weight;
};

struct DecompositionReport {
  Field field = Field::Complex;
  Estimate distance;
  Estimate residual_coeff;
  bool certificate = false;
  double min_weight = 0.0;
  Vector4 gamma_std_diagonal = Vector4::Zero();
  std::vector<WeightReport> weights;
};

struct SimilarityReport {
  std::string target;
  Estimate value;
};

struct ReportDocument {
  Provenance provenance;
  EstimatedState estimated;
  std::vector<WitnessReport> witnesses;
  std::vector<DecompositionReport> decompositions;
  std::optional<SimilarityReport> similarity;
  int mc_samples = 0;
  int mc_failures = 0;
  int mc_repaired = 0;

  const DecompositionReport* decomposition(Field f) const;
};

bool operator==(const ReportDocument& a, const ReportDocument& b);

struct AnalysisOptions {
  std::vector<Field> fields = {Field::Real, Field::Complex};
  std::vector<DiagObservable> observables = {kSigmaYY};
  std::optional<std::string> target;
  int mc_samples = kDefaultMonteCarloSamples;
  std::uint64_t seed = 0;
  double k = kDefaultSignificance;
};

/// Counts-derived analysis: estimate, witnesses, decompositions and
/// Monte-Carlo uncertainties for every reported number.
ReportDocument analyze_counts(const CountsDataset& counts, const AnalysisOptions& opts,
                              Provenance provenance = {});

/// Same pipeline on an exact correlation matrix with zero uncertainties.
ReportDocument analyze_exact(const CorrelationMatrix& g, const AnalysisOptions& opts,
                             Provenance provenance = {});

/// Rounds to 9 significant digits, the precision used in report files.
double round_sig9(double x);

std::string report_to_json(const ReportDocument& doc);
ReportDocument report_from_json(const std::string& text);

/// Weight table as CSV in alphabet order; `which` selects weight or std.
enum class TableColumn { Weight, Std };
std::string weights_csv(const DecompositionReport& d, TableColumn which);

}  // namespace rebit
