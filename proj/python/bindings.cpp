// Python bindings. Correlation matrices cross the boundary as 4x4 float
// arrays; counts datasets as dicts mapping "zx"-style setting names to
// four-tuples of counts.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rebit/errors.hpp"
#include "rebit/pipeline.hpp"
#include "rebit/quasiprob.hpp"
#include "rebit/standard_form.hpp"
#include "rebit/tomography.hpp"
#include "rebit/witness.hpp"

namespace py = pybind11;
using namespace rebit;

namespace {

CorrelationMatrix as_gamma(const Matrix4& m) { return CorrelationMatrix(m); }

Field field_arg(const std::string& s) { return parse_field(s); }

std::string setting_name(const Setting& s) { return {pauli_char(s.first), pauli_char(s.second)}; }

py::dict counts_to_dict(const CountsDataset& d) {
  py::dict out;
  for (const auto& [s, n] : d.settings) out[py::str(setting_name(s))] = py::make_tuple(n[0], n[1], n[2], n[3]);
  return out;
}

CountsDataset counts_from_dict(const std::map<std::string, std::array<std::uint64_t, 4>>& d) {
  CountsDataset out;
  for (const auto& [name, n] : d) {
    if (name.size() != 2) throw ParseError("setting names are two basis letters, got '" + name + "'");
    out.settings[{parse_basis(name[0]), parse_basis(name[1])}] = n;
  }
  return out;
}

AnalysisOptions analysis_options(const std::vector<std::string>& fields, std::optional<std::string> target,
                                 int mc_samples, std::uint64_t seed, double k) {
  AnalysisOptions o;
  o.fields.clear();
  for (const auto& f : fields) o.fields.push_back(parse_field(f));
  o.target = std::move(target);
  o.mc_samples = mc_samples;
  o.seed = seed;
  o.k = k;
  return o;
}

py::dict pair_to_dict(const SeparabilityEigenpair& p) {
  py::dict d;
  d["value"] = p.value;
  d["alice"] = p.alice.bloch;
  d["bob"] = p.bob.bloch;
  d["field"] = std::string(field_name(p.field));
  d["degenerate"] = p.degenerate;
  return d;
}

py::dict decomposition_to_dict(const DecompositionResult& r) {
  py::list entries;
  for (const auto& e : r.decomposition.entries) {
    py::dict d;
    d["a"] = std::string(1, polarization_char(e.alice_source));
    d["b"] = std::string(1, polarization_char(e.bob_source));
    d["alice"] = e.alice.bloch;
    d["bob"] = e.bob.bloch;
    d["weight"] = e.weight;
    entries.append(d);
  }
  py::dict out;
  out["field"] = std::string(field_name(r.decomposition.field));
  out["entries"] = entries;
  out["distance"] = r.distance;
  out["residual_coeff"] = r.decomposition.residual_coeff;
  out["reconstruction"] = r.reconstruction.matrix();
  out["gamma_std"] = r.standard_form.gamma_std.matrix();
  out["alice_map"] = r.standard_form.maps.alice;
  out["bob_map"] = r.standard_form.maps.bob;
  out["p_std"] = r.p_std.weights;
  out["table"] = r.decomposition.table().weights;
  out["certificate"] = separability_certificate(r);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rebit/qubit entanglement characterization";

  // Subclasses are registered after the base so their translators run first.
  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<SingularMarginal>(m, "SingularMarginal", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  // States and geometry.
  m.def("cfr_state", [](double q) { return cfr_state(q).matrix(); }, py::arg("q"));
  m.def("state", [](const std::string& spec) { return parse_state_spec(spec).truth().matrix(); },
        py::arg("spec"), "Exact correlation matrix of a state description such as 'mix:RR=0.5,LL=0.5;v=0.96'.");
  m.def("density_from_correlation",
        [](const Matrix4& g) { return density_from_correlation(as_gamma(g)).matrix(); }, py::arg("gamma"));
  m.def("correlation_from_density",
        [](const Matrix4c& rho) { return correlation_from_density(DensityMatrix(rho)).matrix(); },
        py::arg("rho"));
  m.def("hs_distance", [](const Matrix4& a, const Matrix4& b) { return hs_distance(as_gamma(a), as_gamma(b)); });
  m.def("similarity", [](const Matrix4& a, const Matrix4& b) { return similarity(as_gamma(a), as_gamma(b)); });
  m.def("real_projection", [](const Matrix4& g) { return real_projection(as_gamma(g)).matrix(); });
  m.def("is_physical", [](const Matrix4& g, double tol) { return is_physical(as_gamma(g), tol); },
        py::arg("gamma"), py::arg("tol") = kDefaultTol);

  // Witnesses.
  m.def("bounds",
        [](double lz, double lx, double ly, const std::string& field) {
          const Bounds b = bounds(DiagObservable{lz, lx, ly}, field_arg(field));
          return py::make_tuple(b.min, b.max);
        },
        py::arg("lz"), py::arg("lx"), py::arg("ly"), py::arg("field"));
  m.def("numeric_separability_eigs",
        [](const Matrix4& obs, const std::string& field, int n_starts, std::uint64_t seed) {
          SolverOptions o;
          o.n_starts = n_starts;
          o.seed = seed;
          const NumericSpectrum s = numeric_separability_eigs(obs, field_arg(field), o);
          py::list pairs;
          for (const auto& p : s.pairs) pairs.append(pair_to_dict(p));
          return py::make_tuple(pairs, s.unconverged_starts);
        },
        py::arg("observable"), py::arg("field"), py::arg("n_starts") = 64, py::arg("seed") = 0);
  m.def("evaluate_witness",
        [](const Matrix4& g, double lz, double lx, double ly, std::optional<Matrix4> sigma, double k) {
          const WitnessVerdict v = evaluate_witness(as_gamma(g), {lz, lx, ly}, sigma, k);
          py::dict d;
          d["expectation"] = v.expectation;
          d["sigma"] = v.sigma;
          d["real_bounds"] = py::make_tuple(v.real_bounds.min, v.real_bounds.max);
          d["complex_bounds"] = py::make_tuple(v.complex_bounds.min, v.complex_bounds.max);
          d["r_entangled"] = v.r_entangled;
          d["c_entangled"] = v.c_entangled;
          d["significance"] = v.significance;
          return d;
        },
        py::arg("gamma"), py::arg("lz") = 0.0, py::arg("lx") = 0.0, py::arg("ly") = 1.0,
        py::arg("sigma") = py::none(), py::arg("k") = kDefaultSignificance);

  // Standard form and decompositions.
  m.def("to_standard_form",
        [](const Matrix4& g, const std::string& field) {
          const StandardFormResult r = to_standard_form(as_gamma(g), field_arg(field));
          py::dict d;
          d["gamma_std"] = r.gamma_std.matrix();
          d["alice_map"] = r.maps.alice;
          d["bob_map"] = r.maps.bob;
          d["residual_offdiag"] = r.residual_offdiag;
          return d;
        },
        py::arg("gamma"), py::arg("field"));
  m.def("apply_local_maps",
        [](const Matrix4& g_std, const Matrix4& alice, const Matrix4& bob) {
          return apply_local_maps(CorrelationMatrix(g_std), {alice, bob, Field::Complex}).matrix();
        },
        py::arg("gamma_std"), py::arg("alice_map"), py::arg("bob_map"));
  m.def("pstd", [](const Matrix4& g_std, const std::string& field) {
    const CorrelationMatrix g(g_std);
    return (field_arg(field) == Field::Real ? pstd_rebit(g) : pstd_qubit(g)).weights;
  }, py::arg("gamma_std"), py::arg("field"));
  m.def("decompose",
        [](const Matrix4& g, const std::string& field) {
          return decomposition_to_dict(decompose(as_gamma(g), field_arg(field)));
        },
        py::arg("gamma"), py::arg("field"));

  // Tomography.
  m.def("simulate_counts",
        [](const Matrix4& g, std::uint64_t events, std::uint64_t seed) {
          return counts_to_dict(simulate_counts(as_gamma(g), events, seed));
        },
        py::arg("gamma"), py::arg("events") = kDefaultEvents, py::arg("seed") = 0);
  m.def("simulate_state",
        [](const std::string& spec, std::uint64_t events, std::uint64_t seed) {
          return counts_to_dict(simulate_state(parse_state_spec(spec), events, seed));
        },
        py::arg("spec"), py::arg("events") = kDefaultEvents, py::arg("seed") = 0);
  m.def("estimate_correlations",
        [](const std::map<std::string, std::array<std::uint64_t, 4>>& counts) {
          const EstimatedState e = estimate_correlations(counts_from_dict(counts));
          return py::make_tuple(e.gamma.matrix(), e.sigma);
        },
        py::arg("counts"));
  m.def("monte_carlo_propagate",
        [](const Matrix4& gamma, const Matrix4& sigma, int n_samples, std::uint64_t seed,
           const std::function<Eigen::VectorXd(const Matrix4&)>& analysis) {
          const MonteCarloResult r = monte_carlo_propagate(
              {CorrelationMatrix(gamma), sigma}, n_samples, seed,
              [&](const CorrelationMatrix& g) { return analysis(g.matrix()); });
          return py::make_tuple(r.means, r.stds);
        },
        py::arg("gamma"), py::arg("sigma"), py::arg("n_samples"), py::arg("seed"), py::arg("analysis"));

  // Files and reports.
  m.def("write_counts_file",
        [](const std::string& path, const std::map<std::string, std::array<std::uint64_t, 4>>& counts,
           const Provenance& provenance) { write_counts_file(path, {counts_from_dict(counts), provenance}); },
        py::arg("path"), py::arg("counts"), py::arg("provenance") = Provenance{});
  m.def("read_counts_file",
        [](const std::string& path) {
          const CountsFile f = read_counts_file(path);
          return py::make_tuple(counts_to_dict(f.data), f.provenance);
        },
        py::arg("path"));
  m.def("analyze_counts",
        [](const std::map<std::string, std::array<std::uint64_t, 4>>& counts, const std::vector<std::string>& fields,
           std::optional<std::string> target, int mc_samples, std::uint64_t seed, double k) {
          return report_to_json(
              analyze_counts(counts_from_dict(counts), analysis_options(fields, target, mc_samples, seed, k)));
        },
        py::arg("counts"), py::arg("fields") = std::vector<std::string>{"real", "complex"},
        py::arg("target") = py::none(), py::arg("mc_samples") = kDefaultMonteCarloSamples, py::arg("seed") = 0,
        py::arg("k") = kDefaultSignificance, "Full analysis; returns the JSON report text.");
  m.def("analyze_exact",
        [](const std::string& spec, const std::vector<std::string>& fields, std::optional<std::string> target,
           double k) {
          const StateSpec s = parse_state_spec(spec);
          return report_to_json(
              analyze_exact(s.truth(), analysis_options(fields, target, 0, 0, k), {{"state", s.text}}));
        },
        py::arg("spec"), py::arg("fields") = std::vector<std::string>{"real", "complex"},
        py::arg("target") = py::none(), py::arg("k") = kDefaultSignificance,
        "Noise-free analysis of a state description; returns the JSON report text.");
}
