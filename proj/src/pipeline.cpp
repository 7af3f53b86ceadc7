#include "rebit/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rebit/errors.hpp"

namespace rebit {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(std::string_view s, const std::string& context) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ParseError(context + ": expected a number, got '" + t + "'");
  return v;
}

CorrelationMatrix product_from_labels(std::string_view labels, const std::string& context) {
  if (labels.size() != 2) throw ParseError(context + ": product state needs two labels, e.g. RL");
  try {
    return product_state(polarization_state(parse_polarization(labels[0])),
                         polarization_state(parse_polarization(labels[1])));
  } catch (const InvalidArgument& e) {
    throw ParseError(context + ": " + e.what());
  }
}

}  // namespace

// ---- state specs ----------------------------------------------------------

CorrelationMatrix StateSpec::truth() const {
  double wsum = 0.0;
  Matrix4 m = Matrix4::Zero();
  for (const auto& [g, w] : components) {
    m += w * g.matrix();
    wsum += w;
  }
  return depolarize(CorrelationMatrix(m / wsum), visibility);
}

StateSpec parse_state_spec(const std::string& text) {
  StateSpec spec;
  spec.text = text;
  const std::string ctx = "state '" + text + "'";

  std::string body = text;
  if (const auto semi = text.find(';'); semi != std::string::npos) {
    body = text.substr(0, semi);
    const std::string opt = trim(std::string_view(text).substr(semi + 1));
    if (opt.rfind("v=", 0) != 0) throw ParseError(ctx + ": unknown option '" + opt + "'");
    spec.visibility = parse_number(std::string_view(opt).substr(2), ctx);
    if (!(spec.visibility >= 0.0 && spec.visibility <= 1.0))
      throw ParseError(ctx + ": visibility must lie in [0, 1]");
  }

  const auto colon = body.find(':');
  if (colon == std::string::npos) throw ParseError(ctx + ": expected '<kind>:<args>'");
  const std::string kind = trim(std::string_view(body).substr(0, colon));
  const std::string args = trim(std::string_view(body).substr(colon + 1));

  if (kind == "cfr") {
    if (args.rfind("q=", 0) != 0) throw ParseError(ctx + ": expected cfr:q=<value>");
    const double q = parse_number(std::string_view(args).substr(2), ctx);
    if (!(q >= 0.0 && q <= 1.0)) throw ParseError(ctx + ": q must lie in [0, 1]");
    spec.components.emplace_back(cfr_state(q), 1.0);
  } else if (kind == "product") {
    spec.components.emplace_back(product_from_labels(args, ctx), 1.0);
  } else if (kind == "bell") {
    static const std::map<std::string, BellState> names = {{"phi+", BellState::PhiPlus},
                                                           {"phi-", BellState::PhiMinus},
                                                           {"psi+", BellState::PsiPlus},
                                                           {"psi-", BellState::PsiMinus}};
    const auto it = names.find(args);
    if (it == names.end()) throw ParseError(ctx + ": unknown Bell state '" + args + "'");
    spec.components.emplace_back(bell_state(it->second), 1.0);
  } else if (kind == "mix") {
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ParseError(ctx + ": expected <labels>=<weight>");
      const double w = parse_number(std::string_view(item).substr(eq + 1), ctx);
      if (!(w >= 0.0)) throw ParseError(ctx + ": weights must be nonnegative");
      spec.components.emplace_back(product_from_labels(trim(item.substr(0, eq)), ctx), w);
    }
    double wsum = 0.0;
    for (const auto& c : spec.components) wsum += c.second;
    if (spec.components.empty() || !(wsum > 0.0))
      throw ParseError(ctx + ": mixture needs a positive total weight");
  } else if (kind == "file") {
    spec.components.emplace_back(read_gamma_file(args), 1.0);
  } else {
    throw ParseError(ctx + ": unknown state kind '" + kind + "'");
  }
  return spec;
}

CorrelationMatrix read_gamma_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open correlation file '" + path.string() + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) values.push_back(parse_number(tok, "correlation file '" + path.string() + "'"));
  }
  if (values.size() != 16)
    throw ParseError("correlation file '" + path.string() + "' must hold 16 numbers, found " +
                     std::to_string(values.size()));
  Matrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = values[static_cast<std::size_t>(4 * i + j)];
  try {
    return CorrelationMatrix::checked(m);
  } catch (const InvalidArgument& e) {
    throw ParseError("correlation file '" + path.string() + "': " + e.what());
  }
}

CountsDataset simulate_state(const StateSpec& spec, std::uint64_t events_per_setting,
                             std::uint64_t seed) {
  if (spec.components.size() == 1)
    return simulate_counts(depolarize(spec.components.front().first, spec.visibility),
                           events_per_setting, seed);
  std::vector<std::pair<CountsDataset, double>> parts;
  std::uint64_t i = 0;
  for (const auto& [g, w] : spec.components)
    parts.emplace_back(simulate_counts(depolarize(g, spec.visibility), events_per_setting, seed + i++),
                       w);
  return mix_datasets(parts);
}

// ---- counts files ---------------------------------------------------------

void write_counts(std::ostream& os, const CountsFile& f) {
  os << "# rebit-counts v1\n";
  for (const auto& [k, v] : f.provenance) os << "# " << k << ": " << v << "\n";
  for (const auto& [s, n] : f.data.settings)
    os << pauli_char(s.first) << pauli_char(s.second) << ' ' << n[0] << ' ' << n[1] << ' ' << n[2]
       << ' ' << n[3] << '\n';
}

CountsFile read_counts(std::istream& is) {
  CountsFile f;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto colon = t.find(':');
      if (colon != std::string::npos) {
        const std::string key = trim(std::string_view(t).substr(1, colon - 1));
        if (!key.empty() && key.find(' ') == std::string::npos)
          f.provenance[key] = trim(std::string_view(t).substr(colon + 1));
      }
      continue;
    }
    const std::string where = "counts line " + std::to_string(lineno);
    std::stringstream ss(t);
    std::string name;
    ss >> name;
    if (name.size() != 2) throw ParseError(where + ": expected a two-letter setting like 'zx'");
    const Setting s{parse_basis(name[0]), parse_basis(name[1])};
    OutcomeCounts n{};
    for (auto& v : n) {
      std::string tok;
      if (!(ss >> tok)) throw ParseError(where + ": expected four counts");
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(where + ": invalid count '" + tok + "'");
    }
    std::string extra;
    if (ss >> extra) throw ParseError(where + ": trailing data '" + extra + "'");
    if (!f.data.settings.emplace(s, n).second)
      throw ParseError(where + ": duplicate setting '" + name + "'");
  }
  f.data.require_complete();
  return f;
}

void write_counts_file(const std::filesystem::path& path, const CountsFile& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write counts file '" + path.string() + "'");
  write_counts(out, f);
  if (!out) throw Error("failed writing counts file '" + path.string() + "'");
}

CountsFile read_counts_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open counts file '" + path.string() + "'");
  try {
    return read_counts(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---- analysis -------------------------------------------------------------

const DecompositionReport* ReportDocument::decomposition(Field f) const {
  for (const auto& d : decompositions)
    if (d.field == f) return &d;
  return nullptr;
}

double round_sig9(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

namespace {

double witness_value(const CorrelationMatrix& g, const DiagObservable& obs) {
  return obs.lz * g(Pauli::Z, Pauli::Z) + obs.lx * g(Pauli::X, Pauli::X) +
         obs.ly * g(Pauli::Y, Pauli::Y);
}

DecompositionResult decompose_with_context(const CorrelationMatrix& g, Field f) {
  try {
    return decompose(g, f);
  } catch (const SingularMarginal& e) {
    throw SingularMarginal("decompose(" + std::string(field_name(f)) + "): " + e.what());
  } catch (const NonConvergence& e) {
    throw NonConvergence("decompose(" + std::string(field_name(f)) + "): " + e.what());
  }
}

/// Requested fields, deduplicated, real before complex (the report order).
std::vector<Field> canonical_fields(std::vector<Field> fields) {
  std::sort(fields.begin(), fields.end());
  fields.erase(std::unique(fields.begin(), fields.end()), fields.end());
  return fields;
}

std::optional<CorrelationMatrix> target_state(const AnalysisOptions& opts) {
  if (!opts.target) return std::nullopt;
  return parse_state_spec(*opts.target).truth();
}

/// Flattened quantities propagated through the Monte Carlo.
Eigen::VectorXd analysis_vector(const CorrelationMatrix& g, const AnalysisOptions& opts,
                                const std::optional<CorrelationMatrix>& target) {
  std::vector<double> out;
  for (const auto& obs : opts.observables) out.push_back(witness_value(g, obs));
  if (target) out.push_back(similarity(g, *target));
  for (Field f : canonical_fields(opts.fields)) {
    const DecompositionResult r = decompose(g, f);
    out.push_back(r.distance);
    out.push_back(r.decomposition.residual_coeff);
    for (const auto& e : r.decomposition.entries) out.push_back(e.weight);
  }
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

ReportDocument build_report(const EstimatedState& est, const AnalysisOptions& opts,
                            Provenance provenance, bool with_sigma) {
  ReportDocument doc;
  doc.provenance = std::move(provenance);
  doc.estimated = est;
  for (const auto& obs : opts.observables) {
    WitnessReport w;
    w.observable = obs;
    w.verdict = evaluate_witness(est.gamma, obs,
                                 with_sigma ? std::optional<Matrix4>(est.sigma) : std::nullopt, opts.k);
    doc.witnesses.push_back(w);
  }
  if (const auto target = target_state(opts))
    doc.similarity = SimilarityReport{*opts.target, {similarity(est.gamma, *target), 0.0}};
  for (Field f : canonical_fields(opts.fields)) {
    const DecompositionResult r = decompose_with_context(est.gamma, f);
    DecompositionReport d;
    d.field = f;
    d.distance.value = r.distance;
    d.residual_coeff.value = r.decomposition.residual_coeff;
    d.certificate = separability_certificate(r);
    d.min_weight = r.decomposition.min_weight();
    d.gamma_std_diagonal = r.standard_form.gamma_std.matrix().diagonal();
    for (const auto& e : r.decomposition.entries)
      d.weights.push_back({e.alice_source, e.bob_source, e.alice.bloch, e.bob.bloch, {e.weight, 0.0}});
    doc.decompositions.push_back(std::move(d));
  }
  return doc;
}

void round_in_place(Matrix4& m) { m = m.unaryExpr(&round_sig9); }
void round_in_place(Vector4& v) { v = v.unaryExpr(&round_sig9); }
void round_in_place(Estimate& e) {
  e.value = round_sig9(e.value);
  e.std = round_sig9(e.std);
}

void round_document(ReportDocument& doc) {
  Matrix4 g = doc.estimated.gamma.matrix();
  round_in_place(g);
  doc.estimated.gamma = CorrelationMatrix(g);
  round_in_place(doc.estimated.sigma);
  for (auto& w : doc.witnesses) {
    auto& v = w.verdict;
    for (double* x : {&v.expectation, &v.sigma, &v.significance, &v.real_bounds.min, &v.real_bounds.max,
                      &v.complex_bounds.min, &v.complex_bounds.max, &w.mc_std})
      *x = round_sig9(*x);
  }
  for (auto& d : doc.decompositions) {
    round_in_place(d.distance);
    round_in_place(d.residual_coeff);
    d.min_weight = round_sig9(display_weight(d.min_weight));
    round_in_place(d.gamma_std_diagonal);
    for (auto& w : d.weights) {
      round_in_place(w.alice);
      round_in_place(w.bob);
      w.weight.value = display_weight(w.weight.value);
      round_in_place(w.weight);
    }
  }
  if (doc.similarity) round_in_place(doc.similarity->value);
}

std::string join_fields(const std::vector<Field>& fields) {
  std::string s;
  for (Field f : fields) {
    if (!s.empty()) s += ',';
    s += field_name(f);
  }
  return s;
}

}  // namespace

ReportDocument analyze_exact(const CorrelationMatrix& g, const AnalysisOptions& opts,
                             Provenance provenance) {
  provenance["mode"] = "exact";
  provenance["fields"] = join_fields(canonical_fields(opts.fields));
  if (opts.target) provenance["target"] = *opts.target;
  ReportDocument doc = build_report(EstimatedState{g, Matrix4::Zero()}, opts, std::move(provenance), false);
  round_document(doc);
  return doc;
}

ReportDocument analyze_counts(const CountsDataset& counts, const AnalysisOptions& opts,
                              Provenance provenance) {
  provenance["mode"] = "counts";
  provenance["fields"] = join_fields(canonical_fields(opts.fields));
  provenance["seed"] = std::to_string(opts.seed);
  provenance["mc_samples"] = std::to_string(opts.mc_samples);
  if (opts.target) provenance["target"] = *opts.target;

  const EstimatedState est = estimate_correlations(counts);
  ReportDocument doc = build_report(est, opts, std::move(provenance), true);

  if (opts.mc_samples > 0) {
    const auto target = target_state(opts);
    const MonteCarloResult mc = monte_carlo_propagate(
        est, opts.mc_samples, opts.seed,
        [&](const CorrelationMatrix& g) { return analysis_vector(g, opts, target); });
    doc.mc_samples = mc.samples;
    doc.mc_failures = mc.failures;
    doc.mc_repaired = mc.repaired;

    Eigen::Index k = 0;
    for (auto& w : doc.witnesses) w.mc_std = mc.stds[k++];
    if (doc.similarity) doc.similarity->value.std = mc.stds[k++];
    for (auto& d : doc.decompositions) {
      d.distance.std = mc.stds[k++];
      d.residual_coeff.std = mc.stds[k++];
      for (auto& w : d.weights) w.weight.std = mc.stds[k++];
    }
  }
  round_document(doc);
  return doc;
}

// ---- report serialization -------------------------------------------------

namespace {

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double to_number(const json& j) {
  if (j.is_string()) return std::stod(j.get<std::string>());
  return j.get<double>();
}

template <typename M>
json matrix_json(const M& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Matrix4 matrix4_from(const json& j) {
  Matrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) m(i, k) = to_number(j.at(i).at(k));
  return m;
}

json vector_json(const Vector4& v) {
  json a = json::array();
  for (int i = 0; i < 4; ++i) a.push_back(number(v[i]));
  return a;
}

Vector4 vector4_from(const json& j) {
  Vector4 v;
  for (int i = 0; i < 4; ++i) v[i] = to_number(j.at(i));
  return v;
}

json estimate_json(const Estimate& e) { return {{"value", number(e.value)}, {"std", number(e.std)}}; }
Estimate estimate_from(const json& j) { return {to_number(j.at("value")), to_number(j.at("std"))}; }

json bounds_json(const Bounds& b) { return json::array({number(b.min), number(b.max)}); }
Bounds bounds_from(const json& j) { return {to_number(j.at(0)), to_number(j.at(1)), 0}; }

}  // namespace

std::string report_to_json(const ReportDocument& doc) {
  json j;
  j["format"] = "rebit-report/1";
  j["provenance"] = doc.provenance;
  j["estimated"] = {{"gamma", matrix_json(doc.estimated.gamma.matrix())},
                    {"sigma", matrix_json(doc.estimated.sigma)}};
  j["monte_carlo"] = {{"samples", doc.mc_samples}, {"failures", doc.mc_failures},
                      {"repaired", doc.mc_repaired}};

  json ws = json::array();
  for (const auto& w : doc.witnesses) {
    const auto& v = w.verdict;
    ws.push_back({{"observable",
                   {{"lz", number(w.observable.lz)}, {"lx", number(w.observable.lx)},
                    {"ly", number(w.observable.ly)}}},
                  {"expectation", number(v.expectation)},
                  {"sigma", number(v.sigma)},
                  {"mc_std", number(w.mc_std)},
                  {"real_bounds", bounds_json(v.real_bounds)},
                  {"complex_bounds", bounds_json(v.complex_bounds)},
                  {"r_entangled", v.r_entangled},
                  {"c_entangled", v.c_entangled},
                  {"significance", number(v.significance)}});
  }
  j["witnesses"] = ws;

  json ds = json::object();
  for (const auto& d : doc.decompositions) {
    json weights = json::array();
    for (const auto& w : d.weights)
      weights.push_back({{"a", std::string(1, polarization_char(w.alice_source))},
                         {"b", std::string(1, polarization_char(w.bob_source))},
                         {"weight", number(w.weight.value)},
                         {"std", number(w.weight.std)},
                         {"alice", vector_json(w.alice)},
                         {"bob", vector_json(w.bob)}});
    ds[std::string(field_name(d.field))] = {{"distance", estimate_json(d.distance)},
                                            {"residual_coeff", estimate_json(d.residual_coeff)},
                                            {"certificate", d.certificate},
                                            {"min_weight", number(d.min_weight)},
                                            {"gamma_std_diagonal", vector_json(d.gamma_std_diagonal)},
                                            {"weights", weights}};
  }
  j["decompositions"] = ds;
  if (doc.similarity)
    j["similarity_to_target"] = {{"target", doc.similarity->target},
                                 {"value", number(doc.similarity->value.value)},
                                 {"std", number(doc.similarity->value.std)}};
  return j.dump(2) + "\n";
}

ReportDocument report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: invalid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "rebit-report/1") throw ParseError("report: unsupported format");
    ReportDocument doc;
    doc.provenance = j.at("provenance").get<Provenance>();
    doc.estimated.gamma = CorrelationMatrix(matrix4_from(j.at("estimated").at("gamma")));
    doc.estimated.sigma = matrix4_from(j.at("estimated").at("sigma"));
    doc.mc_samples = j.at("monte_carlo").at("samples").get<int>();
    doc.mc_failures = j.at("monte_carlo").at("failures").get<int>();
    doc.mc_repaired = j.at("monte_carlo").at("repaired").get<int>();
    for (const auto& w : j.at("witnesses")) {
      WitnessReport r;
      const auto& o = w.at("observable");
      r.observable = {to_number(o.at("lz")), to_number(o.at("lx")), to_number(o.at("ly"))};
      r.verdict.expectation = to_number(w.at("expectation"));
      r.verdict.sigma = to_number(w.at("sigma"));
      r.mc_std = to_number(w.at("mc_std"));
      r.verdict.real_bounds = bounds_from(w.at("real_bounds"));
      r.verdict.complex_bounds = bounds_from(w.at("complex_bounds"));
      r.verdict.r_entangled = w.at("r_entangled").get<bool>();
      r.verdict.c_entangled = w.at("c_entangled").get<bool>();
      r.verdict.significance = to_number(w.at("significance"));
      doc.witnesses.push_back(r);
    }
    // Field order is fixed (real before complex) regardless of object key order.
    for (Field f : {Field::Real, Field::Complex}) {
      const auto& ds = j.at("decompositions");
      const std::string key(field_name(f));
      if (!ds.contains(key)) continue;
      const auto& dj = ds.at(key);
      DecompositionReport d;
      d.field = f;
      d.distance = estimate_from(dj.at("distance"));
      d.residual_coeff = estimate_from(dj.at("residual_coeff"));
      d.certificate = dj.at("certificate").get<bool>();
      d.min_weight = to_number(dj.at("min_weight"));
      d.gamma_std_diagonal = vector4_from(dj.at("gamma_std_diagonal"));
      for (const auto& w : dj.at("weights")) {
        WeightReport r;
        r.alice_source = parse_polarization(w.at("a").get<std::string>().at(0));
        r.bob_source = parse_polarization(w.at("b").get<std::string>().at(0));
        r.weight = {to_number(w.at("weight")), to_number(w.at("std"))};
        r.alice = vector4_from(w.at("alice"));
        r.bob = vector4_from(w.at("bob"));
        d.weights.push_back(r);
      }
      doc.decompositions.push_back(std::move(d));
    }
    if (j.contains("similarity_to_target")) {
      const auto& s = j.at("similarity_to_target");
      doc.similarity = SimilarityReport{s.at("target").get<std::string>(),
                                        {to_number(s.at("value")), to_number(s.at("std"))}};
    }
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

bool operator==(const ReportDocument& a, const ReportDocument& b) {
  auto same_bounds = [](const Bounds& x, const Bounds& y) { return x.min == y.min && x.max == y.max; };
  auto same_witness = [&](const WitnessReport& x, const WitnessReport& y) {
    const auto &v = x.verdict, &u = y.verdict;
    return x.observable.lz == y.observable.lz && x.observable.lx == y.observable.lx &&
           x.observable.ly == y.observable.ly && v.expectation == u.expectation &&
           v.sigma == u.sigma && x.mc_std == y.mc_std && same_bounds(v.real_bounds, u.real_bounds) &&
           same_bounds(v.complex_bounds, u.complex_bounds) && v.r_entangled == u.r_entangled &&
           v.c_entangled == u.c_entangled &&
           (v.significance == u.significance ||
            (std::isnan(v.significance) && std::isnan(u.significance)));
  };
  auto same_weight = [](const WeightReport& x, const WeightReport& y) {
    return x.alice_source == y.alice_source && x.bob_source == y.bob_source && x.alice == y.alice &&
           x.bob == y.bob && x.weight == y.weight;
  };
  auto same_decomposition = [&](const DecompositionReport& x, const DecompositionReport& y) {
    return x.field == y.field && x.distance == y.distance && x.residual_coeff == y.residual_coeff &&
           x.certificate == y.certificate && x.min_weight == y.min_weight &&
           x.gamma_std_diagonal == y.gamma_std_diagonal &&
           std::equal(x.weights.begin(), x.weights.end(), y.weights.begin(), y.weights.end(), same_weight);
  };
  const bool same_similarity =
      a.similarity.has_value() == b.similarity.has_value() &&
      (!a.similarity || (a.similarity->target == b.similarity->target &&
                         a.similarity->value == b.similarity->value));
  return a.provenance == b.provenance && a.estimated.gamma == b.estimated.gamma &&
         a.estimated.sigma == b.estimated.sigma && a.mc_samples == b.mc_samples &&
         a.mc_failures == b.mc_failures && a.mc_repaired == b.mc_repaired &&
         std::equal(a.witnesses.begin(), a.witnesses.end(), b.witnesses.begin(), b.witnesses.end(),
                    same_witness) &&
         std::equal(a.decompositions.begin(), a.decompositions.end(), b.decompositions.begin(),
                    b.decompositions.end(), same_decomposition) &&
         same_similarity;
}

std::string weights_csv(const DecompositionReport& d, TableColumn which) {
  const std::span<const Polarization> alpha =
      d.field == Field::Real ? std::span<const Polarization>(kRebitAlphabet)
                             : std::span<const Polarization>(kQubitAlphabet);
  const auto n = alpha.size();
  std::vector<double> table(n * n, 0.0);
  auto pos = [&](Polarization p) {
    return static_cast<std::size_t>(std::find(alpha.begin(), alpha.end(), p) - alpha.begin());
  };
  for (const auto& w : d.weights)
    table[pos(w.alice_source) * n + pos(w.bob_source)] =
        which == TableColumn::Weight ? w.weight.value : w.weight.std;

  std::ostringstream os;
  os << "a\\b";
  for (auto p : alpha) os << ',' << polarization_char(p);
  os << '\n';
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    os << polarization_char(alpha[i]);
    for (std::size_t k = 0; k < n; ++k) {
      std::snprintf(buf, sizeof buf, "%.9g", table[i * n + k]);
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace rebit
