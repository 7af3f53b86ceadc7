// Command-line front end: simulate counts, analyze counts, analyze exact states.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rebit/errors.hpp"
#include "rebit/pipeline.hpp"

namespace {

using namespace rebit;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("REBIT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("REBIT_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return 0;
}

std::vector<Field> parse_fields(const std::string& list) {
  std::vector<Field> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const Field f = parse_field(item);
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  if (out.empty()) throw ParseError("--fields needs at least one of real, complex");
  return out;
}

DiagObservable parse_observable(const std::string& text) {
  std::stringstream ss(text);
  std::string tok;
  std::vector<double> v;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() != 3) throw ParseError("--observable expects lz,lx,ly");
  return {v[0], v[1], v[2]};
}

void print_gamma(std::ostream& os, const CorrelationMatrix& g) {
  char buf[32];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      std::snprintf(buf, sizeof buf, "%12.9g", g(i, j));
      os << buf;
    }
    os << '\n';
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

/// Report goes to `out` (or stdout); CSV tables next to it.
void emit_report(const ReportDocument& doc, const std::string& out) {
  const std::string json = report_to_json(doc);
  if (out.empty() || out == "-") {
    std::cout << json;
    return;
  }
  write_text(out, json);
  for (const auto& d : doc.decompositions) {
    const std::string stem = out + "." + std::string(field_name(d.field));
    write_text(stem + ".weights.csv", weights_csv(d, TableColumn::Weight));
    write_text(stem + ".std.csv", weights_csv(d, TableColumn::Std));
  }
}

void summarize(const ReportDocument& doc) {
  for (const auto& w : doc.witnesses) {
    std::cerr << "witness (" << w.observable.lz << ',' << w.observable.lx << ',' << w.observable.ly
              << "): " << w.verdict.expectation << " +- " << w.verdict.sigma
              << "  R-entangled=" << (w.verdict.r_entangled ? "yes" : "no")
              << "  C-entangled=" << (w.verdict.c_entangled ? "yes" : "no") << '\n';
  }
  for (const auto& d : doc.decompositions)
    std::cerr << field_name(d.field) << " distance: " << d.distance.value << " +- " << d.distance.std
              << "  certificate=" << (d.certificate ? "separable" : "none") << '\n';
  if (doc.similarity)
    std::cerr << "similarity to " << doc.similarity->target << ": " << doc.similarity->value.value
              << " +- " << doc.similarity->value.std << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rebit/qubit entanglement characterization toolkit"};
  app.require_subcommand(1);

  std::string state, out, counts_path, fields = "real,complex", target;
  std::vector<std::string> observables;
  std::uint64_t events = kDefaultEvents;
  std::uint64_t seed = 0;
  int mc_samples = kDefaultMonteCarloSamples;
  double k = kDefaultSignificance;

  auto* sim = app.add_subcommand("simulate", "Simulate coincidence counts for a state");
  sim->add_option("--state", state, "State description, e.g. cfr:q=1 or mix:RR=0.5,LL=0.5;v=0.96")
      ->required();
  sim->add_option("--events", events, "Events per measurement setting")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "Random seed (default: $REBIT_SEED or 0)");
  sim->add_option("--out", out, "Counts file to write")->required();

  auto add_analysis_options = [&](CLI::App* cmd) {
    cmd->add_option("--fields", fields, "Comma-separated number fields: real, complex");
    cmd->add_option("--target", target, "Target state for the similarity, e.g. cfr:q=1");
    cmd->add_option("--observable", observables,
                    "Extra Pauli-diagonal witness lz,lx,ly (sy(x)sy is always evaluated)");
    cmd->add_option("--k", k, "Significance threshold in standard deviations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", out, "Report file (JSON); '-' or omitted prints to stdout");
  };

  auto* ana = app.add_subcommand("analyze", "Analyze a counts file");
  ana->add_option("--counts", counts_path, "Counts file")->required()->check(CLI::ExistingFile);
  ana->add_option("--mc-samples", mc_samples, "Monte-Carlo samples (0 disables)")
      ->check(CLI::NonNegativeNumber);
  ana->add_option("--seed", seed, "Monte-Carlo seed (default: $REBIT_SEED or 0)");
  add_analysis_options(ana);

  auto* exa = app.add_subcommand("exact", "Analyze an exact state without noise");
  exa->add_option("--state", state, "State description")->required();
  add_analysis_options(exa);

  CLI11_PARSE(app, argc, argv);

  try {
    const bool seed_given = (sim->parsed() && sim->count("--seed") > 0) ||
                            (ana->parsed() && ana->count("--seed") > 0);
    if (!seed_given) seed = default_seed();

    if (sim->parsed()) {
      const StateSpec spec = parse_state_spec(state);
      CountsFile f;
      f.data = simulate_state(spec, events, seed);
      f.provenance = {{"state", spec.text},
                      {"events_per_setting", std::to_string(events)},
                      {"seed", std::to_string(seed)}};
      write_counts_file(out, f);
      std::cout << "true correlation matrix of " << spec.text << " (seed " << seed << "):\n";
      print_gamma(std::cout, spec.truth());
      return 0;
    }

    AnalysisOptions opts;
    opts.fields = parse_fields(fields);
    for (const auto& o : observables) opts.observables.push_back(parse_observable(o));
    if (!target.empty()) opts.target = target;
    opts.k = k;
    opts.seed = seed;
    opts.mc_samples = mc_samples;

    ReportDocument doc;
    if (ana->parsed()) {
      const CountsFile f = read_counts_file(counts_path);
      Provenance prov;
      prov["counts"] = counts_path;
      for (const auto& [key, value] : f.provenance) prov["counts." + key] = value;
      doc = analyze_counts(f.data, opts, prov);
    } else {
      const StateSpec spec = parse_state_spec(state);
      doc = analyze_exact(spec.truth(), opts, {{"state", spec.text}});
    }
    emit_report(doc, out);
    summarize(doc);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
