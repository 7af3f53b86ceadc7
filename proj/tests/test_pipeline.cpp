#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "rebit/errors.hpp"
#include "rebit/pipeline.hpp"

using namespace rebit;
using Catch::Approx;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rebit_test_" + name);
}

AnalysisOptions quick_options() {
  AnalysisOptions o;
  o.mc_samples = 200;
  o.seed = 3;
  o.target = "cfr:q=1";
  return o;
}

}  // namespace

TEST_CASE("state spec grammar", "[pipeline]") {
  CHECK(parse_state_spec("cfr:q=1").truth() == cfr_state(1.0));
  CHECK(parse_state_spec("cfr:q=0.25").truth() == cfr_state(0.25));
  CHECK(parse_state_spec("bell:psi-").truth() == bell_state(BellState::PsiMinus));
  CHECK(parse_state_spec("product:RL").truth() ==
        product_state(polarization_state(Polarization::R), polarization_state(Polarization::L)));

  const StateSpec mix = parse_state_spec("mix:RR=0.5,LL=0.5;v=0.96");
  CHECK(mix.components.size() == 2);
  CHECK(mix.visibility == 0.96);
  const Matrix4 expect = Vector4(1, 0, 0, 0.96).asDiagonal();
  CHECK((mix.truth().matrix() - expect).cwiseAbs().maxCoeff() < 1e-15);

  CHECK(parse_state_spec("mix:RR=1,LL=3").truth()(3, 3) == Approx(1.0));
  CHECK(parse_state_spec("mix:RL=1,LR=1").truth()(3, 3) == Approx(-1.0));

  for (const char* bad : {"cfr:q=2", "cfr:x=1", "bell:omega", "product:RQ", "product:R", "mix:RR",
                          "mix:RR=-1", "nothing", "cfr:q=1;w=3", "cfr:q=1;v=1.5", "file:/nonexistent"})
    CHECK_THROWS_AS(parse_state_spec(bad), ParseError);
}

TEST_CASE("correlation matrix files", "[pipeline]") {
  const auto path = temp_file("gamma.txt");
  {
    std::ofstream out(path);
    out << "# werner-like\n1 0 0 0\n0 0.5 0 0\n0 0 0.5 0\n0 0 0 -0.5  # yy\n";
  }
  const CorrelationMatrix g = parse_state_spec("file:" + path.string()).truth();
  CHECK(g.matrix() == Matrix4(Vector4(1, 0.5, 0.5, -0.5).asDiagonal()));
  {
    std::ofstream out(path);
    out << "1 0 0\n";
  }
  CHECK_THROWS_AS(read_gamma_file(path), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("mixture simulation seeds components independently", "[pipeline]") {
  const StateSpec s = parse_state_spec("mix:RR=0.5,LL=0.5");
  const CountsDataset d = simulate_state(s, 1000, 9);
  const CountsDataset rr = simulate_counts(s.components[0].first, 1000, 9);
  const CountsDataset ll = simulate_counts(s.components[1].first, 1000, 10);
  CHECK(d == mix_datasets({{rr, 0.5}, {ll, 0.5}}));
  CHECK(simulate_state(s, 1000, 9) == d);
}

TEST_CASE("counts file roundtrip", "[pipeline]") {
  CountsFile f;
  f.data = simulate_counts(cfr_state(0.8), 5000, 4);
  f.provenance = {{"state", "cfr:q=0.8"}, {"seed", "4"}};
  std::stringstream ss;
  write_counts(ss, f);
  CHECK(ss.str().rfind("# rebit-counts v1\n", 0) == 0);
  CHECK(read_counts(ss) == f);

  const auto path = temp_file("counts.txt");
  write_counts_file(path, f);
  CHECK(read_counts_file(path) == f);
  std::filesystem::remove(path);
}

TEST_CASE("malformed counts files", "[pipeline]") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_counts(in);
  };
  std::ostringstream full;
  write_counts(full, CountsFile{simulate_counts(CorrelationMatrix(), 10, 1), {}});
  std::string missing = full.str();
  const auto pos = missing.find("yx ");
  missing.erase(pos, missing.find('\n', pos) - pos + 1);
  try {
    parse(missing);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("'yx'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse(full.str() + "zz 1 2 3 4\n"), ParseError);
  CHECK_THROWS_AS(parse("zz 1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse("zq 1 2 3 4\n"), ParseError);
  CHECK_THROWS_AS(parse("zz 1 2 3 -4\n"), ParseError);
  CHECK_THROWS_AS(parse("zz 1 2 3 4 5\n"), ParseError);
}

TEST_CASE("exact analysis of CFR states", "[pipeline]") {
  AnalysisOptions o;
  o.target = "cfr:q=1";
  const ReportDocument q1 = analyze_exact(cfr_state(1.0), o);
  REQUIRE(q1.witnesses.size() == 1);
  CHECK(q1.witnesses[0].verdict.expectation == 1.0);
  CHECK(q1.witnesses[0].verdict.r_entangled);
  CHECK_FALSE(q1.witnesses[0].verdict.c_entangled);
  REQUIRE(q1.decomposition(Field::Real) != nullptr);
  CHECK(q1.decomposition(Field::Real)->distance.value == 0.5);
  CHECK(q1.decomposition(Field::Real)->residual_coeff.value == 0.25);
  CHECK_FALSE(q1.decomposition(Field::Real)->certificate);
  CHECK(q1.decomposition(Field::Complex)->distance.value == 0.0);
  CHECK(q1.decomposition(Field::Complex)->certificate);
  CHECK(q1.similarity->value.value == 1.0);
  CHECK(q1.similarity->value.std == 0.0);

  const ReportDocument half = analyze_exact(cfr_state(0.5), o);
  CHECK(half.witnesses[0].verdict.expectation == 0.0);
  CHECK(half.decomposition(Field::Real)->distance.value == 0.0);
  CHECK(half.decomposition(Field::Complex)->distance.value == 0.0);

  AnalysisOptions c;
  c.fields = {Field::Complex};
  const ReportDocument bell = analyze_exact(bell_state(BellState::PhiPlus), c);
  CHECK(bell.decomposition(Field::Real) == nullptr);
  CHECK(bell.decomposition(Field::Complex)->distance.value < 1e-9);
  CHECK(bell.decomposition(Field::Complex)->min_weight < 0.0);
  CHECK_FALSE(bell.decomposition(Field::Complex)->certificate);
}

TEST_CASE("counts analysis carries Monte-Carlo uncertainties", "[pipeline]") {
  const CountsDataset counts = simulate_state(parse_state_spec("mix:RR=0.5,LL=0.5;v=0.9"), 20000, 5);
  AnalysisOptions o = quick_options();
  o.observables.push_back({1.0, 1.0, 0.0});
  const ReportDocument doc = analyze_counts(counts, o, {{"source", "unit"}});
  CHECK(doc.provenance.at("seed") == "3");
  CHECK(doc.provenance.at("source") == "unit");
  CHECK(doc.mc_samples + doc.mc_failures == 200);
  REQUIRE(doc.witnesses.size() == 2);
  CHECK(doc.witnesses[0].mc_std > 0.0);
  CHECK(doc.witnesses[0].verdict.sigma > 0.0);
  CHECK(doc.witnesses[0].mc_std == Approx(doc.witnesses[0].verdict.sigma).epsilon(0.3));
  CHECK(doc.similarity->value.std > 0.0);
  for (const auto& d : doc.decompositions) {
    CHECK(d.distance.std > 0.0);
    for (const auto& w : d.weights) CHECK(w.weight.std >= 0.0);
  }
  CHECK(doc.decomposition(Field::Real)->residual_coeff.std > 0.0);

  CHECK(analyze_counts(counts, o, {{"source", "unit"}}) == doc);
}

TEST_CASE("field order does not depend on the request order", "[pipeline]") {
  AnalysisOptions a, b;
  a.fields = {Field::Complex, Field::Real};
  b.fields = {Field::Real, Field::Complex, Field::Real};
  const ReportDocument x = analyze_exact(cfr_state(0.7), a), y = analyze_exact(cfr_state(0.7), b);
  CHECK(x == y);
  CHECK(report_from_json(report_to_json(x)) == x);
}

TEST_CASE("report JSON roundtrip", "[pipeline]") {
  const CountsDataset counts = simulate_counts(depolarize(cfr_state(1.0), 0.9), 20000, 6);
  const ReportDocument doc = analyze_counts(counts, quick_options());
  const std::string text = report_to_json(doc);
  const ReportDocument back = report_from_json(text);
  CHECK(back == doc);
  CHECK(report_to_json(back) == text);

  const ReportDocument exact = analyze_exact(cfr_state(1.0), quick_options());
  CHECK(exact.witnesses[0].verdict.significance == std::numeric_limits<double>::infinity());
  CHECK(report_from_json(report_to_json(exact)) == exact);

  CHECK_THROWS_AS(report_from_json("{"), ParseError);
  CHECK_THROWS_AS(report_from_json("{\"format\": \"other\"}"), ParseError);
}

TEST_CASE("round_sig9", "[pipeline]") {
  CHECK(round_sig9(0.123456789123) == 0.123456789);
  CHECK(round_sig9(-98765.43210987) == -98765.4321);
  CHECK(round_sig9(0.0) == 0.0);
  CHECK(std::isinf(round_sig9(std::numeric_limits<double>::infinity())));
  CHECK(round_sig9(round_sig9(1.0 / 3.0)) == round_sig9(1.0 / 3.0));
}

TEST_CASE("weight CSV layout", "[pipeline]") {
  const ReportDocument doc = analyze_exact(cfr_state(1.0), AnalysisOptions{});
  const std::string real = weights_csv(*doc.decomposition(Field::Real), TableColumn::Weight);
  CHECK(real == "a\\b,H,V,D,A\nH,0.125,0.125,0,0\nV,0.125,0.125,0,0\nD,0,0,0.125,0.125\nA,0,0,0.125,0.125\n");
  const std::string cplx = weights_csv(*doc.decomposition(Field::Complex), TableColumn::Weight);
  CHECK(cplx ==
        "a\\b,H,V,D,A,R,L\nH,0,0,0,0,0,0\nV,0,0,0,0,0,0\nD,0,0,0,0,0,0\nA,0,0,0,0,0,0\n"
        "R,0,0,0,0,0.5,0\nL,0,0,0,0,0,0.5\n");
  const std::string stds = weights_csv(*doc.decomposition(Field::Complex), TableColumn::Std);
  CHECK(stds.find("0.5") == std::string::npos);
}
