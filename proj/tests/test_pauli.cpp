#include <cmath>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "rebit/errors.hpp"
#include "rebit/pauli.hpp"
#include "test_support.hpp"

using namespace rebit;
using Catch::Approx;
using Catch::Matchers::WithinAbs;

namespace {

Matrix4 diag(double a, double b, double c, double d) { return Vector4(a, b, c, d).asDiagonal(); }

}  // namespace

TEST_CASE("density_from_correlation matches the Kronecker oracle", "[pauli]") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const Matrix4 g = testing::random_full_rank_gamma(rng);
    const Matrix4c rho = density_from_correlation(CorrelationMatrix(g)).matrix();
    CHECK((rho - testing::oracle_density(g)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-14);
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("maximally mixed state has density identity/4", "[pauli]") {
  const Matrix4c rho = density_from_correlation(CorrelationMatrix()).matrix();
  CHECK((rho - Matrix4c::Identity() / 4.0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(correlation_from_density(DensityMatrix(Matrix4c::Identity() / 4.0)).matrix() ==
        Matrix4(diag(1, 0, 0, 0)));
}

TEST_CASE("CFR q=1 density matrix entries", "[pauli]") {
  // Basis (HH, HV, VH, VV): 1/4 on the diagonal, -1/4 on the anti-diagonal
  // corners and +1/4 on the inner anti-diagonal, i.e. (1-2q)/4 = -1/4 at
  // (HH, VV) and 1/4 at (HV, VH).
  const Matrix4c rho = density_from_correlation(CorrelationMatrix(diag(1, 0, 0, 1))).matrix();
  Matrix4c expect = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) expect(i, i) = 0.25;
  expect(0, 3) = expect(3, 0) = -0.25;
  expect(1, 2) = expect(2, 1) = 0.25;
  CHECK((rho - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("correlation/density roundtrip", "[pauli][property]") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const Matrix4 g = testing::random_full_rank_gamma(rng);
    const CorrelationMatrix back = correlation_from_density(density_from_correlation(CorrelationMatrix(g)));
    CHECK((back.matrix() - g).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Bell state correlations", "[pauli]") {
  const Matrix4 g = correlation_from_ket(bell_ket(BellState::PhiPlus)).matrix();
  CHECK((g - diag(1, 1, 1, -1)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((bell_state(BellState::PsiMinus).matrix() - diag(1, -1, -1, -1)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((bell_state(BellState::PhiMinus).matrix() - diag(1, 1, -1, 1)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((bell_state(BellState::PsiPlus).matrix() - diag(1, -1, 1, 1)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("correlation_from_density rejects bad input", "[pauli]") {
  Matrix4c rho = Matrix4c::Identity() / 4.0;
  rho(0, 1) = Complex(0.1, 0.0);
  CHECK_THROWS_AS(correlation_from_density(DensityMatrix(rho)), InvalidArgument);
  CHECK_THROWS_AS(correlation_from_density(DensityMatrix(Matrix4c::Identity() / 2.0)), InvalidArgument);
  CHECK_THROWS_AS(density_from_correlation(CorrelationMatrix(diag(2, 0, 0, 0))), InvalidArgument);
}

TEST_CASE("cfr_state family", "[pauli]") {
  CHECK(cfr_state(1.0).matrix() == diag(1, 0, 0, 1));
  CHECK(cfr_state(0.5).matrix() == diag(1, 0, 0, 0));
  CHECK(cfr_state(0.0).matrix() == diag(1, 0, 0, -1));
  CHECK(correlation_from_density(density_from_correlation(cfr_state(0.0))).matrix() == diag(1, 0, 0, -1));
  for (double q = 0.0; q <= 1.0; q += 0.05) CHECK(is_physical(cfr_state(q), 1e-12));
  CHECK_THROWS_AS(cfr_state(-0.1), InvalidArgument);
  CHECK_THROWS_AS(cfr_state(1.1), InvalidArgument);
}

TEST_CASE("Hilbert-Schmidt geometry", "[pauli]") {
  const CorrelationMatrix mixed;
  CHECK(hs_inner(mixed, mixed) == Approx(0.25));
  CHECK(hs_inner(cfr_state(1), cfr_state(0)) == Approx(0.0).margin(1e-15));
  CHECK(hs_inner(cfr_state(1), cfr_state(1)) == Approx(0.5));
  CHECK(hs_distance(cfr_state(1), cfr_state(1)) == 0.0);
  CHECK(hs_distance(cfr_state(1), cfr_state(0)) == Approx(testing::oracle_hs_distance(diag(1, 0, 0, 1), diag(1, 0, 0, -1))));
  CHECK(hs_distance(cfr_state(1), cfr_state(0)) == Approx(1.0));
  CHECK(hs_distance(cfr_state(1), mixed) == Approx(0.5));

  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const Matrix4 a = testing::random_full_rank_gamma(rng), b = testing::random_full_rank_gamma(rng);
    CHECK_THAT(hs_distance(CorrelationMatrix(a), CorrelationMatrix(b)),
               WithinAbs(testing::oracle_hs_distance(a, b), 1e-13));
    CHECK(hs_distance(CorrelationMatrix(a), CorrelationMatrix(b)) ==
          hs_distance(CorrelationMatrix(b), CorrelationMatrix(a)));
  }
}

TEST_CASE("similarity", "[pauli][property]") {
  CHECK(similarity(cfr_state(1), cfr_state(1)) == Approx(1.0));
  CHECK(similarity(cfr_state(1), cfr_state(0)) == Approx(0.0).margin(1e-15));
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    const CorrelationMatrix a(testing::random_full_rank_gamma(rng)), b(testing::random_full_rank_gamma(rng));
    const double s = similarity(a, b);
    CHECK(s == similarity(b, a));
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    CHECK(similarity(a, a) == Approx(1.0).epsilon(1e-15));
    // Oracle: tr(rho rho') / sqrt(tr rho^2 tr rho'^2).
    const Matrix4c ra = testing::oracle_density(a.matrix()), rb = testing::oracle_density(b.matrix());
    const double expect = (ra * rb).trace().real() /
                          std::sqrt((ra * ra).trace().real() * (rb * rb).trace().real());
    CHECK_THAT(s, WithinAbs(expect, 1e-13));
  }
}

TEST_CASE("real_projection", "[pauli][property]") {
  CHECK(real_projection(cfr_state(0.3)) == cfr_state(0.3));
  const CorrelationMatrix bell = real_projection(bell_state(BellState::PhiPlus));
  CHECK(bell(Pauli::Y, Pauli::Y) == Approx(-1.0));

  Matrix4 g = diag(1, 0, 0, 0);
  g(0, 3) = 0.3;
  CHECK(real_projection(CorrelationMatrix(g))(Pauli::I, Pauli::Y) == 0.0);

  std::mt19937_64 rng(15);
  for (int t = 0; t < 50; ++t) {
    const CorrelationMatrix x(testing::random_full_rank_gamma(rng));
    const CorrelationMatrix p = real_projection(x);
    CHECK(real_projection(p) == p);
    CHECK(p(3, 3) == x(3, 3));
    for (int k = 0; k < 3; ++k) {
      CHECK(p(3, k) == 0.0);
      CHECK(p(k, 3) == 0.0);
      for (int j = 0; j < 3; ++j) CHECK(p(k, j) == x(k, j));
    }
    // Re(rho) oracle.
    const Matrix4c re = testing::oracle_density(x.matrix()).real().cast<Complex>();
    CHECK((testing::oracle_gamma(re) - p.matrix()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("is_physical", "[pauli]") {
  CHECK(is_physical(CorrelationMatrix()));
  CHECK(is_physical(cfr_state(1.0)));
  CHECK_FALSE(is_physical(CorrelationMatrix(diag(1, 1.5, 0, 0))));
  CHECK(min_eigenvalue(CorrelationMatrix(diag(1, 1.5, 0, 0))) == Approx(-0.125));
}

TEST_CASE("polarization states", "[pauli]") {
  using P = Polarization;
  CHECK(polarization_state(P::H).bloch == Vector4(1, 1, 0, 0));
  CHECK(polarization_state(P::V).bloch == Vector4(1, -1, 0, 0));
  CHECK(polarization_state(P::D).bloch == Vector4(1, 0, 1, 0));
  CHECK(polarization_state(P::A).bloch == Vector4(1, 0, -1, 0));
  CHECK(polarization_state(P::R).bloch == Vector4(1, 0, 0, 1));
  CHECK(polarization_state(P::L).bloch == Vector4(1, 0, 0, -1));
  for (P p : kQubitAlphabet) {
    CHECK(polarization_state(p).purity_defect() == 0.0);
    CHECK(polarization_state(p).label == p);
    // Bloch vector of the ket, computed with the oracle Pauli matrices.
    const Vector2c k = polarization_ket(p);
    for (int m = 0; m < 4; ++m)
      CHECK_THAT((k.adjoint() * testing::oracle_pauli(m) * k).value().real(),
                 WithinAbs(polarization_state(p).bloch[m], 1e-15));
  }
  CHECK_THROWS_AS(parse_polarization('Q'), ParseError);
}

TEST_CASE("product states and ket conversions", "[pauli]") {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 50; ++t) {
    const LocalState a{testing::random_bloch(rng, false), std::nullopt};
    const LocalState b{testing::random_bloch(rng, false), std::nullopt};
    const Vector2c ka = ket_from_local_state(a), kb = ket_from_local_state(b);
    CHECK((local_state_from_ket(ka).bloch - a.bloch).cwiseAbs().maxCoeff() < 1e-14);
    Vector4c psi;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) psi[2 * i + j] = ka[i] * kb[j];
    CHECK((correlation_from_ket(psi).matrix() - product_state(a, b).matrix()).cwiseAbs().maxCoeff() <
          1e-14);
  }
}

TEST_CASE("depolarize scales correlations", "[pauli]") {
  const CorrelationMatrix g = depolarize(bell_state(BellState::PhiPlus), 0.5);
  CHECK((g.matrix() - diag(1, 0.5, 0.5, -0.5)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(depolarize(cfr_state(1.0), 0.25).matrix() == diag(1, 0, 0, 0.25));
  CHECK_THROWS_AS(depolarize(g, 1.5), InvalidArgument);
}

TEST_CASE("name parsing", "[pauli]") {
  CHECK(parse_field("real") == Field::Real);
  CHECK(parse_field("complex") == Field::Complex);
  CHECK_THROWS_AS(parse_field("quaternion"), ParseError);
  CHECK(parse_basis('y') == Pauli::Y);
  CHECK_THROWS_AS(parse_basis('q'), ParseError);
}
