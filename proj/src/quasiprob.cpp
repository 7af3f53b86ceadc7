#include "rebit/quasiprob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rebit/errors.hpp"

namespace rebit {

namespace {

void require_diagonal(const CorrelationMatrix& g, double tol, const char* who) {
  const Matrix4& m = g.matrix();
  const double scale = std::max(1.0, std::abs(m(0, 0)));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && std::abs(m(i, j)) > tol * scale)
        throw InvalidArgument(std::string(who) + ": input is not in diagonal standard form");
}

/// Adds the (|c| + c, |c| - c)/4 pattern for one Pauli axis on the 2x2
/// block starting at `offset`.
void add_axis_block(Eigen::MatrixXd& p, int offset, double c) {
  const double same = (std::abs(c) + c) / 4.0;
  const double flip = (std::abs(c) - c) / 4.0;
  p(offset, offset) += same;
  p(offset + 1, offset + 1) += same;
  p(offset, offset + 1) += flip;
  p(offset + 1, offset) += flip;
}

void add_uniform_blocks(Eigen::MatrixXd& p, int blocks, double value) {
  for (int k = 0; k < blocks; ++k) p.block(2 * k, 2 * k, 2, 2).array() += value;
}

}  // namespace

std::span<const Polarization> WeightTable::alphabet() const {
  if (field == Field::Real) return kRebitAlphabet;
  return kQubitAlphabet;
}

double QuasiDecomposition::weight_sum() const {
  return std::accumulate(entries.begin(), entries.end(), 0.0,
                         [](double s, const QuasiEntry& e) { return s + e.weight; });
}

double QuasiDecomposition::min_weight() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) m = std::min(m, e.weight);
  return m;
}

WeightTable QuasiDecomposition::table() const {
  WeightTable t;
  t.field = field;
  const auto alpha = t.alphabet();
  const auto n = static_cast<Eigen::Index>(alpha.size());
  t.weights = Eigen::MatrixXd::Zero(n, n);
  auto pos = [&](Polarization p) {
    return static_cast<Eigen::Index>(std::find(alpha.begin(), alpha.end(), p) - alpha.begin());
  };
  for (const auto& e : entries) t.weights(pos(e.alice_source), pos(e.bob_source)) += e.weight;
  return t;
}

WeightTable pstd_rebit(const CorrelationMatrix& g_std, double tol) {
  require_diagonal(g_std, tol, "pstd_rebit");
  const double zz = g_std(Pauli::Z, Pauli::Z);
  const double xx = g_std(Pauli::X, Pauli::X);
  WeightTable t;
  t.field = Field::Real;
  t.weights = Eigen::MatrixXd::Zero(4, 4);
  add_uniform_blocks(t.weights, 2, (g_std(0, 0) - std::abs(zz) - std::abs(xx)) / 8.0);
  add_axis_block(t.weights, 0, zz);
  add_axis_block(t.weights, 2, xx);
  return t;
}

WeightTable pstd_qubit(const CorrelationMatrix& g_std, double tol) {
  require_diagonal(g_std, tol, "pstd_qubit");
  const double zz = g_std(Pauli::Z, Pauli::Z);
  const double xx = g_std(Pauli::X, Pauli::X);
  const double yy = g_std(Pauli::Y, Pauli::Y);
  const double q = g_std(0, 0) - std::abs(zz) - std::abs(xx) - std::abs(yy);
  WeightTable t;
  t.field = Field::Complex;
  t.weights = Eigen::MatrixXd::Zero(6, 6);
  add_uniform_blocks(t.weights, 3, q / 12.0);
  add_axis_block(t.weights, 0, zz);
  add_axis_block(t.weights, 2, xx);
  add_axis_block(t.weights, 4, yy);
  return t;
}

QuasiDecomposition transform_quasi(const WeightTable& p_std, const LocalMapPair& maps) {
  Eigen::FullPivLU<Matrix4> la(maps.alice), lb(maps.bob);
  if (!la.isInvertible() || !lb.isInvertible())
    throw InvalidArgument("transform_quasi: singular local map");
  const Matrix4 a_inv = la.inverse();
  const Matrix4 b_inv = lb.inverse();

  const auto alpha = p_std.alphabet();
  if (p_std.weights.rows() != static_cast<Eigen::Index>(alpha.size()) ||
      p_std.weights.cols() != p_std.weights.rows())
    throw InvalidArgument("transform_quasi: weight table does not match its alphabet");

  auto transformed = [](const Matrix4& inv, Polarization p, double& scale) {
    LocalState s;
    const Vector4 v = inv * polarization_state(p).bloch;
    scale = v[0];
    if (std::abs(scale) < 1e-12)
      throw InvalidArgument(std::string("transform_quasi: local map annihilates |") +
                            polarization_char(p) + ">");
    s.bloch = v / scale;
    return s;
  };

  QuasiDecomposition d;
  d.field = p_std.field;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (i / 2 != j / 2) continue;
      QuasiEntry e;
      e.alice_source = alpha[i];
      e.bob_source = alpha[j];
      double ca = 0.0, cb = 0.0;
      e.alice = transformed(a_inv, alpha[i], ca);
      e.bob = transformed(b_inv, alpha[j], cb);
      if (ca == 1.0 && (e.alice.bloch - polarization_state(alpha[i]).bloch).isZero(0.0))
        e.alice.label = alpha[i];
      if (cb == 1.0 && (e.bob.bloch - polarization_state(alpha[j]).bloch).isZero(0.0))
        e.bob.label = alpha[j];
      e.weight = p_std.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * ca * cb;
      d.entries.push_back(e);
    }

  const double total = d.weight_sum();
  if (std::abs(total) < 1e-12) throw InvalidArgument("transform_quasi: weights sum to zero");
  for (auto& e : d.entries) e.weight /= total;
  return d;
}

CorrelationMatrix local_reconstruction(const QuasiDecomposition& d) {
  Matrix4 m = Matrix4::Zero();
  for (const auto& e : d.entries) m += e.weight * e.alice.bloch * e.bob.bloch.transpose();
  return CorrelationMatrix(m);
}

DecompositionResult decompose(const CorrelationMatrix& g, Field field,
                              const StandardFormOptions& opts) {
  DecompositionResult r;
  r.standard_form = to_standard_form(g, field, opts);
  r.p_std = field == Field::Real ? pstd_rebit(r.standard_form.gamma_std)
                                 : pstd_qubit(r.standard_form.gamma_std);
  r.decomposition = transform_quasi(r.p_std, r.standard_form.maps);
  r.reconstruction = local_reconstruction(r.decomposition);
  r.distance = hs_distance(g, r.reconstruction);
  if (field == Field::Real)
    r.decomposition.residual_coeff = (g(Pauli::Y, Pauli::Y) - r.reconstruction(Pauli::Y, Pauli::Y)) / 4.0;
  return r;
}

bool separability_certificate(const QuasiDecomposition& d, double tol) {
  return d.min_weight() >= -tol && std::abs(d.residual_coeff) <= tol;
}

bool separability_certificate(const DecompositionResult& r, double tol) {
  return separability_certificate(r.decomposition, tol) && r.distance <= tol;
}

double display_weight(double w) { return std::abs(w) < 1e-12 ? 0.0 : w; }

}  // namespace rebit
