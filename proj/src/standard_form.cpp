#include "rebit/standard_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <string>

#include "rebit/errors.hpp"

namespace rebit {

namespace {

constexpr int kY = 3;

/// Rebit maps must not touch the y component; clear signed zeros left by
/// the boost formula so the invariant holds bit-exactly.
void pin_y_identity(Matrix4& m) {
  m.row(kY).setZero();
  m.col(kY).setZero();
  m(kY, kY) = 1.0;
}

double relative_bloch_length(const Vector4& v) { return v.tail<3>().norm() / v[0]; }

void check_marginal(const Vector4& v, const char* who, double rank_tol) {
  if (!(v[0] > 0.0)) throw SingularMarginal(std::string(who) + " marginal has vanishing trace");
  const double min_eig = (1.0 - relative_bloch_length(v)) / 2.0;
  if (min_eig < rank_tol)
    throw SingularMarginal(std::string(who) + " marginal is rank deficient (smallest eigenvalue " +
                           std::to_string(min_eig) + ")");
}

double max_offdiag(const Eigen::MatrixXd& m) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) out = std::max(out, std::abs(m(i, j)));
  return out;
}

struct Rotations {
  Eigen::MatrixXd alice;
  Eigen::MatrixXd bob;
};

/// Proper rotations R_A, R_B with R_A T R_B^T diagonal. Singular vectors are
/// matched to the coordinate axes they overlap most, so already-diagonal
/// blocks are left in place.
Rotations diagonalizing_rotations(const Eigen::MatrixXd& t) {
  const auto d = t.rows();
  Rotations r{Eigen::MatrixXd::Identity(d, d), Eigen::MatrixXd::Identity(d, d)};
  if (max_offdiag(t) <= 1e-15 * std::max(1.0, t.cwiseAbs().maxCoeff())) return r;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();

  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_score = -1.0;
  do {
    double score = 0.0;
    for (int i = 0; i < d; ++i) score += std::abs(u(i, perm[i])) + std::abs(v(i, perm[i]));
    if (score > best_score) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Eigen::MatrixXd up(d, d), vp(d, d);
  for (int i = 0; i < d; ++i) {
    const double s = u(i, best[i]) < 0.0 ? -1.0 : 1.0;
    up.col(i) = s * u.col(best[i]);
    vp.col(i) = s * v.col(best[i]);
  }
  auto make_proper = [d](Eigen::MatrixXd& q) {
    if (q.determinant() > 0.0) return;
    int k = 0;
    for (int i = 1; i < d; ++i)
      if (std::abs(q(i, i)) < std::abs(q(k, k))) k = i;
    q.col(k) *= -1.0;
  };
  make_proper(up);
  make_proper(vp);
  r.alice = up.transpose();
  r.bob = vp.transpose();
  return r;
}

/// Boosts (K_a, K_b) from the linearization of the marginal conditions of
/// K_a M K_b^T: [[I, T], [T^T, I]] [da; db] = [a; b] with everything scaled
/// by M[0,0]. Returns nothing when the system is singular.
std::optional<std::pair<Matrix4, Matrix4>> newton_boosts(const Matrix4& m, bool rebit) {
  const int d = rebit ? 2 : 3;
  const double m00 = m(0, 0);
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(2 * d, 2 * d);
  const Eigen::MatrixXd t = m.block(1, 1, d, d) / m00;
  sys.block(0, d, d, d) = t;
  sys.block(d, 0, d, d) = t.transpose();
  Eigen::VectorXd rhs(2 * d);
  rhs.head(d) = m.block(1, 0, d, 1) / m00;
  rhs.tail(d) = m.block(0, 1, 1, d).transpose() / m00;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::VectorXd delta = lu.solve(rhs);
  if (!delta.allFinite()) return std::nullopt;

  auto boost = [&](const Eigen::VectorXd& v) {
    Vector4 w = Vector4::Zero();
    w[0] = 1.0;
    w.segment(1, d) = v;
    const double speed = v.norm();
    if (speed > 0.9) w.segment(1, d) *= 0.9 / speed;
    Matrix4 k = rest_frame_boost(w);
    if (rebit) pin_y_identity(k);
    return k;
  };
  return std::make_pair(boost(delta.head(d)), boost(delta.tail(d)));
}

}  // namespace

Matrix4 rest_frame_boost(const Vector4& v) {
  const Eigen::Vector3d beta = v.tail<3>() / v[0];
  const double b2 = beta.squaredNorm();
  if (!(b2 < 1.0)) throw SingularMarginal("rest_frame_boost: vector is not timelike");
  Matrix4 m = Matrix4::Identity();
  if (b2 == 0.0) return m;
  const double gamma = 1.0 / std::sqrt(1.0 - b2);
  m(0, 0) = gamma;
  m.block<1, 3>(0, 1) = -gamma * beta.transpose();
  m.block<3, 1>(1, 0) = -gamma * beta;
  m.block<3, 3>(1, 1) += (gamma * gamma / (gamma + 1.0)) * (beta * beta.transpose());
  return m;
}

StandardFormResult to_standard_form(const CorrelationMatrix& g, Field field,
                                    const StandardFormOptions& opts) {
  const bool rebit = field == Field::Real;
  Matrix4 m = rebit ? real_projection(g).matrix() : g.matrix();
  if (!m.allFinite()) throw InvalidArgument("to_standard_form: non-finite input");

  check_marginal(m.col(0), "Alice", opts.rank_tol);
  check_marginal(m.row(0).transpose(), "Bob", opts.rank_tol);

  // Step 1: remove both marginals with boosts. Plain alternation converges
  // at rate ~ sigma_max(T)^2, which stalls for nearly pure states, so each
  // sweep first tries a Newton step on the joint conditions.
  Matrix4 a = Matrix4::Identity();
  Matrix4 b = Matrix4::Identity();
  auto residual = [](const Matrix4& x) {
    return std::max(relative_bloch_length(x.col(0)), relative_bloch_length(x.row(0).transpose()));
  };
  int it = 0;
  for (;; ++it) {
    const double r = residual(m);
    if (r < opts.tol) break;
    if (it >= opts.max_iters)
      throw NonConvergence("to_standard_form: local filtering left marginal Bloch length " +
                           std::to_string(r) + " after " + std::to_string(opts.max_iters) +
                           " iterations");
    if (1.0 - r < 2.0 * opts.rank_tol)
      throw SingularMarginal("to_standard_form: marginal became rank deficient while filtering");

    if (auto step = newton_boosts(m, rebit)) {
      const Matrix4 next = step->first * m * step->second.transpose();
      if (residual(next) < r) {
        m = next;
        a = step->first * a;
        b = step->second * b;
        continue;
      }
    }

    Matrix4 ka = rest_frame_boost(m.col(0));
    if (rebit) pin_y_identity(ka);
    m = ka * m;
    a = ka * a;

    Matrix4 kb = rest_frame_boost(m.row(0).transpose());
    if (rebit) pin_y_identity(kb);
    m = m * kb.transpose();
    b = kb * b;
  }

  // Step 2: rotate the correlation block to diagonal form.
  const int d = rebit ? 2 : 3;
  const Rotations rot = diagonalizing_rotations(m.block(1, 1, d, d));
  Matrix4 a2 = Matrix4::Identity();
  Matrix4 b2 = Matrix4::Identity();
  a2.block(1, 1, d, d) = rot.alice;
  b2.block(1, 1, d, d) = rot.bob;

  StandardFormResult out;
  out.filter_iterations = it;
  out.maps.field = field;
  out.maps.alice = a2 * a;
  out.maps.bob = b2 * b;
  if (rebit) {
    pin_y_identity(out.maps.alice);
    pin_y_identity(out.maps.bob);
  }

  Matrix4 std_form = out.maps.alice * (rebit ? real_projection(g).matrix() : g.matrix()) *
                     out.maps.bob.transpose();
  out.residual_offdiag = max_offdiag(std_form);
  out.gamma_std = CorrelationMatrix(Matrix4(std_form.diagonal().asDiagonal()));
  return out;
}

CorrelationMatrix apply_local_maps(const CorrelationMatrix& g_std, const LocalMapPair& maps) {
  Eigen::FullPivLU<Matrix4> la(maps.alice), lb(maps.bob);
  if (std::abs(maps.alice.determinant()) < 1e-12 || std::abs(maps.bob.determinant()) < 1e-12 ||
      !la.isInvertible() || !lb.isInvertible())
    throw InvalidArgument("apply_local_maps: singular local map");
  const Matrix4 out = la.inverse() * g_std.matrix() * lb.inverse().transpose();
  if (!(std::abs(out(0, 0)) > 0.0))
    throw InvalidArgument("apply_local_maps: transformed state has zero trace");
  return CorrelationMatrix(out / out(0, 0));
}

}  // namespace rebit
