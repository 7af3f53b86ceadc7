#include "rebit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rebit/errors.hpp"

namespace rebit {

Matrix4 DiagObservable::matrix() const {
  const Matrix4c m = lz * pauli_product(Pauli::Z, Pauli::Z) +
                     lx * pauli_product(Pauli::X, Pauli::X) +
                     ly * pauli_product(Pauli::Y, Pauli::Y);
  return m.real();
}

double DiagObservable::coefficient(Pauli p) const {
  switch (p) {
    case Pauli::Z: return lz;
    case Pauli::X: return lx;
    case Pauli::Y: return ly;
    case Pauli::I: break;
  }
  return 0.0;
}

// ---- closed forms ---------------------------------------------------------

std::vector<SeparabilityEigenpair> analytic_spectrum(const DiagObservable& obs, Field field) {
  using P = Polarization;
  struct Family {
    P plus, minus;
    double coeff;
  };
  std::vector<Family> families = {{P::H, P::V, obs.lz}, {P::D, P::A, obs.lx}};
  if (field == Field::Complex) families.push_back({P::R, P::L, obs.ly});

  std::vector<SeparabilityEigenpair> out;
  for (const auto& f : families) {
    const std::array<std::pair<P, double>, 2> sides = {{{f.plus, 1.0}, {f.minus, -1.0}}};
    for (const auto& [pa, sa] : sides)
      for (const auto& [pb, sb] : sides) {
        SeparabilityEigenpair e;
        e.value = sa * sb * f.coeff;
        e.alice = polarization_state(pa);
        e.bob = polarization_state(pb);
        e.field = field;
        out.push_back(e);
      }
  }
  return out;
}

std::vector<OrdinaryEigenpair> ordinary_spectrum(const DiagObservable& obs) {
  const double z = obs.lz, x = obs.lx, y = obs.ly;
  const std::array<std::pair<BellState, double>, 4> table = {{
      {BellState::PhiPlus, z + x - y},
      {BellState::PhiMinus, z - x + y},
      {BellState::PsiPlus, -z + x + y},
      {BellState::PsiMinus, -z - x - y},
  }};
  std::vector<OrdinaryEigenpair> out;
  for (const auto& [which, value] : table) out.push_back({value, which, bell_ket(which)});
  return out;
}

Bounds bounds(const DiagObservable& obs, Field field) {
  double m = std::max(std::abs(obs.lz), std::abs(obs.lx));
  if (field == Field::Complex) m = std::max(m, std::abs(obs.ly));
  return {-m, m, 0};
}

Bounds ordinary_bounds(const DiagObservable& obs) {
  Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
  for (const auto& e : ordinary_spectrum(obs)) {
    b.min = std::min(b.min, e.value);
    b.max = std::max(b.max, e.value);
  }
  return b;
}

// ---- reduced operators ----------------------------------------------------

Matrix2c reduce_on_alice(const Matrix4& obs, const Vector2c& a) {
  Matrix2c out = Matrix2c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Complex w = std::conj(a[i]) * a[j];
      out += w * obs.block<2, 2>(2 * i, 2 * j).cast<Complex>();
    }
  return out;
}

Matrix2c reduce_on_bob(const Matrix4& obs, const Vector2c& b) {
  Matrix2c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out(i, j) = b.dot(obs.block<2, 2>(2 * i, 2 * j).cast<Complex>() * b);
  return out;
}

double separability_residual(const Matrix4& obs, const SeparabilityEigenpair& pair) {
  const Vector2c a = ket_from_local_state(pair.alice);
  const Vector2c b = ket_from_local_state(pair.bob);
  const double ra = (reduce_on_bob(obs, b) * a - pair.value * a).norm();
  const double rb = (reduce_on_alice(obs, a) * b - pair.value * b).norm();
  return std::max(ra, rb);
}

// ---- numeric solver -------------------------------------------------------

namespace {

enum class Branch { Max, Min };

/// Eigenvector of a 2x2 Hermitian operator on the requested branch.
/// Real field keeps the vector real.
Vector2c branch_eigenvector(const Matrix2c& op, Field field, Branch branch) {
  const int k = branch == Branch::Max ? 1 : 0;
  if (field == Field::Real) {
    Eigen::SelfAdjointEigenSolver<Matrix2> es(op.real());
    return es.eigenvectors().col(k).cast<Complex>();
  }
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(op);
  return es.eigenvectors().col(k);
}

Vector2c random_ket(std::mt19937_64& rng, Field field) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector2c v;
  for (int i = 0; i < 2; ++i)
    v[i] = field == Field::Real ? Complex(n(rng), 0.0) : Complex(n(rng), n(rng));
  return v.normalized();
}

double expectation(const Matrix4& obs, const Vector2c& a, const Vector2c& b) {
  Vector4c ab;
  ab << a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1];
  return ab.dot(obs.cast<Complex>() * ab).real();
}

/// Pauli coefficients of the observable scaled so that
/// <a,b|L|a,b> = na^T C nb for Bloch 4-vectors na, nb.
Matrix4 bloch_form(const Matrix4& obs) {
  Matrix4 c;
  const Matrix4c l = obs.cast<Complex>();
  for (auto mu : kPaulis)
    for (auto nu : kPaulis) c(idx(mu), idx(nu)) = (l * pauli_product(mu, nu)).trace().real() / 4.0;
  return c;
}

/// Newton iteration on the Lagrange conditions
///   u + T nb = la na,  v + T^T na = lb nb,  |na| = |nb| = 1
/// in Bloch coordinates. Dimension is 2 (z, x) for rebits, 3 for qubits.
bool newton_polish(const Matrix4& form, Field field, Eigen::Vector3d& na, Eigen::Vector3d& nb) {
  const int d = field == Field::Real ? 2 : 3;
  const Eigen::MatrixXd t = form.block(1, 1, d, d);
  const Eigen::VectorXd u = form.block(1, 0, d, 1);
  const Eigen::VectorXd v = form.block(0, 1, 1, d).transpose();
  Eigen::VectorXd a = na.head(d), b = nb.head(d);
  double la = a.dot(u + t * b);
  double lb = b.dot(v + t.transpose() * a);

  const int n = 2 * d + 2;
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXd f(n);
    f.head(d) = u + t * b - la * a;
    f.segment(d, d) = v + t.transpose() * a - lb * b;
    f[2 * d] = (a.squaredNorm() - 1.0) / 2.0;
    f[2 * d + 1] = (b.squaredNorm() - 1.0) / 2.0;
    if (f.norm() < 1e-15) break;

    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    j.block(0, 0, d, d) = -la * Eigen::MatrixXd::Identity(d, d);
    j.block(0, d, d, d) = t;
    j.block(0, 2 * d, d, 1) = -a;
    j.block(d, 0, d, d) = t.transpose();
    j.block(d, d, d, d) = -lb * Eigen::MatrixXd::Identity(d, d);
    j.block(d, 2 * d + 1, d, 1) = -b;
    j.block(2 * d, 0, 1, d) = a.transpose();
    j.block(2 * d + 1, d, 1, d) = b.transpose();

    Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) return false;
    const Eigen::VectorXd step = lu.solve(-f);
    a += step.head(d);
    b += step.segment(d, d);
    la += step[2 * d];
    lb += step[2 * d + 1];
    if (!a.allFinite() || !b.allFinite()) return false;
  }
  a.normalize();
  b.normalize();
  na.setZero();
  nb.setZero();
  na.head(d) = a;
  nb.head(d) = b;
  return true;
}

LocalState state_from_bloch3(const Eigen::Vector3d& n) {
  LocalState s;
  s.bloch << 1.0, n;
  return s;
}

struct Candidate {
  SeparabilityEigenpair pair;
  bool converged = false;
};

Candidate run_branch(const Matrix4& obs, const Matrix4& form, Field field, Branch branch,
                     Vector2c a, Vector2c b, const SolverOptions& opts) {
  const double scale = std::max(1.0, obs.cwiseAbs().maxCoeff());
  const double zero_op = 1e-12 * scale;

  Candidate c;
  c.pair.field = field;
  double g = expectation(obs, a, b);
  for (int it = 0; it < opts.max_iters; ++it) {
    const Matrix2c la = reduce_on_alice(obs, a);
    if (la.cwiseAbs().maxCoeff() < zero_op)
      c.pair.degenerate = true;
    else
      b = branch_eigenvector(la, field, branch);

    const Matrix2c lb = reduce_on_bob(obs, b);
    if (lb.cwiseAbs().maxCoeff() < zero_op)
      c.pair.degenerate = true;
    else
      a = branch_eigenvector(lb, field, branch);

    const double g_next = expectation(obs, a, b);
    const bool settled = std::abs(g_next - g) <= opts.tol * scale;
    g = g_next;
    if (settled || c.pair.degenerate) {
      c.converged = true;
      break;
    }
  }

  c.pair.alice = local_state_from_ket(a);
  c.pair.bob = local_state_from_ket(b);
  if (field == Field::Real) {
    c.pair.alice.bloch[idx(Pauli::Y)] = 0.0;
    c.pair.bob.bloch[idx(Pauli::Y)] = 0.0;
  }
  c.pair.value = g;

  if (!c.pair.degenerate) {
    // Alternation is a power iteration and slows down when two local
    // directions are nearly degenerate; finish with Newton.
    Eigen::Vector3d na = c.pair.alice.bloch.tail<3>();
    Eigen::Vector3d nb = c.pair.bob.bloch.tail<3>();
    const double before = separability_residual(obs, c.pair);
    if (newton_polish(form, field, na, nb)) {
      SeparabilityEigenpair polished = c.pair;
      polished.alice = state_from_bloch3(na);
      polished.bob = state_from_bloch3(nb);
      polished.value = polished.alice.bloch.dot(form * polished.bob.bloch);
      if (separability_residual(obs, polished) < before) c.pair = polished;
    }
  }

  c.converged = separability_residual(obs, c.pair) < 1e-9 * scale;
  return c;
}

bool same_point(const SeparabilityEigenpair& x, const SeparabilityEigenpair& y, double tol) {
  if (std::abs(x.value - y.value) > tol) return false;
  if (x.degenerate || y.degenerate) return x.degenerate == y.degenerate;
  return (x.alice.bloch - y.alice.bloch).cwiseAbs().maxCoeff() <= tol &&
         (x.bob.bloch - y.bob.bloch).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

NumericSpectrum numeric_separability_eigs(const Matrix4& obs, Field field,
                                          const SolverOptions& opts) {
  if (opts.n_starts < 1) throw InvalidArgument("numeric_separability_eigs: n_starts must be >= 1");
  if (!obs.allFinite() || (obs - obs.transpose()).cwiseAbs().maxCoeff() > kDefaultTol)
    throw InvalidArgument("numeric_separability_eigs: observable must be real symmetric");

  const Matrix4 form = bloch_form(obs);
  NumericSpectrum out;
  for (int s = 0; s < opts.n_starts; ++s) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(s));
    const Vector2c a0 = random_ket(rng, field);
    const Vector2c b0 = random_ket(rng, field);
    for (Branch branch : {Branch::Max, Branch::Min}) {
      Candidate c = run_branch(obs, form, field, branch, a0, b0, opts);
      if (!c.converged) {
        ++out.unconverged_starts;
        continue;
      }
      const bool seen = std::any_of(out.pairs.begin(), out.pairs.end(), [&](const auto& p) {
        return same_point(p, c.pair, opts.dedup_tol);
      });
      if (!seen) out.pairs.push_back(std::move(c.pair));
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const auto& x, const auto& y) { return x.value < y.value; });
  return out;
}

Bounds bounds(const Matrix4& obs, Field field, const SolverOptions& opts) {
  const NumericSpectrum spec = numeric_separability_eigs(obs, field, opts);
  if (spec.pairs.empty())
    throw NonConvergence("bounds: no separability eigenpair converged");
  return {spec.pairs.front().value, spec.pairs.back().value, spec.unconverged_starts};
}

// ---- evaluation -----------------------------------------------------------

WitnessVerdict evaluate_witness(const CorrelationMatrix& g, const DiagObservable& obs,
                                const std::optional<Matrix4>& sigma_gamma, double k,
                                double tol) {
  if (!(k > 0.0)) throw InvalidArgument("evaluate_witness: k must be positive");
  WitnessVerdict w;
  double var = 0.0;
  for (Pauli p : {Pauli::Z, Pauli::X, Pauli::Y}) {
    const double l = obs.coefficient(p);
    w.expectation += l * g(p, p);
    if (sigma_gamma) {
      const double s = l * (*sigma_gamma)(idx(p), idx(p));
      var += s * s;
    }
  }
  w.sigma = std::sqrt(var);
  w.real_bounds = bounds(obs, Field::Real);
  w.complex_bounds = bounds(obs, Field::Complex);

  const double margin = std::max(k * w.sigma, tol);
  auto excess = [&](const Bounds& b) {
    return std::max(w.expectation - b.max, b.min - w.expectation);
  };
  const double ex_r = excess(w.real_bounds);
  const double ex_c = excess(w.complex_bounds);
  w.r_entangled = ex_r > margin;
  w.c_entangled = ex_c > margin;

  double nearest = std::numeric_limits<double>::infinity();
  if (ex_r > 0.0) nearest = std::min(nearest, ex_r);
  if (ex_c > 0.0) nearest = std::min(nearest, ex_c);
  if (std::isinf(nearest))
    w.significance = 0.0;
  else
    w.significance = w.sigma > 0.0 ? nearest / w.sigma : std::numeric_limits<double>::infinity();
  return w;
}

}  // namespace rebit
