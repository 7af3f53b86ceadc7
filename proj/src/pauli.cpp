#include "rebit/pauli.hpp"

#include <cmath>
#include <string>

#include "rebit/errors.hpp"

namespace rebit {

namespace {

constexpr Complex kI{0.0, 1.0};

std::array<Matrix2c, 4> make_paulis() {
  std::array<Matrix2c, 4> s;
  s[0] << 1, 0, 0, 1;
  s[1] << 1, 0, 0, -1;
  s[2] << 0, 1, 1, 0;
  s[3] << 0, -kI, kI, 0;
  return s;
}

const std::array<Matrix2c, 4>& paulis() {
  static const std::array<Matrix2c, 4> s = make_paulis();
  return s;
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix4c density_matrix_unchecked(const Matrix4& gamma) {
  Matrix4c rho = Matrix4c::Zero();
  for (auto mu : kPaulis)
    for (auto nu : kPaulis) {
      const double c = gamma(idx(mu), idx(nu));
      if (c != 0.0) rho += c * pauli_product(mu, nu);
    }
  return rho / 4.0;
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return '0';
    case Pauli::Z: return 'z';
    case Pauli::X: return 'x';
    case Pauli::Y: return 'y';
  }
  return '?';
}

Pauli parse_basis(char c) {
  switch (c) {
    case 'z': case 'Z': return Pauli::Z;
    case 'x': case 'X': return Pauli::X;
    case 'y': case 'Y': return Pauli::Y;
    default: break;
  }
  throw ParseError(std::string("unknown measurement basis '") + c + "'");
}

std::string_view field_name(Field f) { return f == Field::Real ? "real" : "complex"; }

Field parse_field(std::string_view s) {
  if (s == "real" || s == "rebit" || s == "R") return Field::Real;
  if (s == "complex" || s == "qubit" || s == "C") return Field::Complex;
  throw ParseError("unknown number field '" + std::string(s) + "'");
}

char polarization_char(Polarization p) {
  static constexpr char names[] = {'H', 'V', 'D', 'A', 'R', 'L'};
  return names[static_cast<int>(p)];
}

Polarization parse_polarization(char c) {
  switch (c) {
    case 'H': return Polarization::H;
    case 'V': return Polarization::V;
    case 'D': return Polarization::D;
    case 'A': return Polarization::A;
    case 'R': return Polarization::R;
    case 'L': return Polarization::L;
    default: break;
  }
  throw ParseError(std::string("unknown polarization label '") + c + "'");
}

const Matrix2c& pauli_matrix(Pauli p) { return paulis()[idx(p)]; }

Matrix4c pauli_product(Pauli mu, Pauli nu) { return kron(pauli_matrix(mu), pauli_matrix(nu)); }

// ---- CorrelationMatrix / DensityMatrix -------------------------------------

CorrelationMatrix::CorrelationMatrix() : gamma_(Matrix4::Zero()) { gamma_(0, 0) = 1.0; }

CorrelationMatrix::CorrelationMatrix(const Matrix4& gamma) : gamma_(gamma) {}

CorrelationMatrix CorrelationMatrix::checked(const Matrix4& gamma, double tol) {
  if (!gamma.allFinite()) throw InvalidArgument("correlation matrix has non-finite entries");
  if (std::abs(gamma(0, 0) - 1.0) > tol)
    throw InvalidArgument("correlation matrix is not normalized: Gamma[0,0] = " +
                          std::to_string(gamma(0, 0)));
  if (gamma.cwiseAbs().maxCoeff() > 1.0 + tol)
    throw InvalidArgument("correlation matrix entry outside [-1, 1]");
  return CorrelationMatrix(gamma);
}

CorrelationMatrix CorrelationMatrix::normalized() const {
  if (!(std::abs(gamma_(0, 0)) > 0.0))
    throw InvalidArgument("cannot normalize a correlation matrix with Gamma[0,0] = 0");
  return CorrelationMatrix(gamma_ / gamma_(0, 0));
}

DensityMatrix DensityMatrix::checked(const Matrix4c& rho, double tol) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw InvalidArgument("density matrix trace is not one");
  return DensityMatrix(rho);
}

Eigen::Vector4d DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double LocalState::purity_defect() const {
  return bloch.tail<3>().squaredNorm() - bloch[0] * bloch[0];
}

// ---- conversions ----------------------------------------------------------

DensityMatrix density_from_correlation(const CorrelationMatrix& g, double tol) {
  if (std::abs(g(0, 0) - 1.0) > tol)
    throw InvalidArgument("density_from_correlation: Gamma[0,0] = " + std::to_string(g(0, 0)) +
                          " is not 1");
  return DensityMatrix(density_matrix_unchecked(g.matrix()));
}

CorrelationMatrix correlation_from_density(const DensityMatrix& rho, double tol) {
  const Matrix4c& m = rho.matrix();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw InvalidArgument("correlation_from_density: input is not Hermitian");
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > tol)
    throw InvalidArgument("correlation_from_density: trace deviates from one by " +
                          std::to_string(std::abs(tr - 1.0)));
  Matrix4 gamma;
  for (auto mu : kPaulis)
    for (auto nu : kPaulis) {
      const Complex v = (m * pauli_product(mu, nu)).trace();
      if (std::abs(v.imag()) > kImagResidueTol)
        throw InvalidArgument(std::string("correlation_from_density: imaginary residue in <") +
                              pauli_char(mu) + pauli_char(nu) + ">");
      gamma(idx(mu), idx(nu)) = v.real();
    }
  return CorrelationMatrix(gamma);
}

CorrelationMatrix correlation_from_ket(const Vector4c& psi) {
  const Vector4c n = psi.normalized();
  Matrix4 gamma;
  for (auto mu : kPaulis)
    for (auto nu : kPaulis)
      gamma(idx(mu), idx(nu)) = n.dot(pauli_product(mu, nu) * n).real();
  return CorrelationMatrix(gamma);
}

CorrelationMatrix product_state(const LocalState& a, const LocalState& b) {
  return CorrelationMatrix(a.bloch * b.bloch.transpose());
}

Vector2c polarization_ket(Polarization p) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (p) {
    case Polarization::H: return Vector2c(1.0, 0.0);
    case Polarization::V: return Vector2c(0.0, 1.0);
    case Polarization::D: return Vector2c(s, s);
    case Polarization::A: return Vector2c(-s, s);
    case Polarization::R: return Vector2c(s, s * kI);
    case Polarization::L: return Vector2c(s, -s * kI);
  }
  throw InvalidArgument("unknown polarization");
}

LocalState polarization_state(Polarization p) {
  LocalState s;
  s.label = p;
  switch (p) {
    case Polarization::H: s.bloch = Vector4(1, 1, 0, 0); break;
    case Polarization::V: s.bloch = Vector4(1, -1, 0, 0); break;
    case Polarization::D: s.bloch = Vector4(1, 0, 1, 0); break;
    case Polarization::A: s.bloch = Vector4(1, 0, -1, 0); break;
    case Polarization::R: s.bloch = Vector4(1, 0, 0, 1); break;
    case Polarization::L: s.bloch = Vector4(1, 0, 0, -1); break;
  }
  return s;
}

LocalState local_state_from_ket(const Vector2c& ket) {
  const Vector2c n = ket.normalized();
  LocalState s;
  for (auto mu : kPaulis) s.bloch[idx(mu)] = n.dot(pauli_matrix(mu) * n).real();
  s.bloch[0] = 1.0;
  return s;
}

Vector2c ket_from_local_state(const LocalState& s) {
  const Eigen::Vector3d n = s.bloch.tail<3>() / s.bloch[0];
  const double nz = std::clamp(n[0], -1.0, 1.0);
  const double c = std::sqrt((1.0 + nz) / 2.0);
  const double sn = std::sqrt((1.0 - nz) / 2.0);
  const double rho = std::hypot(n[1], n[2]);
  if (rho == 0.0) return Vector2c(c, sn);
  // Rebit states keep an exactly real amplitude.
  if (n[2] == 0.0) return Vector2c(c, std::copysign(sn, n[1]));
  return Vector2c(c, sn * Complex(n[1], n[2]) / rho);
}

// ---- state families -------------------------------------------------------

CorrelationMatrix cfr_state(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("cfr_state: q must lie in [0, 1]");
  Matrix4 gamma = Matrix4::Zero();
  gamma(0, 0) = 1.0;
  gamma(3, 3) = 2.0 * q - 1.0;
  return CorrelationMatrix(gamma);
}

Vector4c bell_ket(BellState which) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (which) {
    case BellState::PhiPlus: return Vector4c(s, 0, 0, s);
    case BellState::PhiMinus: return Vector4c(s, 0, 0, -s);
    case BellState::PsiPlus: return Vector4c(0, s, s, 0);
    case BellState::PsiMinus: return Vector4c(0, s, -s, 0);
  }
  throw InvalidArgument("unknown Bell state");
}

CorrelationMatrix bell_state(BellState which) { return correlation_from_ket(bell_ket(which)); }

CorrelationMatrix depolarize(const CorrelationMatrix& g, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw InvalidArgument("depolarize: visibility must lie in [0, 1]");
  Matrix4 m = g.matrix() * visibility;
  m(0, 0) = g(0, 0);
  return CorrelationMatrix(m);
}

// ---- geometry -------------------------------------------------------------

double hs_inner(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  return a.matrix().cwiseProduct(b.matrix()).sum() / 4.0;
}

double hs_distance(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  const Matrix4 d = a.matrix() - b.matrix();
  return std::sqrt(d.squaredNorm() / 4.0);
}

double similarity(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  const double aa = hs_inner(a, a);
  const double bb = hs_inner(b, b);
  if (aa < kDefaultTol || bb < kDefaultTol)
    throw InvalidArgument("similarity: state with vanishing norm");
  return hs_inner(a, b) / std::sqrt(aa * bb);
}

CorrelationMatrix real_projection(const CorrelationMatrix& g) {
  Matrix4 m = g.matrix();
  const int y = idx(Pauli::Y);
  for (int k = 0; k < 3; ++k) {
    m(y, k) = 0.0;
    m(k, y) = 0.0;
  }
  return CorrelationMatrix(m);
}

double min_eigenvalue(const CorrelationMatrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(density_matrix_unchecked(g.matrix()),
                                             Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

bool is_physical(const CorrelationMatrix& g, double tol) { return min_eigenvalue(g) >= -tol; }

}  // namespace rebit
