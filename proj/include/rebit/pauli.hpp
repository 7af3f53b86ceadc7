#pragma once

// Pauli-basis algebra for two two-level systems.
//
// Conventions used everywhere in the library:
//  * Pauli indices are ordered (0, z, x, y).
//  * A two-qubit state is represented canonically by its correlation matrix
//    Gamma[mu][nu] = <sigma_mu (x) sigma_nu>, with Alice as the row index.
//  * Single-qubit kets are written in the basis (|1>, |0>) = (|H>, |V>), so
//    the Pauli matrices take their textbook form. Two-qubit density matrices
//    use the Kronecker order Alice (x) Bob, i.e. rows/columns
//    (|11>, |10>, |01>, |00>) = (HH, HV, VH, VV).

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace rebit {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2d;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4d;
using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;
using Vector4 = Eigen::Vector4d;
using Vector4c = Eigen::Vector4cd;

/// Numerical precision used for physicality and normalization checks.
inline constexpr double kDefaultTol = 1e-9;

/// Threshold above which an imaginary part of a Pauli expectation is treated
/// as a caller error rather than round-off.
inline constexpr double kImagResidueTol = 1e-10;

enum class Pauli : int { I = 0, Z = 1, X = 2, Y = 3 };

inline constexpr std::array<Pauli, 4> kPaulis = {Pauli::I, Pauli::Z, Pauli::X, Pauli::Y};

constexpr int idx(Pauli p) { return static_cast<int>(p); }
char pauli_char(Pauli p);
Pauli parse_basis(char c);  // accepts z, x, y

enum class Field { Real, Complex };

std::string_view field_name(Field f);
Field parse_field(std::string_view s);

enum class Polarization { H, V, D, A, R, L };

inline constexpr std::array<Polarization, 4> kRebitAlphabet = {Polarization::H, Polarization::V,
                                                               Polarization::D, Polarization::A};
inline constexpr std::array<Polarization, 6> kQubitAlphabet = {
    Polarization::H, Polarization::V, Polarization::D,
    Polarization::A, Polarization::R, Polarization::L};

char polarization_char(Polarization p);
Polarization parse_polarization(char c);

/// sigma_0, sigma_z, sigma_x, sigma_y in the (|1>, |0>) basis.
const Matrix2c& pauli_matrix(Pauli p);

/// sigma_mu (x) sigma_nu.
Matrix4c pauli_product(Pauli mu, Pauli nu);

/// 4x4 real matrix of Pauli correlations. Entry [0,0] is the normalization;
/// it equals one for states but may differ for unnormalized intermediate
/// forms (e.g. the output of a local filter).
class CorrelationMatrix {
 public:
  /// The maximally mixed state diag(1,0,0,0).
  CorrelationMatrix();
  explicit CorrelationMatrix(const Matrix4& gamma);

  /// Validates normalization and the entry range.
  static CorrelationMatrix checked(const Matrix4& gamma, double tol = kDefaultTol);

  double operator()(Pauli mu, Pauli nu) const { return gamma_(idx(mu), idx(nu)); }
  double operator()(int mu, int nu) const { return gamma_(mu, nu); }
  const Matrix4& matrix() const { return gamma_; }

  /// Copy scaled so that entry [0,0] equals one.
  CorrelationMatrix normalized() const;

  bool operator==(const CorrelationMatrix& other) const { return gamma_ == other.gamma_; }

 private:
  Matrix4 gamma_;
};

/// 4x4 Hermitian unit-trace matrix in the (HH, HV, VH, VV) basis.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix4c& rho) : rho_(rho) {}

  /// Validates hermiticity and unit trace.
  static DensityMatrix checked(const Matrix4c& rho, double tol = kDefaultTol);

  const Matrix4c& matrix() const { return rho_; }
  Eigen::Vector4d eigenvalues() const;

 private:
  Matrix4c rho_;
};

/// Single-subsystem state as the 4-vector (<sigma_0>, <sigma_z>, <sigma_x>, <sigma_y>).
struct LocalState {
  Vector4 bloch = Vector4(1.0, 0.0, 0.0, 0.0);
  std::optional<Polarization> label;

  double purity_defect() const;
  bool is_real() const { return bloch[idx(Pauli::Y)] == 0.0; }
};

// ---- conversions ----------------------------------------------------------

/// rho = (1/4) sum Gamma[mu,nu] sigma_mu (x) sigma_nu. Throws if
/// |Gamma[0,0] - 1| > tol.
DensityMatrix density_from_correlation(const CorrelationMatrix& g, double tol = kDefaultTol);

/// Gamma[mu,nu] = tr(rho sigma_mu (x) sigma_nu). Throws on non-Hermitian
/// input, trace deviation beyond tol, or an imaginary residue above 1e-10.
CorrelationMatrix correlation_from_density(const DensityMatrix& rho, double tol = kDefaultTol);

/// Correlation matrix of the pure state |psi><psi| (psi need not be normalized).
CorrelationMatrix correlation_from_ket(const Vector4c& psi);

/// Product state Gamma = a b^T.
CorrelationMatrix product_state(const LocalState& a, const LocalState& b);

/// Ket of a polarization state in the (|1>, |0>) basis.
Vector2c polarization_ket(Polarization p);

LocalState polarization_state(Polarization p);

/// Bloch 4-vector of a normalized single-qubit ket.
LocalState local_state_from_ket(const Vector2c& ket);

/// Normalized ket with the given Bloch 4-vector (must be pure).
Vector2c ket_from_local_state(const LocalState& s);

// ---- state families -------------------------------------------------------

/// diag(1, 0, 0, 2q - 1).
CorrelationMatrix cfr_state(double q);

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

Vector4c bell_ket(BellState which);
CorrelationMatrix bell_state(BellState which);

/// Scales every entry except [0,0] by the visibility v in [0, 1].
CorrelationMatrix depolarize(const CorrelationMatrix& g, double visibility);

// ---- geometry -------------------------------------------------------------

double hs_inner(const CorrelationMatrix& a, const CorrelationMatrix& b);
double hs_distance(const CorrelationMatrix& a, const CorrelationMatrix& b);

/// Pearson-type correlation coefficient tr(rho rho') / sqrt(tr rho^2 tr rho'^2).
double similarity(const CorrelationMatrix& a, const CorrelationMatrix& b);

/// Correlation matrix of Re(rho): zeroes y-row and y-column except [y,y].
CorrelationMatrix real_projection(const CorrelationMatrix& g);

/// Smallest eigenvalue of the density matrix built from g (g may be
/// unnormalized; no normalization check is performed).
double min_eigenvalue(const CorrelationMatrix& g);

bool is_physical(const CorrelationMatrix& g, double tol = kDefaultTol);

}  // namespace rebit
