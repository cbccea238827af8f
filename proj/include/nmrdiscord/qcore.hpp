#pragma once

// Dense complex linear algebra for two-qubit problems: Pauli matrices,
// Kronecker products, Hermitian spectra, the matrix exponential and
// validated density matrices.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace nmrd {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

using ComplexMatrix = Eigen::MatrixXcd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// Absolute tolerances applied when validating density matrices.
struct Tolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double positivity = 1e-8;
  // Relaxation output is not guaranteed positive: with this set, an
  // eigenvalue below -positivity only raises positivity_warning().
  bool allow_negative = false;
};

enum class Axis { x, y, z };

Matrix2c pauli(Axis axis);

// (a⊗b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l]
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Matrix exponential by Padé scaling-and-squaring; safe for non-normal input.
ComplexMatrix expm(const ComplexMatrix& m);

// Max-abs elementwise distance between m and m†.
double hermiticity_defect(const ComplexMatrix& m);

// Eigenvalues of a Hermitian matrix, descending.  Throws ValidationError when
// m is not Hermitian within 1e-10 (relative to its largest entry, floor 1).
std::vector<double> herm_eigvals(const ComplexMatrix& m);

class TwoQubitDensityMatrix {
 public:
  const Matrix4c& matrix() const { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }

  // Smallest eigenvalue of the stored matrix.
  double min_eigenvalue() const { return min_eig_; }
  // True when min_eigenvalue() < -positivity tolerance (only possible when
  // validated with allow_negative).
  bool positivity_warning() const { return positivity_warning_; }

 private:
  friend TwoQubitDensityMatrix validate_density(const ComplexMatrix&, const Tolerances&);
  TwoQubitDensityMatrix(Matrix4c m, double min_eig, bool warn)
      : m_(std::move(m)), min_eig_(min_eig), positivity_warning_(warn) {}

  Matrix4c m_;
  double min_eig_;
  bool positivity_warning_;
};

// Checks shape, Hermiticity, unit trace and positivity; the stored matrix is
// the exact Hermitian part of the input.
TwoQubitDensityMatrix validate_density(const ComplexMatrix& m, const Tolerances& tol = {});

class PureState {
 public:
  // Throws ValidationError unless | ||psi||^2 - 1 | <= 1e-12.
  explicit PureState(const Vector4c& amplitudes);
  // Rescales to unit norm first.
  static PureState normalized(const Vector4c& amplitudes);

  const Vector4c& amplitudes() const { return psi_; }
  TwoQubitDensityMatrix density() const;

 private:
  Vector4c psi_;
};

// Reduced state of the first qubit.
Matrix2c partial_trace_B(const TwoQubitDensityMatrix& rho);
// Reduced state of the second qubit.
Matrix2c partial_trace_A(const TwoQubitDensityMatrix& rho);

namespace states {
TwoQubitDensityMatrix ket00();
TwoQubitDensityMatrix bell_phi_plus();
TwoQubitDensityMatrix maximally_mixed();
}  // namespace states

}  // namespace nmrd
