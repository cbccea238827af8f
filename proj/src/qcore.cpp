#include "nmrdiscord/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "nmrdiscord/errors.hpp"

namespace nmrd {

namespace {

std::string shape(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

}  // namespace

Matrix2c pauli(Axis axis) {
  Matrix2c s;
  switch (axis) {
    case Axis::x:
      s << 0, 1, 1, 0;
      break;
    case Axis::y:
      s << 0, -kI, kI, 0;
      break;
    case Axis::z:
      s << 1, 0, 0, -1;
      break;
  }
  return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rb = b.rows(), cb = b.cols();
  ComplexMatrix out(a.rows() * rb, a.cols() * cb);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("expm: matrix must be square, got " + shape(m));
  }
  if (m.size() == 0) return m;
  return m.exp();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("hermiticity check: matrix must be square, got " + shape(m));
  }
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> herm_eigvals(const ComplexMatrix& m) {
  const double scale = m.size() == 0 ? 1.0 : std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(m);
  if (defect > 1e-10 * scale) {
    std::ostringstream os;
    os << "herm_eigvals: matrix is not Hermitian (max |m - m^H| = " << defect << ")";
    throw ValidationError(os.str());
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

TwoQubitDensityMatrix validate_density(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw DimensionError("density matrix must be 4x4, got " + shape(m));
  }
  const double defect = hermiticity_defect(m);
  if (!(defect <= tol.hermiticity)) {
    std::ostringstream os;
    os << "density matrix is not Hermitian: max |rho - rho^H| = " << defect;
    throw ValidationError(os.str());
  }
  const cplx tr = m.trace();
  const double trace_err = std::abs(tr - 1.0);
  if (!(trace_err <= tol.trace)) {
    std::ostringstream os;
    os << "density matrix trace deviates from 1: |tr - 1| = " << trace_err;
    throw ValidationError(os.str());
  }
  Matrix4c h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  const bool negative = min_eig < -tol.positivity;
  if (negative && !tol.allow_negative) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite: min eigenvalue = " << min_eig;
    throw ValidationError(os.str());
  }
  return TwoQubitDensityMatrix(std::move(h), min_eig, negative);
}

PureState::PureState(const Vector4c& amplitudes) : psi_(amplitudes) {
  const double err = std::abs(psi_.squaredNorm() - 1.0);
  if (!(err <= 1e-12)) {
    std::ostringstream os;
    os << "pure state is not normalized: | ||psi||^2 - 1 | = " << err;
    throw ValidationError(os.str());
  }
}

PureState PureState::normalized(const Vector4c& amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("cannot normalize a zero or non-finite state vector");
  }
  return PureState(amplitudes / n);
}

TwoQubitDensityMatrix PureState::density() const {
  return validate_density(psi_ * psi_.adjoint());
}

Matrix2c partial_trace_B(const TwoQubitDensityMatrix& rho) {
  const Matrix4c& m = rho.matrix();
  Matrix2c out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
    }
  }
  return out;
}

Matrix2c partial_trace_A(const TwoQubitDensityMatrix& rho) {
  const Matrix4c& m = rho.matrix();
  Matrix2c out;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      out(k, l) = m(k, l) + m(2 + k, 2 + l);
    }
  }
  return out;
}

namespace states {

TwoQubitDensityMatrix ket00() {
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = 1.0;
  return validate_density(m);
}

TwoQubitDensityMatrix bell_phi_plus() {
  Vector4c psi(1.0, 0.0, 0.0, 1.0);
  return PureState::normalized(psi).density();
}

TwoQubitDensityMatrix maximally_mixed() {
  return validate_density(Matrix4c::Identity() / 4.0);
}

}  // namespace states

}  // namespace nmrd
