#pragma once

// Test-only generators and oracles. Nothing here calls into the code paths it
// is used to check.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "nmrdiscord/nmr_model.hpp"
#include "nmrdiscord/qcore.hpp"

namespace testing_support {

using nmrd::cplx;
using nmrd::Matrix2c;
using nmrd::Matrix4c;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline cplx gaussian_complex() {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng()), n(rng())};
}

inline Eigen::MatrixXcd random_matrix(int n, double scale = 1.0) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = scale * gaussian_complex();
  return m;
}

inline Eigen::Vector4cd random_pure_vector() {
  Eigen::Vector4cd v;
  for (int i = 0; i < 4; ++i) v(i) = gaussian_complex();
  return v / v.norm();
}

// Mixture of k random pure states with random weights.
inline nmrd::TwoQubitDensityMatrix random_density(int k = 0) {
  if (k <= 0) k = 1 + static_cast<int>(rng()() % 4);
  Matrix4c m = Matrix4c::Zero();
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = uniform(0.0, 1.0);
    const Eigen::Vector4cd v = random_pure_vector();
    m += w * v * v.adjoint();
    total += w;
  }
  m /= total;
  m = 0.5 * (m + m.adjoint()).eval();
  return nmrd::validate_density(m);
}

inline Matrix2c random_qubit_density() {
  Eigen::Vector2cd a(gaussian_complex(), gaussian_complex());
  Eigen::Vector2cd b(gaussian_complex(), gaussian_complex());
  const double w = uniform(0.0, 1.0);
  Matrix2c m = w * a * a.adjoint() / a.squaredNorm() + (1 - w) * b * b.adjoint() / b.squaredNorm();
  return 0.5 * (m + m.adjoint());
}

// Haar-ish random 2x2 unitary from QR of a Gaussian matrix.
inline Matrix2c random_unitary2() {
  Eigen::MatrixXcd g = random_matrix(2);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ();
}

// Truncated Taylor series, independent of the Padé implementation.
inline Eigen::MatrixXcd taylor_expm(const Eigen::MatrixXcd& m, int terms = 30) {
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  Eigen::MatrixXcd term = result;
  for (int k = 1; k <= terms; ++k) {
    term = term * m / static_cast<double>(k);
    result += term;
  }
  return result;
}

inline nmrd::NmrParameters random_parameters(double magnitude) {
  nmrd::NmrParameters p;
  p.a = uniform(0.1, 1.0) * magnitude;
  p.b = uniform(-1.0, 1.0) * magnitude;
  p.c = uniform(-1.0, 1.0) * magnitude;
  p.d = uniform(0.0, 1.0) * magnitude;
  p.e = uniform(0.0, 1.0) * magnitude;
  p.omega = uniform(0.0, 1.0) * magnitude;
  return p;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing_support
