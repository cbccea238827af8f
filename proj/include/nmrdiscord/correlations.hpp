#pragma once

// Entanglement and discord measures for two-qubit states. Subsystem A is the
// first tensor factor throughout; discord is measured on A.

#include <optional>

#include <Eigen/Dense>

#include "nmrdiscord/qcore.hpp"

namespace nmrd {

// rho = 1/4 (I⊗I + Σ x_i σ_i⊗I + Σ y_j I⊗σ_j + Σ T_ij σ_i⊗σ_j)
struct BlochDecomposition {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  Eigen::Matrix3d T = Eigen::Matrix3d::Zero();
};

struct CorrelationReport {
  double concurrence = 0.0;
  double pseudo_concurrence = 0.0;
  double geometric_discord = 0.0;
  std::optional<double> entropic_discord;
  double min_eigenvalue = 0.0;
};

// (σy⊗σy) conj(rho) (σy⊗σy)
Matrix4c spin_flip(const TwoQubitDensityMatrix& rho);

// λ1 - λ2 - λ3 - λ4 with λ the descending square roots of the eigenvalues of
// rho·spin_flip(rho). Range [-1, 1].
double pseudo_concurrence(const TwoQubitDensityMatrix& rho);
// max(0, pseudo_concurrence).
double concurrence(const TwoQubitDensityMatrix& rho);

// Expectation-value route: x_i = tr[rho σ_i⊗I], y_j = tr[rho I⊗σ_j],
// T_ij = tr[rho σ_i⊗σ_j].
BlochDecomposition bloch_from_traces(const TwoQubitDensityMatrix& rho);
// Closed-form route written directly in terms of matrix elements.
BlochDecomposition bloch_from_elements(const TwoQubitDensityMatrix& rho);
// Largest elementwise difference between two decompositions.
double max_difference(const BlochDecomposition& a, const BlochDecomposition& b);

// Runs both routes and returns the trace route. Throws ConsistencyError if
// they disagree by more than 1e-10.
BlochDecomposition bloch_decompose(const TwoQubitDensityMatrix& rho);

// Rebuilds the 4x4 matrix from its Bloch parameters.
Matrix4c bloch_reconstruct(const BlochDecomposition& b);

// 1/4 (|x|^2 + ||T||_F^2 - λmax(x xᵗ + T Tᵗ)), clamped at 0.
double geometric_discord(const BlochDecomposition& b);
double geometric_discord(const TwoQubitDensityMatrix& rho);

struct EntropicDiscordOptions {
  int theta_points = 64;
  int phi_points = 128;
  // Stop refining once the objective moves by less than this.
  double tolerance = 1e-9;
  int max_iterations = 2000;
};

// von Neumann entropy in bits, 0 log 0 = 0.
double entropy_bits(const ComplexMatrix& rho);

// Average conditional entropy of B after projecting A onto the basis
// {cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>, its orthogonal complement}.
double measured_conditional_entropy(const TwoQubitDensityMatrix& rho, double theta, double phi);

// Discord with respect to projective measurements on A: grid search over the
// Bloch sphere followed by Nelder-Mead refinement. Deterministic.
double entropic_discord(const TwoQubitDensityMatrix& rho, const EntropicDiscordOptions& options = {});

// p |α0><α0|⊗rho1 + (1-p) |α1><α1|⊗rho2, with |α0>, |α1> the orthonormal
// basis at Bloch angles (theta, phi). Zero discord by construction.
TwoQubitDensityMatrix make_classical_state(double p, double theta, double phi, const Matrix2c& rho1,
                                           const Matrix2c& rho2);

CorrelationReport analyze(const TwoQubitDensityMatrix& rho, bool with_entropic = false,
                          const EntropicDiscordOptions& options = {});

}  // namespace nmrd
