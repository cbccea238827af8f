#pragma once

// Liquid-state two-spin NMR Hamiltonians and closed (relaxation-free)
// evolution. Every Hamiltonian here is stored divided by ħ, in rad/s.

#include "nmrdiscord/qcore.hpp"

namespace nmrd {

// Frequencies in rad/s:
//   a = (ω1 + ω2)/2, b = (ω1 - ω2)/2, c = J, d = g1/2, e = g2/2,
//   omega = drive frequency.
struct NmrParameters {
  double a = 3e8;
  double b = 1e4;
  double c = 3e2;
  double d = 5e4;
  double e = 5e4;
  double omega = 3e8;

  static NmrParameters defaults() { return {}; }
  // Build from Larmor frequencies, coupling and drive strengths.
  static NmrParameters from_lab(double omega1, double omega2, double J, double g1, double g2,
                                double omega);

  double omega1() const { return a + b; }
  double omega2() const { return a - b; }

  // Throws ValidationError unless all fields are finite and d, e >= 0.
  // Set require_positive_a = false for the degenerate zero-field cases.
  void validate(bool require_positive_a = true) const;

  // Every frequency multiplied by k (k = 2π turns cycles/s into rad/s).
  NmrParameters scaled(double k) const;
};

// H_sys = -(ω1/2) σz⊗I - (ω2/2) I⊗σz + J σz⊗σz
Matrix4c h_sys(const NmrParameters& p);

// Lab-frame drive at time t.
Matrix4c h_rf(const NmrParameters& p, double t);

// H_sys + H_rf(t).
Matrix4c h_lab(const NmrParameters& p, double t);

// Rotating-frame Hamiltonian written out element by element.
Matrix4c h_tilde_matrix_form(const NmrParameters& p);
// Rotating-frame Hamiltonian assembled from Pauli operators.
Matrix4c h_tilde_operator_form(const NmrParameters& p);
// Both forms; throws ConsistencyError if they differ by more than 1e-12
// relative to the largest entry.
Matrix4c h_tilde(const NmrParameters& p);

// exp[iωt/2 (σz⊗I + I⊗σz)] = diag(e^{iωt}, 1, 1, e^{-iωt})
Matrix4c rotating_phase(double omega, double t);

// Closed-system evolution at fixed parameters. The rotating-frame Hamiltonian
// is diagonalized once, so propagators at many times are cheap and exactly
// unitary up to round-off.
class ClosedEvolution {
 public:
  explicit ClosedEvolution(const NmrParameters& p);

  const NmrParameters& parameters() const { return p_; }
  const Matrix4c& hamiltonian() const { return h_; }

  // exp(-i t H~) in the rotating frame.
  Matrix4c rotating_frame_propagator(double t) const;
  // U(t) = rotating_phase(ω, t) · exp(-i t H~).
  Matrix4c propagator(double t) const;
  TwoQubitDensityMatrix evolve(const TwoQubitDensityMatrix& rho0, double t) const;

 private:
  NmrParameters p_;
  Matrix4c h_;
  Eigen::Vector4d energies_;
  Matrix4c vectors_;
};

Matrix4c propagator(const NmrParameters& p, double t);

// ρ(t) = U(t) ρ0 U†(t), revalidated.
TwoQubitDensityMatrix evolve(const TwoQubitDensityMatrix& rho0, const NmrParameters& p, double t);

// Smallest step count the lab-frame oracle accepts for horizon t:
// ceil(20 t (a + d + e) / 2π), at least 1.
long long lab_frame_min_steps(const NmrParameters& p, double t);

// Integrates i dψ/dt = H(t) ψ in the lab frame as a time-ordered product of
// short-step exponentials, each using H at the step midpoint. Second order.
// Test oracle for the rotating-frame propagator; throws ValidationError if
// steps < lab_frame_min_steps(p, t).
PureState lab_frame_evolve_oracle(const PureState& psi0, const NmrParameters& p, double t, long long steps);

}  // namespace nmrd
