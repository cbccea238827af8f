#pragma once

// Phenomenological T1/T2 relaxation in the rotating frame. The density
// matrix is flattened row-major into a 16-vector and obeys
//
//   dσ/dt = A σ + f(t),
//
// where A carries the coherent rotating-frame dynamics and the 1/T decay,
// and f(t) pumps the state back toward an equilibrium matrix.

#include <optional>
#include <span>
#include <vector>

#include "nmrdiscord/nmr_model.hpp"
#include "nmrdiscord/qcore.hpp"

namespace nmrd {

using Vector16c = Eigen::Matrix<cplx, 16, 1>;
using Matrix16c = Eigen::Matrix<cplx, 16, 16>;

struct RelaxationParameters {
  // Seconds. std::numeric_limits<double>::infinity() disables the channel.
  double T1 = 20.0;
  double T2 = 1.0;
  // Target of the relaxation; when empty the initial state is used.
  std::optional<TwoQubitDensityMatrix> equilibrium;

  static RelaxationParameters none();

  // Throws ValidationError unless T1 > 0 and T2 > 0 (infinity allowed).
  void validate() const;
  double rate1() const;
  double rate2() const;
  // 1/T1 on the four population slots, 1/T2 on the twelve coherences.
  Eigen::Matrix<double, 16, 1> rates() const;
};

// Row-major flattening: v[4*i + j] = σ(i, j).
struct VectorizedState {
  Vector16c v = Vector16c::Zero();

  static VectorizedState from_matrix(const Matrix4c& m);
  static VectorizedState from_density(const TwoQubitDensityMatrix& rho) { return from_matrix(rho.matrix()); }
  Matrix4c to_matrix() const;
  cplx trace() const { return v(0) + v(5) + v(10) + v(15); }
  // max |v[4i+j] - conj(v[4j+i])|
  double hermiticity_defect() const;
};

enum class GeneratorProvenance { element_table, kron_construction };

struct Generator {
  Matrix16c A;
  GeneratorProvenance provenance;
};

// Element-by-element transcription of the closed-form 16x16 table.
Generator generator_elementwise(const NmrParameters& p, const RelaxationParameters& r);

// A = -i (H~ ⊗ I - I ⊗ H~ᵗ) - diag(rates): the commutator under row-major
// vectorization plus decay.
Generator generator_kron_oracle(const NmrParameters& p, const RelaxationParameters& r);

// Inhomogeneous term: entry (k, l) is eq(k, l)/T_kl · e^{i(n_l - n_k)ωt}
// with n = (1, 0, 0, -1).
class Drive {
 public:
  Drive(const Matrix4c& equilibrium, const RelaxationParameters& r, double omega);

  VectorizedState at(double t) const;
  // True when no nonzero entry carries a time-dependent phase.
  bool is_constant() const { return max_frequency_ == 0.0; }
  // Largest angular frequency present in f(t).
  double max_frequency() const { return max_frequency_; }

 private:
  Vector16c amplitude_;
  Eigen::Matrix<double, 16, 1> frequency_;
  double max_frequency_ = 0.0;
};

// f(t) for the given equilibrium (initial) state.
VectorizedState drive_vector(const VectorizedState& sigma0, const RelaxationParameters& r, double omega,
                             double t);

// exp(tA) σ0 + ∫_0^t exp((t-s)A) f ds for constant f, by exponentiating the
// augmented 17x17 matrix [[A, f], [0, 0]]. No inverse of A is needed.
VectorizedState solve_closed_form(const Generator& gen, const VectorizedState& sigma0,
                                  const VectorizedState& f_const, double t);
// Same, but throws ContractError unless drive.is_constant().
VectorizedState solve_closed_form(const Generator& gen, const VectorizedState& sigma0, const Drive& drive,
                                  double t);

// Closed-form states at increasing sample times. Consecutive equal gaps reuse
// one step exponential.
std::vector<VectorizedState> closed_form_trajectory(const Generator& gen, const VectorizedState& sigma0,
                                                    const Drive& drive, std::span<const double> times);

// Largest step solve_ode accepts: 0.1 / (max |A_ij| + drive.max_frequency()).
double max_stable_dt(const Generator& gen, const Drive& drive);

struct TrajectoryPoint {
  double t;
  VectorizedState state;
};

// Classical fixed-step RK4 on dσ/dt = Aσ + f(t) from 0 to t_end, recording
// every step (the last step is shortened to land on t_end). Throws
// ConfigError when dt exceeds max_stable_dt.
std::vector<TrajectoryPoint> solve_ode(const Generator& gen, const VectorizedState& sigma0, const Drive& drive,
                                       double t_end, double dt);

// RK4 sampled at increasing times; each gap is split into equal steps no
// larger than max_dt.
std::vector<VectorizedState> solve_ode_at(const Generator& gen, const VectorizedState& sigma0,
                                          const Drive& drive, std::span<const double> times, double max_dt);

// ρ(t) = R(t) σ(t) R(t)† with R = rotating_phase(ω, t). Throws
// NumericalDriftError when σ(t) is non-Hermitian beyond 1e-6 or its trace is
// off by more than 1e-6; negative eigenvalues are reported, not rejected.
TwoQubitDensityMatrix recover_lab_frame(const VectorizedState& sigma_t, double omega, double t);

}  // namespace nmrd
