#include "nmrdiscord/nmr_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nmrdiscord/errors.hpp"

namespace nmrd {

namespace {

const Matrix4c& zi() {
  static const Matrix4c m = kron(pauli(Axis::z), Matrix2c::Identity());
  return m;
}
const Matrix4c& iz() {
  static const Matrix4c m = kron(Matrix2c::Identity(), pauli(Axis::z));
  return m;
}
const Matrix4c& zz() {
  static const Matrix4c m = kron(pauli(Axis::z), pauli(Axis::z));
  return m;
}
const Matrix4c& xi() {
  static const Matrix4c m = kron(pauli(Axis::x), Matrix2c::Identity());
  return m;
}
const Matrix4c& ix() {
  static const Matrix4c m = kron(Matrix2c::Identity(), pauli(Axis::x));
  return m;
}
const Matrix4c& yi() {
  static const Matrix4c m = kron(pauli(Axis::y), Matrix2c::Identity());
  return m;
}
const Matrix4c& iy() {
  static const Matrix4c m = kron(Matrix2c::Identity(), pauli(Axis::y));
  return m;
}

double parameter_scale(const NmrParameters& p) {
  return std::max({1.0, std::abs(p.a), std::abs(p.b), std::abs(p.c), std::abs(p.d), std::abs(p.e),
                   std::abs(p.omega)});
}

}  // namespace

NmrParameters NmrParameters::from_lab(double omega1, double omega2, double J, double g1, double g2,
                                      double omega) {
  return NmrParameters{0.5 * (omega1 + omega2), 0.5 * (omega1 - omega2), J, 0.5 * g1, 0.5 * g2, omega};
}

void NmrParameters::validate(bool require_positive_a) const {
  for (double v : {a, b, c, d, e, omega}) {
    if (!std::isfinite(v)) throw ValidationError("NMR parameters must be finite");
  }
  if (require_positive_a && !(a > 0.0)) {
    throw ValidationError("NMR parameter a (mean Larmor frequency) must be positive");
  }
  if (d < 0.0 || e < 0.0) throw ValidationError("drive amplitudes d, e must be non-negative");
}

NmrParameters NmrParameters::scaled(double k) const {
  return NmrParameters{a * k, b * k, c * k, d * k, e * k, omega * k};
}

Matrix4c h_sys(const NmrParameters& p) {
  return -0.5 * p.omega1() * zi() - 0.5 * p.omega2() * iz() + p.c * zz();
}

Matrix4c h_rf(const NmrParameters& p, double t) {
  const double c = std::cos(p.omega * t), s = std::sin(p.omega * t);
  return -p.d * (c * xi() - s * yi()) - p.e * (c * ix() - s * iy());
}

Matrix4c h_lab(const NmrParameters& p, double t) { return h_sys(p) + h_rf(p, t); }

Matrix4c h_tilde_matrix_form(const NmrParameters& p) {
  const double a = p.a, b = p.b, c = p.c, d = p.d, e = p.e, w = p.omega;
  Eigen::Matrix4d m;
  // clang-format off
  m << a - w - c,  e,      d,      0,
       e,          b + c,  0,      d,
       d,          0,     -b + c,  e,
       0,          d,      e,     -a + w - c;
  // clang-format on
  return -m.cast<cplx>();
}

Matrix4c h_tilde_operator_form(const NmrParameters& p) {
  return -0.5 * (p.omega1() - p.omega) * zi() - 0.5 * (p.omega2() - p.omega) * iz() + p.c * zz() -
         p.d * xi() - p.e * ix();
}

Matrix4c h_tilde(const NmrParameters& p) {
  Matrix4c direct = h_tilde_matrix_form(p);
  const double diff = (direct - h_tilde_operator_form(p)).cwiseAbs().maxCoeff();
  if (!(diff <= 1e-12 * parameter_scale(p))) {
    std::ostringstream os;
    os << "rotating-frame Hamiltonian routes disagree by " << diff;
    throw ConsistencyError(os.str());
  }
  return direct;
}

Matrix4c rotating_phase(double omega, double t) {
  const double wt = omega * t;
  Vector4c diag(std::polar(1.0, wt), 1.0, 1.0, std::polar(1.0, -wt));
  return diag.asDiagonal();
}

ClosedEvolution::ClosedEvolution(const NmrParameters& p) : p_(p), h_(h_tilde(p)) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h_);
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

Matrix4c ClosedEvolution::rotating_frame_propagator(double t) const {
  Vector4c phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -energies_(k) * t);
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Matrix4c ClosedEvolution::propagator(double t) const {
  return rotating_phase(p_.omega, t) * rotating_frame_propagator(t);
}

TwoQubitDensityMatrix ClosedEvolution::evolve(const TwoQubitDensityMatrix& rho0, double t) const {
  const Matrix4c u = propagator(t);
  return validate_density(u * rho0.matrix() * u.adjoint());
}

Matrix4c propagator(const NmrParameters& p, double t) { return ClosedEvolution(p).propagator(t); }

TwoQubitDensityMatrix evolve(const TwoQubitDensityMatrix& rho0, const NmrParameters& p, double t) {
  return ClosedEvolution(p).evolve(rho0, t);
}

long long lab_frame_min_steps(const NmrParameters& p, double t) {
  const double n = 20.0 * std::abs(t) * (std::abs(p.a) + p.d + p.e) / (2.0 * std::numbers::pi);
  return std::max<long long>(1, static_cast<long long>(std::ceil(n)));
}

PureState lab_frame_evolve_oracle(const PureState& psi0, const NmrParameters& p, double t, long long steps) {
  if (t == 0.0) return psi0;
  if (steps < lab_frame_min_steps(p, t)) {
    std::ostringstream os;
    os << "lab-frame oracle needs at least " << lab_frame_min_steps(p, t) << " steps, got " << steps;
    throw ValidationError(os.str());
  }
  const double dt = t / static_cast<double>(steps);
  Vector4c psi = psi0.amplitudes();
  Eigen::SelfAdjointEigenSolver<Matrix4c> es;
  for (long long k = 0; k < steps; ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * dt;
    es.compute(h_lab(p, mid));
    Vector4c phases;
    for (int j = 0; j < 4; ++j) phases(j) = std::polar(1.0, -es.eigenvalues()(j) * dt);
    psi = es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * psi));
  }
  return PureState::normalized(psi);
}

}  // namespace nmrd
