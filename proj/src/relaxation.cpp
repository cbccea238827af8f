#include "nmrdiscord/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nmrdiscord/errors.hpp"

namespace nmrd {

namespace {

using Matrix17c = Eigen::Matrix<cplx, 17, 17>;

// Phase index of each basis state under rotating_phase: |00> → +1, |11> → -1.
constexpr int kPhaseIndex[4] = {1, 0, 0, -1};

double inverse_time(double T) { return std::isinf(T) ? 0.0 : 1.0 / T; }

Matrix16c decay_matrix(const RelaxationParameters& r) { return r.rates().cast<cplx>().asDiagonal(); }

Matrix17c augmented(const Generator& gen, const VectorizedState& f, double t) {
  Matrix17c m = Matrix17c::Zero();
  m.topLeftCorner<16, 16>() = t * gen.A;
  m.topRightCorner<16, 1>() = t * f.v;
  return m;
}

VectorizedState apply_augmented(const Matrix17c& e, const VectorizedState& sigma) {
  VectorizedState out;
  out.v = e.topLeftCorner<16, 16>() * sigma.v + e.topRightCorner<16, 1>();
  return out;
}

Matrix17c exp17(const Matrix17c& m) {
  const ComplexMatrix dyn = m;
  return expm(dyn);
}

}  // namespace

RelaxationParameters RelaxationParameters::none() {
  const double inf = std::numeric_limits<double>::infinity();
  return RelaxationParameters{inf, inf, std::nullopt};
}

void RelaxationParameters::validate() const {
  if (!(T1 > 0.0) || !(T2 > 0.0)) {
    throw ValidationError("relaxation times T1 and T2 must be positive");
  }
}

double RelaxationParameters::rate1() const { return inverse_time(T1); }
double RelaxationParameters::rate2() const { return inverse_time(T2); }

Eigen::Matrix<double, 16, 1> RelaxationParameters::rates() const {
  Eigen::Matrix<double, 16, 1> out;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) out(4 * k + l) = k == l ? rate1() : rate2();
  }
  return out;
}

VectorizedState VectorizedState::from_matrix(const Matrix4c& m) {
  VectorizedState s;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) s.v(4 * i + j) = m(i, j);
  }
  return s;
}

Matrix4c VectorizedState::to_matrix() const {
  Matrix4c m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = v(4 * i + j);
  }
  return m;
}

double VectorizedState::hermiticity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(v(4 * i + j) - std::conj(v(4 * j + i))));
  }
  return worst;
}

Generator generator_elementwise(const NmrParameters& p, const RelaxationParameters& r) {
  const double a = p.a, b = p.b, c = p.c, d = p.d, e = p.e, y = p.omega;
  Eigen::Matrix<double, 16, 16> m;
  // clang-format off
  m <<
    0, -e, -d, 0, e, 0, 0, 0, d, 0, 0, 0, 0, 0, 0, 0,
    -e, a-y-b-2*c, 0, -d, 0, e, 0, 0, 0, d, 0, 0, 0, 0, 0, 0,
    -d, 0, a-y+b-2*c, -e, 0, 0, e, 0, 0, 0, d, 0, 0, 0, 0, 0,
    0, -d, -e, 2*a-2*y, 0, 0, 0, e, 0, 0, 0, d, 0, 0, 0, 0,
    e, 0, 0, 0, -a+y+b+2*c, -e, -d, 0, 0, 0, 0, 0, d, 0, 0, 0,
    0, e, 0, 0, -e, 0, 0, -d, 0, 0, 0, 0, 0, d, 0, 0,
    0, 0, e, 0, -d, 0, 2*b, -e, 0, 0, 0, 0, 0, 0, d, 0,
    0, 0, 0, e, 0, -d, -e, a-y+b+2*c, 0, 0, 0, 0, 0, 0, 0, d,
    d, 0, 0, 0, 0, 0, 0, 0, -a+y-b+2*c, -e, -d, 0, e, 0, 0, 0,
    0, d, 0, 0, 0, 0, 0, 0, -e, -2*b, 0, -d, 0, e, 0, 0,
    0, 0, d, 0, 0, 0, 0, 0, -d, 0, 0, -e, 0, 0, e, 0,
    0, 0, 0, d, 0, 0, 0, 0, 0, -d, -e, a-b+2*c-y, 0, 0, 0, e,
    0, 0, 0, 0, d, 0, 0, 0, e, 0, 0, 0, -2*a+2*y, -e, -d, 0,
    0, 0, 0, 0, 0, d, 0, 0, 0, e, 0, 0, -e, -a-b-2*c+y, 0, -d,
    0, 0, 0, 0, 0, 0, d, 0, 0, 0, e, 0, -d, 0, -a+b-2*c+y, -e,
    0, 0, 0, 0, 0, 0, 0, d, 0, 0, 0, e, 0, -d, -e, 0;
  // clang-format on
  return Generator{kI * m.cast<cplx>() - decay_matrix(r), GeneratorProvenance::element_table};
}

Generator generator_kron_oracle(const NmrParameters& p, const RelaxationParameters& r) {
  const Matrix4c h = h_tilde(p);
  const ComplexMatrix id = Matrix4c::Identity();
  const ComplexMatrix commutator = kron(h, id) - kron(id, h.transpose());
  return Generator{-kI * Matrix16c(commutator) - decay_matrix(r), GeneratorProvenance::kron_construction};
}

Drive::Drive(const Matrix4c& equilibrium, const RelaxationParameters& r, double omega) {
  const auto rates = r.rates();
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      const int idx = 4 * k + l;
      amplitude_(idx) = equilibrium(k, l) * rates(idx);
      frequency_(idx) = (kPhaseIndex[l] - kPhaseIndex[k]) * omega;
      if (amplitude_(idx) != cplx(0.0) && frequency_(idx) != 0.0) {
        max_frequency_ = std::max(max_frequency_, std::abs(frequency_(idx)));
      }
    }
  }
}

VectorizedState Drive::at(double t) const {
  VectorizedState f;
  for (int i = 0; i < 16; ++i) {
    f.v(i) = frequency_(i) == 0.0 ? amplitude_(i) : amplitude_(i) * std::polar(1.0, frequency_(i) * t);
  }
  return f;
}

VectorizedState drive_vector(const VectorizedState& sigma0, const RelaxationParameters& r, double omega,
                             double t) {
  return Drive(sigma0.to_matrix(), r, omega).at(t);
}

VectorizedState solve_closed_form(const Generator& gen, const VectorizedState& sigma0,
                                  const VectorizedState& f_const, double t) {
  if (t == 0.0) return sigma0;
  return apply_augmented(exp17(augmented(gen, f_const, t)), sigma0);
}

VectorizedState solve_closed_form(const Generator& gen, const VectorizedState& sigma0, const Drive& drive,
                                  double t) {
  if (!drive.is_constant()) {
    throw ContractError("closed-form solver requires a constant drive; use the RK4 integrator");
  }
  return solve_closed_form(gen, sigma0, drive.at(0.0), t);
}

std::vector<VectorizedState> closed_form_trajectory(const Generator& gen, const VectorizedState& sigma0,
                                                    const Drive& drive, std::span<const double> times) {
  if (!drive.is_constant()) {
    throw ContractError("closed-form solver requires a constant drive; use the RK4 integrator");
  }
  const VectorizedState f = drive.at(0.0);
  std::vector<VectorizedState> out;
  out.reserve(times.size());
  VectorizedState state = sigma0;
  double now = 0.0;
  double cached_gap = -1.0;
  Matrix17c step;
  for (double t : times) {
    if (t < now) throw ValidationError("sample times must be non-decreasing and non-negative");
    const double gap = t - now;
    if (gap > 0.0) {
      if (std::abs(gap - cached_gap) > 1e-12 * gap) {
        step = exp17(augmented(gen, f, gap));
        cached_gap = gap;
      }
      state = apply_augmented(step, state);
      now = t;
    }
    out.push_back(state);
  }
  return out;
}

double max_stable_dt(const Generator& gen, const Drive& drive) {
  const double scale = gen.A.cwiseAbs().maxCoeff() + drive.max_frequency();
  return scale > 0.0 ? 0.1 / scale : std::numeric_limits<double>::infinity();
}

namespace {

struct Rk4 {
  const Matrix16c& A;
  const Drive& drive;

  Vector16c rhs(const Vector16c& s, double t) const { return A * s + drive.at(t).v; }

  void step(Vector16c& s, double t, double h) const {
    const Vector16c k1 = rhs(s, t);
    const Vector16c k2 = rhs(s + 0.5 * h * k1, t + 0.5 * h);
    const Vector16c k3 = rhs(s + 0.5 * h * k2, t + 0.5 * h);
    const Vector16c k4 = rhs(s + h * k3, t + h);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

void check_step(const Generator& gen, const Drive& drive, double dt) {
  const double limit = max_stable_dt(gen, drive);
  if (!(dt > 0.0) || dt > limit) {
    std::ostringstream os;
    os << "RK4 step " << dt << " s is outside the stability bound (0, " << limit
       << "] s; reduce dt (--dt or solver.dt)";
    throw ConfigError(os.str());
  }
}

}  // namespace

std::vector<TrajectoryPoint> solve_ode(const Generator& gen, const VectorizedState& sigma0, const Drive& drive,
                                       double t_end, double dt) {
  check_step(gen, drive, dt);
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  const Rk4 rk{gen.A, drive};
  std::vector<TrajectoryPoint> out;
  out.push_back({0.0, sigma0});
  Vector16c s = sigma0.v;
  const auto n = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  for (long long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double next = std::min(t_end, static_cast<double>(k + 1) * dt);
    rk.step(s, t, next - t);
    out.push_back({next, VectorizedState{s}});
  }
  return out;
}

std::vector<VectorizedState> solve_ode_at(const Generator& gen, const VectorizedState& sigma0,
                                          const Drive& drive, std::span<const double> times, double max_dt) {
  check_step(gen, drive, max_dt);
  const Rk4 rk{gen.A, drive};
  std::vector<VectorizedState> out;
  out.reserve(times.size());
  Vector16c s = sigma0.v;
  double now = 0.0;
  for (double t : times) {
    if (t < now) throw ValidationError("sample times must be non-decreasing and non-negative");
    const double gap = t - now;
    if (gap > 0.0) {
      const auto n = static_cast<long long>(std::ceil(gap / max_dt - 1e-9));
      const double h = gap / static_cast<double>(n);
      for (long long k = 0; k < n; ++k) rk.step(s, now + static_cast<double>(k) * h, h);
      now = t;
    }
    out.push_back(VectorizedState{s});
  }
  return out;
}

TwoQubitDensityMatrix recover_lab_frame(const VectorizedState& sigma_t, double omega, double t) {
  const double defect = sigma_t.hermiticity_defect();
  const double trace_err = std::abs(sigma_t.trace() - 1.0);
  if (defect > 1e-6 || trace_err > 1e-6) {
    std::ostringstream os;
    os << "integrated state drifted at t = " << t << " s: Hermiticity defect " << defect
       << ", trace error " << trace_err << "; reduce dt";
    throw NumericalDriftError(os.str());
  }
  const Matrix4c r = rotating_phase(omega, t);
  const Matrix4c rho = r * sigma_t.to_matrix() * r.adjoint();
  Tolerances relaxed;
  relaxed.hermiticity = 1e-6;
  relaxed.trace = 1e-6;
  relaxed.allow_negative = true;
  return validate_density(rho, relaxed);
}

}  // namespace nmrd
