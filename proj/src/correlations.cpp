#include "nmrdiscord/correlations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nmrdiscord/errors.hpp"

namespace nmrd {

namespace {

const Matrix4c& sigma_yy() {
  static const Matrix4c yy = kron(pauli(Axis::y), pauli(Axis::y));
  return yy;
}

const std::array<Matrix2c, 3>& paulis() {
  static const std::array<Matrix2c, 3> p{pauli(Axis::x), pauli(Axis::y), pauli(Axis::z)};
  return p;
}

// Square roots of the eigenvalues of rho·rho~, descending.
//
// For positive rho = W W† these are the singular values of Wᵀ (σy⊗σy) W,
// which avoids square-rooting round-off sized eigenvalues of rho·rho~. When
// rho is measurably non-positive that factorization does not exist and the
// eigenvalues of rho·rho~ are used directly.
std::array<double, 4> spin_flip_roots(const TwoQubitDensityMatrix& rho) {
  std::array<double, 4> lambda{};
  if (!rho.positivity_warning()) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho.matrix());
    const Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix4c factor = es.eigenvectors() * w.asDiagonal();
    const Matrix4c tau = factor.transpose() * sigma_yy() * factor;
    Eigen::JacobiSVD<Matrix4c> svd(tau);
    const Eigen::Vector4d& s = svd.singularValues();
    for (int i = 0; i < 4; ++i) lambda[i] = s(i);
  } else {
    const Matrix4c r = rho.matrix() * spin_flip(rho);
    Eigen::ComplexEigenSolver<Matrix4c> es(r, false);
    for (int i = 0; i < 4; ++i) {
      // ρρ̃ is similar to a positive matrix for physical states; clamp the
      // negative real parts left by non-positive relaxation output.
      lambda[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    }
  }
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return lambda;
}

void check_density_2x2(const Matrix2c& m, const char* name) {
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double trace_err = std::abs(m.trace() - 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (defect > 1e-10 || trace_err > 1e-10 || es.eigenvalues().minCoeff() < -1e-10) {
    std::ostringstream os;
    os << name << " is not a valid 2x2 density matrix";
    throw ValidationError(os.str());
  }
}

std::array<Eigen::Vector2cd, 2> measurement_basis(double theta, double phi) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  const cplx phase = std::polar(1.0, phi);
  return {Eigen::Vector2cd(c, phase * s), Eigen::Vector2cd(-std::conj(phase) * s, c)};
}

}  // namespace

Matrix4c spin_flip(const TwoQubitDensityMatrix& rho) {
  return sigma_yy() * rho.matrix().conjugate() * sigma_yy();
}

double pseudo_concurrence(const TwoQubitDensityMatrix& rho) {
  const auto l = spin_flip_roots(rho);
  return l[0] - l[1] - l[2] - l[3];
}

double concurrence(const TwoQubitDensityMatrix& rho) {
  return std::max(0.0, pseudo_concurrence(rho));
}

BlochDecomposition bloch_from_traces(const TwoQubitDensityMatrix& rho) {
  const Matrix4c& m = rho.matrix();
  const Matrix2c id = Matrix2c::Identity();
  const auto& s = paulis();
  BlochDecomposition b;
  for (int i = 0; i < 3; ++i) {
    b.x(i) = (m * kron(s[i], id)).trace().real();
    b.y(i) = (m * kron(id, s[i])).trace().real();
    for (int j = 0; j < 3; ++j) {
      b.T(i, j) = (m * kron(s[i], s[j])).trace().real();
    }
  }
  return b;
}

BlochDecomposition bloch_from_elements(const TwoQubitDensityMatrix& rho) {
  // r(i, j) uses 1-based indices to match the usual element tables.
  auto r = [&](int i, int j) { return rho(i - 1, j - 1); };
  BlochDecomposition b;
  b.x(0) = (r(1, 3) + r(2, 4) + r(3, 1) + r(4, 2)).real();
  b.x(1) = (kI * (r(1, 3) + r(2, 4) - r(3, 1) - r(4, 2))).real();
  b.x(2) = (r(1, 1) + r(2, 2) - r(3, 3) - r(4, 4)).real();

  b.y(0) = (r(1, 2) + r(2, 1) + r(3, 4) + r(4, 3)).real();
  b.y(1) = (kI * (r(1, 2) - r(2, 1) + r(3, 4) - r(4, 3))).real();
  b.y(2) = (r(1, 1) - r(2, 2) + r(3, 3) - r(4, 4)).real();

  b.T(0, 0) = (r(1, 4) + r(2, 3) + r(3, 2) + r(4, 1)).real();
  b.T(0, 1) = (kI * (r(1, 4) - r(2, 3) + r(3, 2) - r(4, 1))).real();
  b.T(0, 2) = (r(1, 3) - r(2, 4) + r(3, 1) - r(4, 2)).real();
  b.T(1, 0) = (kI * (r(1, 4) + r(2, 3) - r(3, 2) - r(4, 1))).real();
  b.T(1, 1) = (-r(1, 4) + r(2, 3) + r(3, 2) - r(4, 1)).real();
  b.T(1, 2) = (kI * (r(1, 3) - r(2, 4) - r(3, 1) + r(4, 2))).real();
  b.T(2, 0) = (r(1, 2) + r(2, 1) - r(3, 4) - r(4, 3)).real();
  b.T(2, 1) = (kI * (r(1, 2) - r(2, 1) - r(3, 4) + r(4, 3))).real();
  b.T(2, 2) = (r(1, 1) - r(2, 2) - r(3, 3) + r(4, 4)).real();
  return b;
}

double max_difference(const BlochDecomposition& a, const BlochDecomposition& b) {
  return std::max({(a.x - b.x).cwiseAbs().maxCoeff(), (a.y - b.y).cwiseAbs().maxCoeff(),
                   (a.T - b.T).cwiseAbs().maxCoeff()});
}

BlochDecomposition bloch_decompose(const TwoQubitDensityMatrix& rho) {
  BlochDecomposition traces = bloch_from_traces(rho);
  const double diff = max_difference(traces, bloch_from_elements(rho));
  if (!(diff <= 1e-10)) {
    std::ostringstream os;
    os << "Bloch decomposition routes disagree by " << diff;
    throw ConsistencyError(os.str());
  }
  return traces;
}

Matrix4c bloch_reconstruct(const BlochDecomposition& b) {
  const Matrix2c id = Matrix2c::Identity();
  const auto& s = paulis();
  Matrix4c m = Matrix4c::Identity();
  for (int i = 0; i < 3; ++i) {
    m += b.x(i) * kron(s[i], id);
    m += b.y(i) * kron(id, s[i]);
    for (int j = 0; j < 3; ++j) m += b.T(i, j) * kron(s[i], s[j]);
  }
  return 0.25 * m;
}

double geometric_discord(const BlochDecomposition& b) {
  const Eigen::Matrix3d k = b.x * b.x.transpose() + b.T * b.T.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k, Eigen::EigenvaluesOnly);
  const double lambda_max = es.eigenvalues().maxCoeff();
  const double d = 0.25 * (b.x.squaredNorm() + b.T.squaredNorm() - lambda_max);
  return std::max(0.0, d);
}

double geometric_discord(const TwoQubitDensityMatrix& rho) {
  return geometric_discord(bloch_decompose(rho));
}

double entropy_bits(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = es.eigenvalues()(i);
    if (w > 0.0) s -= w * std::log2(w);
  }
  return s;
}

double measured_conditional_entropy(const TwoQubitDensityMatrix& rho, double theta, double phi) {
  const Matrix4c& m = rho.matrix();
  double total = 0.0;
  for (const auto& alpha : measurement_basis(theta, phi)) {
    Matrix2c conditional = Matrix2c::Zero();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        conditional += std::conj(alpha(i)) * alpha(j) * m.block<2, 2>(2 * i, 2 * j);
      }
    }
    const double p = conditional.trace().real();
    if (p > 1e-15) total += p * entropy_bits(conditional / p);
  }
  return total;
}

namespace {

struct Vertex {
  double theta, phi, value;
};

// Nelder-Mead on (θ, φ) started from a grid cell.
double refine(const TwoQubitDensityMatrix& rho, Vertex best, double step_theta, double step_phi,
              const EntropicDiscordOptions& opt) {
  auto f = [&](double t, double p) { return measured_conditional_entropy(rho, t, p); };
  std::array<Vertex, 3> s{best, Vertex{best.theta + step_theta, best.phi, 0.0},
                          Vertex{best.theta, best.phi + step_phi, 0.0}};
  for (int i = 1; i < 3; ++i) s[i].value = f(s[i].theta, s[i].phi);

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
    if (s[2].value - s[0].value < opt.tolerance) break;
    const double ct = 0.5 * (s[0].theta + s[1].theta), cp = 0.5 * (s[0].phi + s[1].phi);
    auto along = [&](double k) {
      Vertex v{ct + k * (s[2].theta - ct), cp + k * (s[2].phi - cp), 0.0};
      v.value = f(v.theta, v.phi);
      return v;
    };
    const Vertex reflected = along(-1.0);
    if (reflected.value < s[0].value) {
      const Vertex expanded = along(-2.0);
      s[2] = expanded.value < reflected.value ? expanded : reflected;
    } else if (reflected.value < s[1].value) {
      s[2] = reflected;
    } else {
      const Vertex contracted = reflected.value < s[2].value ? along(-0.5) : along(0.5);
      if (contracted.value < std::min(reflected.value, s[2].value)) {
        s[2] = contracted;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].theta = 0.5 * (s[i].theta + s[0].theta);
          s[i].phi = 0.5 * (s[i].phi + s[0].phi);
          s[i].value = f(s[i].theta, s[i].phi);
        }
      }
    }
  }
  return std::min({s[0].value, s[1].value, s[2].value});
}

}  // namespace

double entropic_discord(const TwoQubitDensityMatrix& rho, const EntropicDiscordOptions& opt) {
  if (opt.theta_points < 2 || opt.phi_points < 1) {
    throw ValidationError("entropic_discord: grid needs at least 2 theta and 1 phi points");
  }
  const double pi = std::numbers::pi;
  const double dtheta = pi / (opt.theta_points - 1);
  const double dphi = 2.0 * pi / opt.phi_points;

  Vertex best{0.0, 0.0, measured_conditional_entropy(rho, 0.0, 0.0)};
  for (int i = 0; i < opt.theta_points; ++i) {
    const double theta = i * dtheta;
    // φ is irrelevant at the poles.
    const int nphi = (i == 0 || i == opt.theta_points - 1) ? 1 : opt.phi_points;
    for (int j = 0; j < nphi; ++j) {
      const double phi = j * dphi;
      const double v = measured_conditional_entropy(rho, theta, phi);
      if (v < best.value) best = Vertex{theta, phi, v};
    }
  }
  const double conditional = std::min(best.value, refine(rho, best, 0.5 * dtheta, 0.5 * dphi, opt));

  const double d = entropy_bits(partial_trace_B(rho)) - entropy_bits(rho.matrix()) + conditional;
  return std::max(0.0, d);
}

TwoQubitDensityMatrix make_classical_state(double p, double theta, double phi, const Matrix2c& rho1,
                                           const Matrix2c& rho2) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("make_classical_state: probability must lie in [0, 1]");
  }
  check_density_2x2(rho1, "rho1");
  check_density_2x2(rho2, "rho2");
  const auto basis = measurement_basis(theta, phi);
  const Matrix2c p0 = basis[0] * basis[0].adjoint();
  const Matrix2c p1 = basis[1] * basis[1].adjoint();
  const ComplexMatrix m = p * kron(p0, rho1) + (1.0 - p) * kron(p1, rho2);
  return validate_density(m);
}

CorrelationReport analyze(const TwoQubitDensityMatrix& rho, bool with_entropic,
                          const EntropicDiscordOptions& options) {
  CorrelationReport r;
  r.pseudo_concurrence = pseudo_concurrence(rho);
  r.concurrence = std::max(0.0, r.pseudo_concurrence);
  r.geometric_discord = geometric_discord(rho);
  if (with_entropic) r.entropic_discord = entropic_discord(rho, options);
  r.min_eigenvalue = rho.min_eigenvalue();
  return r;
}

}  // namespace nmrd
