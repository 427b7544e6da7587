#include "vapor/atom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vapor/errors.hpp"

namespace vapor::atom {

namespace {

void require_rate(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
  }
}

Matrix25cd kron(const Matrix5cd& a, const Matrix5cd& b) {
  Matrix25cd out;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      out.block<5, 5>(5 * i, 5 * j) = a(i, j) * b;
    }
  }
  return out;
}

// |to><from|
Matrix5cd transition(int to, int from) {
  Matrix5cd m = Matrix5cd::Zero();
  m(to - 1, from - 1) = 1.0;
  return m;
}

// Column stacking: vec(A X B) = (B^T (x) A) vec(X).
Matrix25cd dissipator(const Matrix5cd& jump) {
  const Matrix5cd id = Matrix5cd::Identity();
  const Matrix5cd jdj = jump.adjoint() * jump;
  return kron(jump.conjugate(), jump) - 0.5 * kron(id, jdj) - 0.5 * kron(jdj.transpose(), id);
}

double rate_scale(const LevelScheme& s, const DriveConfig& d) {
  const double candidates[] = {s.gamma31,         s.gamma32,         s.gamma41,
                               s.gamma42,         s.gamma51,         s.gamma52,
                               std::abs(d.omega_c1), std::abs(d.omega_c2), d.pump_p,
                               std::abs(d.delta_c1), std::abs(d.delta_c2)};
  const double scale = *std::max_element(std::begin(candidates), std::end(candidates));
  return scale > 0.0 ? scale : 1.0;
}

}  // namespace

void LevelScheme::validate() const {
  require_rate(gamma31, "gamma31");
  require_rate(gamma32, "gamma32");
  require_rate(gamma41, "gamma41");
  require_rate(gamma42, "gamma42");
  require_rate(gamma51, "gamma51");
  require_rate(gamma52, "gamma52");
  require_rate(gamma21, "gamma21");
}

void DriveConfig::validate() const {
  require_rate(pump_p, "pump_p");
  if (!std::isfinite(std::abs(omega_c1)) || !std::isfinite(std::abs(omega_c2)) ||
      !std::isfinite(delta_c1) || !std::isfinite(delta_c2)) {
    throw std::invalid_argument("drive parameters must be finite");
  }
}

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix5cd herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix5cd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double Liouvillian::trace_defect() const {
  Eigen::Matrix<cdouble, 1, 25> trace_row = Eigen::Matrix<cdouble, 1, 25>::Zero();
  for (int i = 0; i < 5; ++i) trace_row(vec_index(i, i)) = 1.0;
  return (trace_row * generator).cwiseAbs().maxCoeff();
}

Vector25cd vectorize(const Matrix5cd& rho) {
  Vector25cd v;
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) v(vec_index(i, j)) = rho(i, j);
  return v;
}

Matrix5cd unvectorize(const Vector25cd& v) {
  Matrix5cd rho;
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) rho(i, j) = v(vec_index(i, j));
  return rho;
}

Liouvillian build_liouvillian(const LevelScheme& scheme, const DriveConfig& drive) {
  scheme.validate();
  drive.validate();
  const double unit = rate_scale(scheme, drive);

  // Rotating frame of the control fields; couplings enter as -Omega|e><g| + h.c.
  Matrix5cd h = Matrix5cd::Zero();
  h(2, 2) = -drive.delta_c1 / unit;
  h(3, 3) = -drive.delta_c2 / unit;
  h(2, 1) = -drive.omega_c1 / unit;
  h(1, 2) = -std::conj(drive.omega_c1) / unit;
  h(3, 1) = -drive.omega_c2 / unit;
  h(1, 3) = -std::conj(drive.omega_c2) / unit;

  const Matrix5cd id = Matrix5cd::Identity();
  Matrix25cd gen = -kI * (kron(id, h) - kron(h.transpose(), id));

  const struct {
    int from, to;
    double rate;
  } decays[] = {{3, 1, scheme.gamma31}, {3, 2, scheme.gamma32}, {4, 1, scheme.gamma41},
                {4, 2, scheme.gamma42}, {5, 1, scheme.gamma51}, {5, 2, scheme.gamma52}};
  for (const auto& d : decays) {
    if (d.rate > 0.0) gen += (d.rate / unit) * dissipator(transition(d.to, d.from));
  }

  // Two-way incoherent pump: |1> -> |5> and |5> -> |1>, each at rate p.
  if (drive.pump_p > 0.0) {
    gen += (drive.pump_p / unit) * dissipator(transition(5, 1));
    gen += (drive.pump_p / unit) * dissipator(transition(1, 5));
  }

  // Pure dephasing of the ground-state coherence only.
  gen(vec_index(1, 0), vec_index(1, 0)) -= scheme.gamma21 / unit;
  gen(vec_index(0, 1), vec_index(0, 1)) -= scheme.gamma21 / unit;

  return Liouvillian{gen, unit};
}

DensityMatrix steady_state(const Liouvillian& liouvillian) {
  Eigen::JacobiSVD<Matrix25cd> svd(liouvillian.generator, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double threshold = 1e-10 * std::max(sigma(0), 1.0);
  int null_dim = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) < threshold) ++null_dim;
  }
  if (null_dim != 1) {
    throw DegenerateSteadyState("steady-state null space has dimension " +
                                std::to_string(null_dim) + " (expected 1)");
  }
  const Vector25cd null_vector = svd.matrixV().col(24);
  Matrix5cd rho = unvectorize(null_vector);
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(rho);
}

DensityMatrix solve_steady_state(const LevelScheme& scheme, const DriveConfig& drive) {
  return steady_state(build_liouvillian(scheme, drive));
}

double steady_state_residual(const Liouvillian& liouvillian, const DensityMatrix& state) {
  return (liouvillian.generator * vectorize(state.matrix())).norm();
}

}  // namespace vapor::atom
