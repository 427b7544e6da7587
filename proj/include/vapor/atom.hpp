#pragma once

#include <Eigen/Dense>

#include "vapor/constants.hpp"

// Zeroth-order (probe- and signal-free) state of the five-level double-Lambda
// atom. Levels are labelled 1..5: |1>,|2> ground, |3>,|4> excited states coupled
// to |2> by the two control fields, |5> the auxiliary state reached by the
// incoherent pump from |1>.
namespace vapor::atom {

/// Spontaneous decay and dephasing rates in rad/s.
struct LevelScheme {
  double gamma31 = 0.0;
  double gamma32 = 0.0;
  double gamma41 = 0.0;
  double gamma42 = 0.0;
  double gamma51 = 0.0;
  double gamma52 = 0.0;
  double gamma21 = 0.0;  ///< ground-state dephasing of rho_21

  double total3() const { return gamma31 + gamma32; }
  double total4() const { return gamma41 + gamma42; }
  double total5() const { return gamma51 + gamma52; }

  /// Throws std::invalid_argument if any rate is negative or not finite.
  void validate() const;
};

/// Control fields on |2>-|3> and |2>-|4> plus the two-way pump on |1>-|5>.
struct DriveConfig {
  cdouble omega_c1{0.0, 0.0};
  cdouble omega_c2{0.0, 0.0};
  double delta_c1 = 0.0;
  double delta_c2 = 0.0;
  double pump_p = 0.0;

  void validate() const;
};

using Matrix5cd = Eigen::Matrix<cdouble, 5, 5>;
using Matrix25cd = Eigen::Matrix<cdouble, 25, 25>;
using Vector25cd = Eigen::Matrix<cdouble, 25, 1>;

class DensityMatrix {
 public:
  DensityMatrix() : rho_(Matrix5cd::Zero()) { rho_(0, 0) = 1.0; }
  explicit DensityMatrix(const Matrix5cd& rho) : rho_(rho) {}

  /// Element rho_ij with 1-based level labels.
  cdouble operator()(int i, int j) const { return rho_(i - 1, j - 1); }
  double population(int i) const { return rho_(i - 1, i - 1).real(); }

  const Matrix5cd& matrix() const { return rho_; }

  double hermiticity_error() const;
  cdouble trace() const { return rho_.trace(); }
  double min_eigenvalue() const;

 private:
  Matrix5cd rho_;
};

/// Generator of d vec(rho)/dt acting on the column-stacked density matrix.
/// Stored dimensionless: the physical generator is rate_unit * generator.
struct Liouvillian {
  Matrix25cd generator;
  double rate_unit = 1.0;  ///< rad/s

  /// Norm of the trace functional applied to the generator (zero for a
  /// trace-preserving generator).
  double trace_defect() const;
};

/// Column-stacked index of element (i, j), 0-based.
constexpr int vec_index(int i, int j) { return j * 5 + i; }

Vector25cd vectorize(const Matrix5cd& rho);
Matrix5cd unvectorize(const Vector25cd& v);

Liouvillian build_liouvillian(const LevelScheme& scheme, const DriveConfig& drive);

/// Normalized null vector of the generator. Throws DegenerateSteadyState when
/// the numerical null space is not one-dimensional.
DensityMatrix steady_state(const Liouvillian& liouvillian);

/// Convenience: build_liouvillian followed by steady_state.
DensityMatrix solve_steady_state(const LevelScheme& scheme, const DriveConfig& drive);

/// Residual ||L vec(rho)|| in units of rate_unit.
double steady_state_residual(const Liouvillian& liouvillian, const DensityMatrix& state);

}  // namespace vapor::atom
