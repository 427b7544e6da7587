#pragma once

#include <Eigen/Dense>

#include "vapor/susceptibility.hpp"

// Per-transverse-mode coupled probe/signal evolution
//   d/dz (Omega_p, Omega_s) = i A(k_perp) (Omega_p, Omega_s).
namespace vapor::beamprop {

using Matrix2cd = Eigen::Matrix2cd;
using Vector2cd = Eigen::Vector2cd;

/// A = [[-k^2/2k_p + k_p chi_p/2, k_p chi_sp/2], [k_s chi_ps/2, -k^2/2k_s + k_s chi_s/2]].
Matrix2cd propagation_matrix(double k_perp, const susceptibility::SusceptibilitySet& chi,
                             const susceptibility::OpticalTransitions& optics);

struct Eigenpair {
  cdouble value;
  Vector2cd vector;  ///< unit norm
};

/// Least-damped eigenpair of A (smallest imaginary part of the eigenvalue).
Eigenpair dominant_mode(const Matrix2cd& a);

/// exp(i A dz) in closed form. Near-degenerate eigenvalues switch to a
/// series for sinh(d)/d so no eigenvector basis is ever inverted.
Matrix2cd transfer_matrix(const Matrix2cd& a, double dz);

}  // namespace vapor::beamprop
