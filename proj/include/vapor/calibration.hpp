#pragma once

#include <functional>

#include "vapor/susceptibility.hpp"

namespace vapor::susceptibility {

/// chi(k_perp) evaluated at some reference density; chi scales linearly in n0.
using ChiProfile = std::function<SusceptibilitySet(double k_perp)>;

struct CalibrationResult {
  double n0 = 0.0;                 ///< 1/m^3
  double flatness_residual = 0.0;  ///< relative, see flatness()
  double k_probe = 0.0;            ///< 1/m
};

/// Relative k_perp^2 curvature of the dominant propagation eigenvalue at
/// k_probe, measured against vacuum diffraction k^2/(2 k_mean):
///   Re[lambda(k_probe) - lambda(0)] / (k_probe^2 / 2 k_mean).
/// -1 in vacuum, 0 when the medium cancels diffraction.
double flatness(const ChiProfile& chi_at_reference, double density_scale,
                const OpticalTransitions& optics, double k_probe);

/// Density at which flatness() vanishes, searched in [n0_guess/100, 100 n0_guess].
/// Throws NoRoot when no sign change exists in the bracket.
CalibrationResult calibrate_density(const ChiProfile& chi_at_reference,
                                    double reference_density, const OpticalTransitions& optics,
                                    double k_probe, double n0_guess);

}  // namespace vapor::susceptibility
