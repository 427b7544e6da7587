#pragma once

#include <span>
#include <vector>

#include "vapor/constants.hpp"

namespace vapor::doppler {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz). Relative accuracy ~1e-14 in
/// the closed upper half plane; the lower half plane uses the reflection
/// w(z) = 2 exp(-z^2) - w(-z).
cdouble faddeeva(cdouble z);

enum class KernelMethod {
  Faddeeva,      ///< closed form, valid for any line width
  GaussHermite,  ///< 64-node quadrature, only accurate for broad lines
};

/// G = integral of F(v) / (detuning - k v + i total_width) over the Maxwellian
/// F(v) = exp(-v^2/v_th^2) / (sqrt(pi) v_th) projected onto the wavevector.
/// Units: detuning and total_width in rad/s, k in 1/m, v_th in m/s; G in s.
cdouble doppler_kernel(double detuning, double k, double total_width, double v_th,
                       KernelMethod method = KernelMethod::Faddeeva);

/// Physicists' Gauss-Hermite rule for weight exp(-x^2) (Golub-Welsch).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite_rule(int order);

}  // namespace vapor::doppler
