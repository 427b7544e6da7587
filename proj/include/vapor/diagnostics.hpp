#pragma once

#include <optional>
#include <vector>

#include "vapor/field.hpp"

namespace vapor::diagnostics {

struct BeamMetrics {
  double power = 0.0;  ///< sum |Omega|^2 dx dy
  /// Amplitude 1/sqrt(e) radius of a least-squares radial Gaussian fit.
  /// Empty when the relative fit residual exceeds 20% (non-Gaussian profile).
  std::optional<double> width_fit;
  double width_rms = 0.0;  ///< sqrt(<r^2>) of the intensity about its centroid
  double peak = 0.0;       ///< max |Omega|
  double fit_residual = 0.0;
  double centroid_x = 0.0, centroid_y = 0.0;
};

/// Position-space field only; throws WrongSpace otherwise.
BeamMetrics beam_metrics(const beamprop::ComplexField& field, const beamprop::TransverseGrid& grid,
                         beamprop::Space space = beamprop::Space::Position);

/// First z where |d(P_s/P_p)/dz| < 0.05/z_R and stays so for the next five
/// samples. Needs >= 50 samples. Throws NotReached when that never happens or
/// when the ratio is undefined (P_p = 0 somewhere, or P_s identically 0).
double balance_point(const std::vector<double>& z, const std::vector<double>& power_p,
                     const std::vector<double>& power_s, double z_rayleigh);

struct FidelityReport {
  double correlation = 0.0;  ///< Pearson coefficient in [-1, 1]
  double nrmse = 0.0;        ///< ||a - g b|| / ||a|| with the least-squares gain g
  double gain = 0.0;
};

/// Compares two intensity images on the same grid. Throws DegenerateImage when
/// either has zero variance.
FidelityReport image_fidelity(const std::vector<double>& reference,
                              const std::vector<double>& candidate);

std::vector<double> intensity(const beamprop::ComplexField& field);

}  // namespace vapor::diagnostics
