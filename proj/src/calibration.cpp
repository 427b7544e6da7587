#include "vapor/calibration.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "vapor/coupled_modes.hpp"
#include "vapor/errors.hpp"

namespace vapor::susceptibility {

namespace {

SusceptibilitySet scale(const SusceptibilitySet& chi, double factor) {
  SusceptibilitySet out;
  for (Channel c : kAllChannels) out[c] = chi[c] * factor;
  return out;
}

}  // namespace

double flatness(const ChiProfile& chi_at_reference, double density_scale,
                const OpticalTransitions& optics, double k_probe) {
  const auto a0 =
      beamprop::propagation_matrix(0.0, scale(chi_at_reference(0.0), density_scale), optics);
  const auto a1 = beamprop::propagation_matrix(
      k_probe, scale(chi_at_reference(k_probe), density_scale), optics);
  const cdouble shift = beamprop::dominant_mode(a1).value - beamprop::dominant_mode(a0).value;
  const double vacuum = k_probe * k_probe / (2.0 * optics.k_mean());
  return shift.real() / vacuum;
}

CalibrationResult calibrate_density(const ChiProfile& chi_at_reference,
                                    double reference_density, const OpticalTransitions& optics,
                                    double k_probe, double n0_guess) {
  const double lo = n0_guess / 100.0;
  const double hi = n0_guess * 100.0;
  auto f = [&](double n0) {
    return flatness(chi_at_reference, n0 / reference_density, optics, k_probe);
  };

  // Scan geometrically and accept the first bracketed root that is a genuine
  // zero (the dominant eigenvalue may switch branches and jump across zero).
  constexpr int kScan = 96;
  double x0 = lo;
  double f0 = f(x0);
  for (int i = 1; i <= kScan; ++i) {
    const double x1 = lo * std::pow(hi / lo, static_cast<double>(i) / kScan);
    const double f1 = f(x1);
    if (f0 == 0.0) return {x0, 0.0, k_probe};
    if ((f0 < 0.0) != (f1 < 0.0)) {
      std::uintmax_t max_iter = 200;
      const auto tol = boost::math::tools::eps_tolerance<double>(50);
      const auto [a, b] = boost::math::tools::toms748_solve(f, x0, x1, f0, f1, tol, max_iter);
      const double root = 0.5 * (a + b);
      const double residual = f(root);
      if (std::abs(residual) < 1e-3) return {root, residual, k_probe};
    }
    x0 = x1;
    f0 = f1;
  }
  std::ostringstream msg;
  msg << "no diffraction-flat density in [" << lo << ", " << hi << "] m^-3";
  throw NoRoot(msg.str());
}

}  // namespace vapor::susceptibility
