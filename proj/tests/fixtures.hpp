#pragma once

#include <cmath>
#include <random>

#include "vapor/atom.hpp"
#include "vapor/calibration.hpp"
#include "vapor/susceptibility.hpp"

namespace fixture {

inline constexpr double kTwoPi = 6.283185307179586;
inline constexpr double kGammaD1 = kTwoPi * 5.75e6;
inline constexpr double kGammaD2 = kTwoPi * 6.07e6;
inline constexpr double kGamma31 = kGammaD1 / 4.0;
inline constexpr double kVth = 240.0;
inline constexpr double kDeltaK = 22.8;
inline constexpr double kWaist = 100e-6;

inline vapor::atom::LevelScheme rubidium_scheme() {
  vapor::atom::LevelScheme s;
  s.gamma31 = kGammaD1 / 4.0;
  s.gamma32 = kGammaD1 / 6.0;
  s.gamma41 = kGammaD2 / 4.0;
  s.gamma42 = kGammaD2 / 6.0;
  s.gamma51 = kGammaD1 / 12.0;
  s.gamma52 = kGammaD2 / 2.0;
  s.gamma21 = 0.001 * s.gamma31;
  return s;
}

inline vapor::atom::DriveConfig resonant_drive(double pump) {
  vapor::atom::DriveConfig d;
  d.omega_c1 = 1.55 * kGammaD1 / 6.0;
  d.omega_c2 = 1.43 * kGammaD2 / 6.0;
  d.pump_p = pump;
  return d;
}

/// Pumped set: n0 = 1.32e18, gamma_c = 1600 dk v_th, p = 0.7 Gamma31.
inline vapor::susceptibility::MediumParameters pumped_medium() {
  vapor::susceptibility::MediumParameters m;
  m.scheme = rubidium_scheme();
  m.drive = resonant_drive(0.7 * kGamma31);
  m.thermal.v_th = kVth;
  m.thermal.temperature = 300.0;
  m.thermal.delta_k = kDeltaK;
  m.thermal.gamma_c = 1600.0 * kDeltaK * kVth;
  m.thermal.n0 = 1.32e18;
  m.optics.lambda_p = 795e-9;
  m.optics.lambda_s = 780e-9;
  return m;
}

/// Unpumped set: n0 = 6.2e17, gamma_c = 30000 dk v_th, p = 0.
inline vapor::susceptibility::MediumParameters unpumped_medium() {
  auto m = pumped_medium();
  m.drive.pump_p = 0.0;
  m.thermal.gamma_c = 30000.0 * kDeltaK * kVth;
  m.thermal.n0 = 6.2e17;
  return m;
}

/// Every rate and Rabi frequency scaled by an independent factor in [0.5, 1.5].
inline vapor::susceptibility::MediumParameters jitter(vapor::susceptibility::MediumParameters m,
                                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> f(0.5, 1.5);
  auto& s = m.scheme;
  for (double* r : {&s.gamma31, &s.gamma32, &s.gamma41, &s.gamma42, &s.gamma51, &s.gamma52,
                    &s.gamma21, &m.drive.pump_p, &m.thermal.gamma_c}) {
    *r *= f(rng);
  }
  m.drive.omega_c1 *= f(rng);
  m.drive.omega_c2 *= f(rng);
  return m;
}

inline double rel(std::complex<double> a, std::complex<double> b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Steady state, optimal detuning (real K) and diffraction-flat density.
struct PreparedMedium {
  vapor::susceptibility::MediumParameters medium;
  double delta;
  double k1;
  vapor::susceptibility::SusceptibilityModel model;
};

inline PreparedMedium prepare(vapor::susceptibility::MediumParameters m, bool calibrate = true) {
  using namespace vapor::susceptibility;
  const auto rho = vapor::atom::solve_steady_state(m.scheme, m.drive);
  const double delta = optimal_detuning(m, KMode::RealPart);
  SusceptibilityModel model(rho, m, delta, k_factors(m, delta, KMode::RealPart));
  const double k1 = chi_dicke(rho, m, delta, KMode::RealPart).k1;
  if (calibrate) {
    const ChiProfile profile = [&model](double k) { return model.at(k); };
    const auto r = calibrate_density(profile, m.thermal.n0, m.optics, 0.1 * k1, m.thermal.n0);
    model = model.scaled(r.n0 / m.thermal.n0);
    m.thermal.n0 = r.n0;
  }
  return {m, delta, k1, model};
}

}  // namespace fixture
