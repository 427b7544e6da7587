#include <doctest.h>

#include "fixtures.hpp"
#include "vapor/calibration.hpp"
#include "vapor/coupled_modes.hpp"
#include "vapor/errors.hpp"

using namespace vapor;
using namespace vapor::susceptibility;

namespace {

struct Calibrated {
  CalibrationResult result;
  double k1;
  SusceptibilityModel model;
};

Calibrated calibrate(const MediumParameters& m) {
  const auto rho = atom::solve_steady_state(m.scheme, m.drive);
  const double delta = optimal_detuning(m, KMode::RealPart);
  SusceptibilityModel model(rho, m, delta, k_factors(m, delta, KMode::RealPart));
  const double k1 = chi_dicke(rho, m, delta, KMode::RealPart).k1;
  const ChiProfile profile = [&model](double k) { return model.at(k); };
  const auto r = calibrate_density(profile, m.thermal.n0, m.optics, 0.1 * k1, m.thermal.n0);
  return {r, k1, model.scaled(r.n0 / m.thermal.n0)};
}

}  // namespace

TEST_CASE("vacuum flatness is the bare diffraction of one field") {
  const auto m = fixture::pumped_medium();
  const ChiProfile zero = [](double) { return SusceptibilitySet{}; };
  const double f = flatness(zero, 1.0, m.optics, 1e4);
  const double kbar = m.optics.k_mean();
  const bool probe = std::abs(f + kbar / m.optics.k_p()) < 1e-12;
  const bool signal = std::abs(f + kbar / m.optics.k_s()) < 1e-12;
  CHECK((probe || signal));
}

TEST_CASE("calibration needs a k-dependent response") {
  const auto m = fixture::pumped_medium();
  const auto rho = atom::solve_steady_state(m.scheme, m.drive);
  const SusceptibilityModel model(rho, m, 0.0, k_factors(m, 0.0, KMode::RealPart));
  const auto flat = model.at(0.0);
  const ChiProfile no_slope = [flat](double) { return flat; };
  CHECK_THROWS_AS(calibrate_density(no_slope, m.thermal.n0, m.optics, 2e3, m.thermal.n0), NoRoot);
}

TEST_CASE("calibrated density cancels diffraction") {
  const auto c = calibrate(fixture::pumped_medium());
  CHECK(std::abs(c.result.flatness_residual) < 1e-3);
  CHECK(c.result.n0 > 0.0);
}

TEST_CASE("calibrated density is close to the quoted pumped density") {
  const auto c = calibrate(fixture::pumped_medium());
  INFO("calibrated n0 = " << c.result.n0);
  CHECK(c.result.n0 > 1.32e18 / 1.5);
  CHECK(c.result.n0 < 1.32e18 * 1.5);
}

TEST_CASE("faster atoms need a different density") {
  auto m = fixture::pumped_medium();
  const double n_slow = calibrate(m).result.n0;
  m.thermal.v_th *= 2.0;
  const double n_fast = calibrate(m).result.n0;
  INFO("n0(v) = " << n_slow << ", n0(2v) = " << n_fast);
  CHECK(n_fast > n_slow);
}

TEST_CASE("diffraction stays cancelled across the central band") {
  const auto m = fixture::pumped_medium();
  const auto c = calibrate(m);
  const double kbar = m.optics.k_mean();
  const auto lambda0 = beamprop::dominant_mode(beamprop::propagation_matrix(0.0, c.model.at(0.0), m.optics)).value;
  double worst = 0.0;
  for (int i = 1; i <= 30; ++i) {
    const double k = 0.3 * c.k1 * i / 30.0;
    const auto lambda = beamprop::dominant_mode(beamprop::propagation_matrix(k, c.model.at(k), m.optics)).value;
    const double vacuum = k * k / (2.0 * kbar);
    worst = std::max(worst, std::abs((lambda - lambda0).real()) / vacuum);
  }
  INFO("worst residual phase relative to vacuum diffraction: " << worst);
  CHECK(worst < 1e-3);
}
