#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles/lindblad_time.hpp"
#include "vapor/errors.hpp"

using namespace vapor;
using atom::DensityMatrix;

namespace {

void check_physical(const DensityMatrix& rho) {
  CHECK(rho.hermiticity_error() < 1e-12);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
  CHECK(rho.min_eigenvalue() > -1e-10);
}

double max_diff(const atom::Matrix5cd& a, const atom::Matrix5cd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("generator preserves the trace") {
  const auto l = atom::build_liouvillian(fixture::rubidium_scheme(),
                                         fixture::resonant_drive(0.7 * fixture::kGamma31));
  CHECK(l.trace_defect() < 1e-10);
  auto d = fixture::resonant_drive(0.3 * fixture::kGamma31);
  d.delta_c1 = 0.4 * fixture::kGamma31;
  d.delta_c2 = -0.2 * fixture::kGamma31;
  d.omega_c1 *= std::polar(1.0, 0.7);
  CHECK(atom::build_liouvillian(fixture::rubidium_scheme(), d).trace_defect() < 1e-10);
}

TEST_CASE("vectorization is column stacking") {
  atom::Matrix5cd m;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = cdouble(i, j);
  const auto v = atom::vectorize(m);
  CHECK(v(atom::vec_index(3, 1)) == m(3, 1));
  CHECK(v(6) == m(1, 1));
  CHECK(atom::unvectorize(v) == m);
}

TEST_CASE("without pump only the ground state is populated") {
  const auto rho = atom::solve_steady_state(fixture::rubidium_scheme(), fixture::resonant_drive(0.0));
  atom::Matrix5cd expected = atom::Matrix5cd::Zero();
  expected(0, 0) = 1.0;
  CHECK(max_diff(rho.matrix(), expected) < 1e-12);
  check_physical(rho);
}

TEST_CASE("with omega_c2 = 0 and p = 0 the state is diag(1,0,0,0,0)") {
  auto d = fixture::resonant_drive(0.0);
  d.omega_c2 = 0.0;
  const auto rho = atom::solve_steady_state(fixture::rubidium_scheme(), d);
  atom::Matrix5cd expected = atom::Matrix5cd::Zero();
  expected(0, 0) = 1.0;
  CHECK(max_diff(rho.matrix(), expected) < 1e-12);
}

TEST_CASE("undriven atom has two dark ground states") {
  // |2> has no decay channel, so rho_11 and rho_22 are both stationary.
  atom::DriveConfig d;
  CHECK_THROWS_AS(atom::solve_steady_state(fixture::rubidium_scheme(), d), DegenerateSteadyState);
}

TEST_CASE("resonant controls give imaginary rho23, rho24 and real rho34") {
  for (double p : {0.1, 0.7, 1.5}) {
    const auto rho = atom::solve_steady_state(fixture::rubidium_scheme(),
                                              fixture::resonant_drive(p * fixture::kGamma31));
    CHECK(std::abs(rho(2, 3).real()) < 1e-10);
    CHECK(std::abs(rho(2, 4).real()) < 1e-10);
    CHECK(std::abs(rho(3, 4).imag()) < 1e-10);
    CHECK(std::abs(rho(2, 3)) > 1e-4);
    check_physical(rho);
  }
}

TEST_CASE("null vector satisfies the steady-state equation") {
  const auto l = atom::build_liouvillian(fixture::rubidium_scheme(),
                                         fixture::resonant_drive(0.7 * fixture::kGamma31));
  const auto rho = atom::steady_state(l);
  CHECK(atom::steady_state_residual(l, rho) < 1e-10);
}

TEST_CASE("common control phase leaves populations unchanged") {
  const auto scheme = fixture::rubidium_scheme();
  auto d = fixture::resonant_drive(0.7 * fixture::kGamma31);
  const auto ref = atom::solve_steady_state(scheme, d);
  for (double phi : {0.3, 1.9, -2.5}) {
    auto rotated = d;
    rotated.omega_c1 *= std::polar(1.0, phi);
    rotated.omega_c2 *= std::polar(1.0, phi);
    const auto rho = atom::solve_steady_state(scheme, rotated);
    for (int i = 1; i <= 5; ++i) CHECK(std::abs(rho.population(i) - ref.population(i)) < 1e-12);
    // |rho_34| is a gauge invariant as well
    CHECK(std::abs(std::abs(rho(3, 4)) - std::abs(ref(3, 4))) < 1e-12);
  }
}

TEST_CASE("null space agrees with time integration for randomized parameters") {
  std::mt19937_64 rng(20240611);
  const auto base = fixture::pumped_medium();
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = fixture::jitter(base, rng);
    const auto l = atom::build_liouvillian(m.scheme, m.drive);
    const auto rho = atom::steady_state(l);
    check_physical(rho);
    const auto oracle_rho = oracle::integrate_to_steady_state(l);
    CHECK(max_diff(rho.matrix(), oracle_rho) < 1e-8);
  }
}

TEST_CASE("ground population falls monotonically with pump rate") {
  const auto scheme = fixture::rubidium_scheme();
  double previous = 2.0;
  for (int i = 0; i <= 20; ++i) {
    const double p = 2.0 * fixture::kGamma31 * i / 20.0;
    const auto l = atom::build_liouvillian(scheme, fixture::resonant_drive(p));
    const auto rho = atom::steady_state(l);
    CHECK(rho.population(1) < previous);
    previous = rho.population(1);
    if (i % 5 == 0) CHECK(max_diff(rho.matrix(), oracle::integrate_to_steady_state(l)) < 1e-8);
  }
}

TEST_CASE("pump yields the linewidths of the first-order coherences") {
  // rho_31 decays at p/2 + Gamma3/2: check the diagonal generator element.
  const auto scheme = fixture::rubidium_scheme();
  const double p = 0.7 * fixture::kGamma31;
  atom::DriveConfig d;
  d.pump_p = p;
  const auto l = atom::build_liouvillian(scheme, d);
  const auto entry = [&](int i, int j) {
    return -l.generator(atom::vec_index(i - 1, j - 1), atom::vec_index(i - 1, j - 1)).real() *
           l.rate_unit;
  };
  CHECK(entry(3, 1) == doctest::Approx(p / 2 + scheme.total3() / 2).epsilon(1e-12));
  CHECK(entry(4, 1) == doctest::Approx(p / 2 + scheme.total4() / 2).epsilon(1e-12));
  CHECK(entry(2, 1) == doctest::Approx(p / 2 + scheme.gamma21).epsilon(1e-12));
  CHECK(entry(4, 3) == doctest::Approx(scheme.total3() / 2 + scheme.total4() / 2).epsilon(1e-12));
}

TEST_CASE("invalid inputs are rejected") {
  auto s = fixture::rubidium_scheme();
  s.gamma42 = -1.0;
  CHECK_THROWS_AS(atom::build_liouvillian(s, fixture::resonant_drive(0.0)), std::invalid_argument);
  auto d = fixture::resonant_drive(-1.0);
  CHECK_THROWS_AS(atom::build_liouvillian(fixture::rubidium_scheme(), d), std::invalid_argument);
}
