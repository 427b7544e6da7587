#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles/expm_series.hpp"
#include "oracles/rk4_propagation.hpp"
#include "vapor/beamprop.hpp"
#include "vapor/diagnostics.hpp"
#include "vapor/errors.hpp"

using namespace vapor;
using namespace vapor::beamprop;

namespace {

double field_norm(const ComplexField& f) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s);
}

double field_diff(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

double matrix_rel(const Matrix2cd& a, const Matrix2cd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

susceptibility::OpticalTransitions optics() { return fixture::pumped_medium().optics; }

const fixture::PreparedMedium& medium() {
  static const fixture::PreparedMedium m = fixture::prepare(fixture::pumped_medium());
  return m;
}

SusceptibilityTable medium_table(const TransverseGrid& g) {
  const auto& model = medium().model;
  return SusceptibilityTable::build([&model](double k) { return model.at(k); },
                                    1.5 * std::max(g.nyquist_x(), g.nyquist_y()));
}

}  // namespace

TEST_CASE("grid construction") {
  const auto g = make_grid(256, 256, 10e-6, 10e-6);
  CHECK(g.nyquist_x() == doctest::Approx(3.14159e5).epsilon(1e-5));
  CHECK(g.kx[1] == doctest::Approx(fixture::kTwoPi / (256 * 10e-6)));
  CHECK(g.kx[128] < 0.0);
  CHECK(g.kx[255] == doctest::Approx(-g.kx[1]));
  CHECK(g.x(128) == 0.0);
  CHECK_THROWS_AS(make_grid(255, 256, 10e-6, 10e-6), BadGrid);
  CHECK_THROWS_AS(make_grid(256, 256, 0.0, 10e-6), BadGrid);
  CHECK_THROWS_AS(make_grid(256, 256, 1e-6, -1.0), BadGrid);
}

TEST_CASE("512x512 grid resolves the reference beam") {
  const auto g = make_grid(512, 512, 12.5e-6, 12.5e-6);
  CHECK(g.window_x() == doctest::Approx(6.4e-3));
  CHECK(g.nyquist_x() == doctest::Approx(2.513e5).epsilon(1e-3));
  const auto a = check_grid(g, fixture::kWaist, medium().k1);
  CHECK(a.ok());
  CHECK_FALSE(check_grid(make_grid(32, 32, 12.5e-6, 12.5e-6), fixture::kWaist).ok());
  CHECK_FALSE(check_grid(make_grid(512, 512, 12.5e-6, 12.5e-6), fixture::kWaist, 1e5).ok());
}

TEST_CASE("transform is unitary") {
  const auto g = make_grid(128, 64, 20e-6, 25e-6);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  FieldPair f;
  f.grid = g;
  for (std::size_t i = 0; i < g.size(); ++i) {
    f.omega_p.emplace_back(n(rng), n(rng));
    f.omega_s.emplace_back(n(rng), n(rng));
  }
  const auto k = transform(f, Direction::ToMomentum);
  CHECK(k.space == Space::Momentum);
  for (auto [x, y] : {std::pair{&f.omega_p, &k.omega_p}, std::pair{&f.omega_s, &k.omega_s}}) {
    const double px = power(*x, g, Space::Position);
    const double pk = power(*y, g, Space::Momentum);
    CHECK(std::abs(px - pk) / px < 1e-12);
  }
  const auto back = transform(k, Direction::ToPosition);
  CHECK(field_diff(back.omega_p, f.omega_p) / field_norm(f.omega_p) < 1e-13);
  CHECK_THROWS_AS(transform(k, Direction::ToMomentum), WrongSpace);
  CHECK_THROWS_AS(transform(f, Direction::ToPosition), WrongSpace);
}

TEST_CASE("delta spike has a flat spectrum") {
  const auto g = make_grid(64, 64, 1e-5, 1e-5);
  FieldPair f;
  f.grid = g;
  f.omega_p.assign(g.size(), 0.0);
  f.omega_s.assign(g.size(), 0.0);
  f.omega_p[g.index(32, 32)] = 1.0;
  const auto k = transform(f, Direction::ToMomentum);
  for (const auto& v : k.omega_p) CHECK(std::abs(v) == doctest::Approx(g.dx * g.dy).epsilon(1e-14));
}

TEST_CASE("Gaussian transforms to a Gaussian of width 1/w") {
  const auto g = make_grid(512, 512, 12.5e-6, 12.5e-6);
  const double w = fixture::kWaist;
  const auto k = transform(gaussian_input(g, w), Direction::ToMomentum);
  double sum = 0.0, k2 = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double in = std::norm(k.omega_p[g.index(ix, iy)]);
      sum += in;
      k2 += in * (g.kx[ix] * g.kx[ix] + g.ky[iy] * g.ky[iy]);
    }
  }
  // intensity exp(-k^2 w^2) has <k^2> = 1/w^2 in two dimensions
  CHECK(std::sqrt(k2 / sum) * w == doctest::Approx(1.0).epsilon(1e-10));
  const double peak = std::abs(k.omega_p[0]);
  CHECK(peak == doctest::Approx(fixture::kTwoPi * w * w).epsilon(1e-10));
}

TEST_CASE("Gaussian input") {
  const auto g = make_grid(512, 512, 12.5e-6, 12.5e-6);
  const auto f = gaussian_input(g, fixture::kWaist, 2.0);
  const double pi = 3.14159265358979323846;
  CHECK(power(f.omega_p, g, Space::Position) ==
        doctest::Approx(pi * fixture::kWaist * fixture::kWaist * 4.0).epsilon(1e-3));
  CHECK(power(f.omega_s, g, Space::Position) == 0.0);
  CHECK(rayleigh_length(fixture::kWaist, 795e-9) == doctest::Approx(7.905e-2).epsilon(1e-3));
  CHECK_THROWS_AS(gaussian_input(make_grid(512, 512, 25e-6, 25e-6), fixture::kWaist), BadGrid);
  CHECK_THROWS_AS(gaussian_input(make_grid(32, 32, 12.5e-6, 12.5e-6), fixture::kWaist), BadGrid);
}

TEST_CASE("vacuum plan is pure diffraction") {
  const auto g = make_grid(64, 64, 12.5e-6, 12.5e-6);
  const double dz = 1e-3;
  const auto plan = build_plan(g, SusceptibilityTable::vacuum(), optics(), dz);
  CHECK(plan.kind == PlanKind::Vacuum);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const auto& t = plan.transfer[g.index(ix, iy)];
      const double k2 = g.kx[ix] * g.kx[ix] + g.ky[iy] * g.ky[iy];
      CHECK(t(0, 1) == 0.0);
      CHECK(t(1, 0) == 0.0);
      CHECK(std::abs(std::abs(t(0, 0)) - 1.0) < 1e-15);
      CHECK(std::abs(t(0, 0) - std::exp(-kI * k2 * dz / (2 * optics().k_p()))) < 1e-13);
      CHECK(std::abs(t(1, 1) - std::exp(-kI * k2 * dz / (2 * optics().k_s()))) < 1e-13);
    }
  }
}

TEST_CASE("closed-form transfer matrix") {
  SUBCASE("zero susceptibility") {
    for (double k : {0.0, 1e4, 2e5}) {
      const auto t = transfer_matrix(propagation_matrix(k, {}, optics()), 0.01);
      CHECK(std::abs(t(0, 1)) == 0.0);
      CHECK(std::abs(t(0, 0) - std::exp(-kI * k * k * 0.01 / (2 * optics().k_p()))) < 1e-13);
      CHECK(std::abs(t(1, 1) - std::exp(-kI * k * k * 0.01 / (2 * optics().k_s()))) < 1e-13);
    }
  }
  SUBCASE("no four-wave mixing decouples the fields") {
    auto chi = medium().model.at(2e4);
    chi.chi_sp = chi.chi_ps = 0.0;
    const auto t = transfer_matrix(propagation_matrix(2e4, chi, optics()), 0.01);
    CHECK(t(0, 1) == 0.0);
    CHECK(t(1, 0) == 0.0);
  }
  SUBCASE("degenerate eigenvalues") {
    Matrix2cd a = cdouble(3.0, 0.5) * Matrix2cd::Identity();
    a(0, 1) = 1e-14;
    CHECK(matrix_rel(transfer_matrix(a, 0.7), oracle::expm_series(kI * 0.7 * a)) < 1e-14);
    a(1, 0) = 2e-9;
    CHECK(matrix_rel(transfer_matrix(a, 0.7), oracle::expm_series(kI * 0.7 * a)) < 1e-13);
  }
  SUBCASE("matches the series exponential for 1000 random modes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> kdist(0.0, 3e5), zdist(1e-4, 0.08);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double k = kdist(rng);
      const double dz = zdist(rng);
      const Matrix2cd a = propagation_matrix(k, medium().model.at(k), optics());
      worst = std::max(worst, matrix_rel(transfer_matrix(a, dz), oracle::expm_series(kI * dz * a)));
    }
    CHECK(worst < 1e-10);
  }
  SUBCASE("semigroup") {
    for (double k : {0.0, 1e4, 5e4, 2e5}) {
      const Matrix2cd a = propagation_matrix(k, medium().model.at(k), optics());
      const Matrix2cd both = transfer_matrix(a, 0.03) * transfer_matrix(a, 0.02);
      CHECK(matrix_rel(both, transfer_matrix(a, 0.05)) < 1e-10);
    }
  }
}

TEST_CASE("susceptibility table") {
  const auto g = make_grid(512, 512, 12.5e-6, 12.5e-6);
  const auto table = medium_table(g);
  CHECK(table.k_max() >= g.k_max());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> kdist(0.0, table.k_max());
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double k = i < 100 ? 3.0 * medium().k1 * i / 100.0 : kdist(rng);
    const auto exact = medium().model.at(k);
    const auto approx = table.at(k);
    for (auto c : susceptibility::kAllChannels) {
      worst = std::max(worst, std::abs(exact[c] - approx[c]) / std::abs(exact[c]));
    }
  }
  INFO("worst relative interpolation error " << worst);
  CHECK(worst < 1e-8);
  CHECK_THROWS_AS(table.at(1.01 * table.k_max()), TableRange);
  const auto small = SusceptibilityTable::build([](double) { return susceptibility::SusceptibilitySet{}; }, 1e4);
  CHECK_THROWS_AS(build_plan(g, small, optics(), 1e-3), TableRange);
}

TEST_CASE("zero distance returns the input") {
  const auto g = make_grid(128, 128, 12.5e-6, 12.5e-6);
  const auto in = gaussian_input(g, 1.2e-4);
  const auto plan = build_plan(g, medium_table(g), optics(), 1e-3);
  const auto out = propagate(in, plan, 0);
  CHECK(out.space == Space::Position);
  CHECK(field_diff(out.omega_p, in.omega_p) / field_norm(in.omega_p) < 1e-15);
}

TEST_CASE("vacuum Gaussian follows the paraxial width law") {
  const auto g = make_grid(512, 512, 12.5e-6, 12.5e-6);
  const double w0 = fixture::kWaist;
  const double zr = rayleigh_length(w0, 795e-9);
  const auto in = gaussian_input(g, w0);
  const double p0 = power(in.omega_p, g, Space::Position);
  const auto plan = build_plan(g, SusceptibilityTable::vacuum(), optics(), zr / 10.0);
  const auto snaps = propagate_trajectory(in, plan, 10);
  REQUIRE(snaps.size() == 11);
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    const double z = snaps[i].z;
    const auto m = diagnostics::beam_metrics(snaps[i].fields.omega_p, g);
    const double expected = w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
    REQUIRE(m.width_fit);
    CHECK(std::abs(*m.width_fit / expected - 1.0) < 5e-3);
    CHECK(std::abs(m.power / p0 - 1.0) < 1e-12);
  }
  const auto last = diagnostics::beam_metrics(snaps.back().fields.omega_p, g);
  CHECK(std::abs(last.peak * last.peak - 0.5) < 0.5 * 5e-3);
}

TEST_CASE("propagation is step-size independent") {
  const auto g = make_grid(128, 128, 12.5e-6, 12.5e-6);
  const auto in = gaussian_input(g, 1.2e-4);
  const double z = 0.05;
  for (bool vacuum : {true, false}) {
    const auto table = vacuum ? SusceptibilityTable::vacuum() : medium_table(g);
    const auto one = propagate(in, build_plan(g, table, optics(), z), 1);
    const auto split = propagate(propagate(in, build_plan(g, table, optics(), 0.02), 1),
                                 build_plan(g, table, optics(), 0.03), 1);
    const auto many = propagate(in, build_plan(g, table, optics(), z / 50), 50);
    CHECK(field_diff(one.omega_p, split.omega_p) / field_norm(one.omega_p) < 1e-10);
    CHECK(field_diff(one.omega_s, split.omega_s) / field_norm(one.omega_p) < 1e-10);
    CHECK(field_diff(one.omega_p, many.omega_p) / field_norm(one.omega_p) < 1e-10);
  }
}

TEST_CASE("radially symmetric input stays symmetric") {
  const auto g = make_grid(128, 128, 12.5e-6, 12.5e-6);
  const auto in = gaussian_input(g, 1.2e-4);
  const auto out = propagate(in, build_plan(g, medium_table(g), optics(), 0.079), 1);
  for (const auto* f : {&out.omega_p, &out.omega_s}) {
    double asym = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const cdouble v = (*f)[g.index(ix, iy)];
        asym = std::max(asym, std::abs(v - (*f)[g.index(iy, ix)]));
        asym = std::max(asym, std::abs(v - (*f)[g.index((g.nx - ix) % g.nx, iy)]));
      }
    }
    CHECK(asym / field_norm(*f) < 1e-10);
  }
}

TEST_CASE("fields lock onto the dominant eigenmode") {
  const double zr = rayleigh_length(fixture::kWaist, 795e-9);
  const Matrix2cd a = propagation_matrix(0.0, medium().model.at(0.0), optics());
  const auto mode = dominant_mode(a);
  const Vector2cd v = transfer_matrix(a, zr) * Vector2cd(1.0, 0.0);
  const Vector2cd parallel = mode.vector * mode.vector.dot(v);
  CHECK((v - parallel).norm() / v.norm() < 0.05);
}

TEST_CASE("exact stepper matches fine RK4 integration") {
  const auto g = make_grid(128, 128, 12.5e-6, 12.5e-6);
  const double zr = rayleigh_length(fixture::kWaist, 795e-9);
  const auto in = gaussian_input(g, fixture::kWaist);
  const auto exact = propagate(in, build_plan(g, medium_table(g), optics(), zr), 1);
  const auto rk4 = oracle::rk4_propagate(in, &medium().model, optics(), zr, 4000);
  const double scale = field_norm(rk4.omega_p) + field_norm(rk4.omega_s);
  CHECK(field_diff(exact.omega_p, rk4.omega_p) / scale < 1e-6);
  CHECK(field_diff(exact.omega_s, rk4.omega_s) / scale < 1e-6);
}
