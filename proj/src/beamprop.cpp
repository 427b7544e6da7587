#include "vapor/beamprop.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <sstream>

#include "vapor/errors.hpp"

namespace vapor::beamprop {

using susceptibility::Channel;
using susceptibility::SusceptibilitySet;
using susceptibility::kAllChannels;

struct SusceptibilityTable::Splines {
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  std::vector<Spline> re, im;  // one per channel
};

SusceptibilityTable SusceptibilityTable::vacuum() { return SusceptibilityTable{}; }

SusceptibilityTable SusceptibilityTable::build(const susceptibility::ChiProfile& chi, double k_max,
                                               int samples) {
  if (!(k_max > 0.0) || samples < 8) throw std::invalid_argument("bad susceptibility table range");
  const double h = k_max / (samples - 1);
  std::vector<SusceptibilitySet> values(samples);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < samples; ++i) values[i] = chi(i * h);

  auto splines = std::make_shared<Splines>();
  std::vector<double> re(samples), im(samples);
  for (Channel c : kAllChannels) {
    for (int i = 0; i < samples; ++i) {
      re[i] = values[i][c].real();
      im[i] = values[i][c].imag();
    }
    // chi is even in k_perp, so the slope at the origin vanishes.
    splines->re.emplace_back(re.begin(), re.end(), 0.0, h, 0.0);
    splines->im.emplace_back(im.begin(), im.end(), 0.0, h, 0.0);
  }

  SusceptibilityTable t;
  t.vacuum_ = false;
  t.k_max_ = k_max;
  t.samples_ = samples;
  t.splines_ = std::move(splines);
  return t;
}

SusceptibilitySet SusceptibilityTable::at(double k_perp) const {
  SusceptibilitySet out{};
  if (vacuum_) return out;
  if (k_perp < 0.0 || k_perp > k_max_ * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "|k| = " << k_perp << " outside susceptibility table [0, " << k_max_ << "]";
    throw TableRange(msg.str());
  }
  const double k = std::min(k_perp, k_max_);
  for (Channel c : kAllChannels) {
    const auto i = static_cast<std::size_t>(c);
    out[c] = cdouble(splines_->re[i](k), splines_->im[i](k));
  }
  return out;
}

PropagationPlan build_plan(const TransverseGrid& grid, const SusceptibilityTable& table,
                           const susceptibility::OpticalTransitions& optics, double dz) {
  if (!table.is_vacuum() && grid.k_max() > table.k_max()) {
    std::ostringstream msg;
    msg << "grid reaches |k| = " << grid.k_max() << " but the table stops at " << table.k_max();
    throw TableRange(msg.str());
  }
  PropagationPlan plan;
  plan.grid = grid;
  plan.dz = dz;
  plan.kind = table.is_vacuum() ? PlanKind::Vacuum : PlanKind::Medium;
  plan.transfer.resize(grid.size());
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double k = std::hypot(grid.kx[ix], grid.ky[iy]);
      const Matrix2cd a = propagation_matrix(k, table.at(k), optics);
      if (plan.kind == PlanKind::Vacuum) {
        // Diagonal exactly: no rounding leaks into the off-diagonal entries.
        Matrix2cd t = Matrix2cd::Zero();
        t(0, 0) = std::exp(kI * a(0, 0) * dz);
        t(1, 1) = std::exp(kI * a(1, 1) * dz);
        plan.transfer[grid.index(ix, iy)] = t;
      } else {
        plan.transfer[grid.index(ix, iy)] = transfer_matrix(a, dz);
      }
    }
  }
  return plan;
}

namespace {

void apply(const PropagationPlan& plan, FieldPair& f) {
  const auto n = static_cast<std::ptrdiff_t>(plan.transfer.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Matrix2cd& t = plan.transfer[i];
    const cdouble p = f.omega_p[i];
    const cdouble s = f.omega_s[i];
    f.omega_p[i] = t(0, 0) * p + t(0, 1) * s;
    f.omega_s[i] = t(1, 0) * p + t(1, 1) * s;
  }
}

}  // namespace

FieldPair propagate(const FieldPair& input, const PropagationPlan& plan, int steps, int stride,
                    const StepObserver& observer) {
  if (steps < 0) throw std::invalid_argument("number of steps must be >= 0");
  if (stride < 1) stride = 1;
  if (input.grid.nx != plan.grid.nx || input.grid.ny != plan.grid.ny) {
    throw BadGrid("field grid does not match the propagation plan");
  }
  FieldPair f = input;
  if (f.space == Space::Position) {
    if (observer) observer(0, 0.0, f);
    transform_in_place(f, Direction::ToMomentum);
  } else if (observer) {
    observer(0, 0.0, transform(f, Direction::ToPosition));
  }
  for (int step = 1; step <= steps; ++step) {
    apply(plan, f);
    if (observer && (step % stride == 0 || step == steps)) {
      observer(step, step * plan.dz, transform(f, Direction::ToPosition));
    }
  }
  transform_in_place(f, Direction::ToPosition);
  return f;
}

std::vector<Snapshot> propagate_trajectory(const FieldPair& input, const PropagationPlan& plan,
                                           int steps, int stride) {
  std::vector<Snapshot> out;
  propagate(input, plan, steps, stride,
            [&](int, double z, const FieldPair& f) { out.push_back({z, f}); });
  return out;
}

FieldPair gaussian_input(const TransverseGrid& grid, double w_p0, double amplitude) {
  const GridAdequacy adequacy = check_grid(grid, w_p0);
  if (!adequacy.window_ok || !adequacy.sampling_ok) {
    std::string msg = "grid cannot resolve the Gaussian beam:";
    for (const auto& p : adequacy.problems) msg += " " + p + ";";
    throw BadGrid(msg);
  }
  FieldPair f;
  f.grid = grid;
  f.space = Space::Position;
  f.omega_p.assign(grid.size(), 0.0);
  f.omega_s.assign(grid.size(), 0.0);
  const double inv = 1.0 / (2.0 * w_p0 * w_p0);
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double r2 = grid.x(ix) * grid.x(ix) + grid.y(iy) * grid.y(iy);
      f.omega_p[grid.index(ix, iy)] = amplitude * std::exp(-r2 * inv);
    }
  }
  return f;
}

double rayleigh_length(double w_p0, double lambda) { return kTwoPi * w_p0 * w_p0 / lambda; }

}  // namespace vapor::beamprop
