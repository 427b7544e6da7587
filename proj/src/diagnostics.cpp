#include "vapor/diagnostics.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "vapor/errors.hpp"

namespace vapor::diagnostics {

using beamprop::ComplexField;
using beamprop::TransverseGrid;

namespace {

constexpr double kMaxFitResidual = 0.2;

// Amplitude-only fit at fixed w; returns the squared relative residual.
double gaussian_residual2(const std::vector<double>& amp, const TransverseGrid& g, double cx,
                          double cy, double w) {
  const double inv = 1.0 / (2.0 * w * w);
  // The Gaussian is separable, so tabulate each axis once.
  std::vector<double> ex(g.nx), ey(g.ny);
  for (int ix = 0; ix < g.nx; ++ix) ex[ix] = std::exp(-(g.x(ix) - cx) * (g.x(ix) - cx) * inv);
  for (int iy = 0; iy < g.ny; ++iy) ey[iy] = std::exp(-(g.y(iy) - cy) * (g.y(iy) - cy) * inv);
  double sab = 0.0, sbb = 0.0, saa = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double b = ex[ix] * ey[iy];
      const double a = amp[g.index(ix, iy)];
      sab += a * b;
      sbb += b * b;
      saa += a * a;
    }
  }
  if (saa == 0.0 || sbb == 0.0) return 1.0;
  const double scale = sab / sbb;
  // Second pass instead of saa - scale*sab, which cancels near a perfect fit.
  double res = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double d = amp[g.index(ix, iy)] - scale * ex[ix] * ey[iy];
      res += d * d;
    }
  }
  return res / saa;
}

}  // namespace

std::vector<double> intensity(const ComplexField& field) {
  std::vector<double> out(field.size());
  std::transform(field.begin(), field.end(), out.begin(), [](cdouble v) { return std::norm(v); });
  return out;
}

BeamMetrics beam_metrics(const ComplexField& field, const TransverseGrid& g,
                         beamprop::Space space) {
  if (space != beamprop::Space::Position) throw WrongSpace("beam metrics need a position-space field");
  if (field.size() != g.size()) throw WrongSpace("field array does not match its grid");

  BeamMetrics m;
  double sum = 0.0, sx = 0.0, sy = 0.0;
  std::vector<double> amp(field.size());
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t i = g.index(ix, iy);
      const double in = std::norm(field[i]);
      amp[i] = std::sqrt(in);
      sum += in;
      sx += in * g.x(ix);
      sy += in * g.y(iy);
      m.peak = std::max(m.peak, amp[i]);
    }
  }
  m.power = sum * g.dx * g.dy;
  if (sum == 0.0) return m;

  m.centroid_x = sx / sum;
  m.centroid_y = sy / sum;
  double r2 = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double dy = g.y(iy) - m.centroid_y;
    for (int ix = 0; ix < g.nx; ++ix) {
      const double dx = g.x(ix) - m.centroid_x;
      r2 += std::norm(field[g.index(ix, iy)]) * (dx * dx + dy * dy);
    }
  }
  m.width_rms = std::sqrt(r2 / sum);

  // Search in units of the rms width; Brent's tolerance has an absolute floor.
  auto objective = [&](double u) {
    return gaussian_residual2(amp, g, m.centroid_x, m.centroid_y, u * m.width_rms);
  };
  const auto [u, residual2] = boost::math::tools::brent_find_minima(
      objective, 0.5, 2.0, std::numeric_limits<double>::digits / 2);
  const double w = u * m.width_rms;
  const double residual = std::sqrt(residual2);
  m.fit_residual = residual;
  if (residual <= kMaxFitResidual) m.width_fit = w;
  return m;
}

double balance_point(const std::vector<double>& z, const std::vector<double>& power_p,
                     const std::vector<double>& power_s, double z_rayleigh) {
  const std::size_t n = z.size();
  if (power_p.size() != n || power_s.size() != n) {
    throw std::invalid_argument("balance_point: trajectories differ in length");
  }
  if (n < 50) throw std::invalid_argument("balance_point: need at least 50 samples");
  if (std::all_of(power_s.begin(), power_s.end(), [](double v) { return v == 0.0; })) {
    throw NotReached("signal power is identically zero");
  }
  std::vector<double> ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(power_p[i] > 0.0)) throw NotReached("probe power vanishes; ratio undefined");
    ratio[i] = power_s[i] / power_p[i];
  }
  std::vector<double> slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    slope[i] = (ratio[hi] - ratio[lo]) / (z[hi] - z[lo]);
  }
  const double threshold = 0.05 / z_rayleigh;
  constexpr std::size_t kHold = 5;
  for (std::size_t i = 0; i + kHold < n; ++i) {
    bool holds = true;
    for (std::size_t j = i; j <= i + kHold && holds; ++j) holds = std::abs(slope[j]) < threshold;
    if (holds) return z[i];
  }
  throw NotReached("power ratio never settles");
}

FidelityReport image_fidelity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("image_fidelity: images differ in size");
  }
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double saa = 0.0, sbb = 0.0, sab = 0.0, raw_ab = 0.0, raw_bb = 0.0, raw_aa = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
    raw_ab += a[i] * b[i];
    raw_bb += b[i] * b[i];
    raw_aa += a[i] * a[i];
  }
  if (saa == 0.0 || sbb == 0.0) throw DegenerateImage("image has zero variance");
  FidelityReport r;
  r.correlation = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
  r.gain = raw_ab / raw_bb;
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - r.gain * b[i];
    err += d * d;
  }
  r.nrmse = std::sqrt(err / raw_aa);
  return r;
}

}  // namespace vapor::diagnostics
