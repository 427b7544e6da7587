#include <algorithm>
#include <cmath>
#include <sstream>

#include "vapor/errors.hpp"
#include "vapor/field.hpp"

namespace vapor::beamprop {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> fft_wavenumbers(int n, double d) {
  std::vector<double> k(n);
  const double dk = kTwoPi / (n * d);
  for (int j = 0; j < n; ++j) k[j] = (j < n / 2 ? j : j - n) * dk;
  return k;
}

}  // namespace

double TransverseGrid::k_max() const { return std::hypot(nyquist_x(), nyquist_y()); }

TransverseGrid make_grid(int nx, int ny, double dx, double dy) {
  if (!power_of_two(nx) || !power_of_two(ny)) {
    std::ostringstream msg;
    msg << "grid size " << nx << "x" << ny << " is not a power of two";
    throw BadGrid(msg.str());
  }
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw BadGrid("grid spacing must be positive");
  }
  TransverseGrid g;
  g.nx = nx;
  g.ny = ny;
  g.dx = dx;
  g.dy = dy;
  g.kx = fft_wavenumbers(nx, dx);
  g.ky = fft_wavenumbers(ny, dy);
  return g;
}

GridAdequacy check_grid(const TransverseGrid& grid, double beam_width, std::optional<double> k1) {
  GridAdequacy a;
  std::ostringstream msg;
  if (std::min(grid.window_x(), grid.window_y()) < 8.0 * beam_width) {
    a.window_ok = false;
    msg << "window " << std::min(grid.window_x(), grid.window_y()) << " m is below 8 beam widths";
    a.problems.push_back(msg.str());
    msg.str("");
  }
  if (std::max(grid.dx, grid.dy) > beam_width / 8.0) {
    a.sampling_ok = false;
    msg << "spacing " << std::max(grid.dx, grid.dy) << " m exceeds beam width / 8";
    a.problems.push_back(msg.str());
    msg.str("");
  }
  if (k1 && std::min(grid.nyquist_x(), grid.nyquist_y()) < 4.0 * *k1) {
    a.bandwidth_ok = false;
    msg << "Nyquist " << std::min(grid.nyquist_x(), grid.nyquist_y()) << " 1/m is below 4 k1";
    a.problems.push_back(msg.str());
  }
  return a;
}

double power(const ComplexField& f, const TransverseGrid& grid, Space space) {
  double sum = 0.0;
  for (const auto& v : f) sum += std::norm(v);
  if (space == Space::Position) return sum * grid.dx * grid.dy;
  return sum * grid.dkx() * grid.dky() / (4.0 * kPi * kPi);
}

}  // namespace vapor::beamprop
