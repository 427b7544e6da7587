#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vapor/constants.hpp"

namespace vapor::beamprop {

/// Regular transverse grid. Positions are centered: x_j = (j - nx/2) dx.
/// Wavenumbers use FFT ordering: kx_j = 2 pi j/(nx dx), wrapped above nx/2.
struct TransverseGrid {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;
  std::vector<double> kx, ky;

  double x(int ix) const { return (ix - nx / 2) * dx; }
  double y(int iy) const { return (iy - ny / 2) * dy; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }

  double window_x() const { return nx * dx; }
  double window_y() const { return ny * dy; }
  double nyquist_x() const { return kPi / dx; }
  double nyquist_y() const { return kPi / dy; }
  /// Largest |k_perp| on the grid (the momentum-space corner).
  double k_max() const;
  double dkx() const { return kTwoPi / (nx * dx); }
  double dky() const { return kTwoPi / (ny * dy); }
};

TransverseGrid make_grid(int nx, int ny, double dx, double dy);

struct GridAdequacy {
  bool window_ok = true;     ///< window >= 8 beam widths
  bool sampling_ok = true;   ///< dx, dy <= w/8
  bool bandwidth_ok = true;  ///< Nyquist >= 4 k1 (only when k1 is supplied)
  std::vector<std::string> problems;

  bool ok() const { return window_ok && sampling_ok && bandwidth_ok; }
};

GridAdequacy check_grid(const TransverseGrid& grid, double beam_width,
                        std::optional<double> k1 = std::nullopt);

enum class Space { Position, Momentum };

using ComplexField = std::vector<cdouble>;  // row-major, index iy*nx + ix

struct FieldPair {
  TransverseGrid grid;
  Space space = Space::Position;
  ComplexField omega_p;
  ComplexField omega_s;
};

/// Sum |f|^2 dx dy in position space, or sum |f|^2 dkx dky/(4 pi^2) in momentum
/// space; the two agree for a transform pair.
double power(const ComplexField& f, const TransverseGrid& grid, Space space);

enum class Direction { ToMomentum, ToPosition };

/// Unitary 2D transform of both fields: F(k) = dx dy sum f(x) exp(-i k x).
/// Throws WrongSpace if the fields are not in the source space.
FieldPair transform(const FieldPair& fields, Direction direction);
void transform_in_place(FieldPair& fields, Direction direction);

}  // namespace vapor::beamprop
