#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "vapor/errors.hpp"
#include "vapor/field.hpp"

namespace vapor::beamprop {

namespace {

// Plan creation in FFTW is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void fft2(ComplexField& data, int nx, int ny, int sign, double scale) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(ny, nx, buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  for (auto& v : data) v *= scale;
}

}  // namespace

void transform_in_place(FieldPair& fields, Direction direction) {
  const auto& g = fields.grid;
  const Space from = direction == Direction::ToMomentum ? Space::Position : Space::Momentum;
  if (fields.space != from) {
    throw WrongSpace(direction == Direction::ToMomentum ? "field is already in momentum space"
                                                        : "field is already in position space");
  }
  if (fields.omega_p.size() != g.size() || fields.omega_s.size() != g.size()) {
    throw WrongSpace("field array does not match its grid");
  }
  if (direction == Direction::ToMomentum) {
    const double scale = g.dx * g.dy;
    fft2(fields.omega_p, g.nx, g.ny, FFTW_FORWARD, scale);
    fft2(fields.omega_s, g.nx, g.ny, FFTW_FORWARD, scale);
    fields.space = Space::Momentum;
  } else {
    const double scale = 1.0 / (static_cast<double>(g.size()) * g.dx * g.dy);
    fft2(fields.omega_p, g.nx, g.ny, FFTW_BACKWARD, scale);
    fft2(fields.omega_s, g.nx, g.ny, FFTW_BACKWARD, scale);
    fields.space = Space::Position;
  }
}

FieldPair transform(const FieldPair& fields, Direction direction) {
  FieldPair out = fields;
  transform_in_place(out, direction);
  return out;
}

}  // namespace vapor::beamprop
