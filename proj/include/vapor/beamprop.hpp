#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "vapor/calibration.hpp"
#include "vapor/coupled_modes.hpp"
#include "vapor/field.hpp"
#include "vapor/susceptibility.hpp"

namespace vapor::beamprop {

/// Radial table of chi(|k_perp|) on a uniform grid [0, k_max] with cubic
/// B-spline interpolation of each real and imaginary part.
class SusceptibilityTable {
 public:
  /// All susceptibilities identically zero, valid for any k.
  static SusceptibilityTable vacuum();
  static SusceptibilityTable build(const susceptibility::ChiProfile& chi, double k_max,
                                   int samples = 4096);

  bool is_vacuum() const { return vacuum_; }
  double k_max() const { return k_max_; }
  int samples() const { return samples_; }

  /// Throws TableRange beyond k_max.
  susceptibility::SusceptibilitySet at(double k_perp) const;

 private:
  struct Splines;
  bool vacuum_ = true;
  double k_max_ = 0.0;
  int samples_ = 0;
  std::shared_ptr<const Splines> splines_;
};

enum class PlanKind { Medium, Vacuum };

/// Per-mode transfer matrices T(k) = exp(i A(k) dz), same ordering as the field arrays.
struct PropagationPlan {
  TransverseGrid grid;
  double dz = 0.0;
  PlanKind kind = PlanKind::Vacuum;
  std::vector<Matrix2cd> transfer;
};

/// Table range is checked against the grid corner |k| before any work is done.
PropagationPlan build_plan(const TransverseGrid& grid, const SusceptibilityTable& table,
                           const susceptibility::OpticalTransitions& optics, double dz);

/// Called after every step with the position-space fields.
using StepObserver = std::function<void(int step, double z, const FieldPair& position)>;

/// Applies the plan `steps` times. The observer (optional) sees step 0 (input)
/// and every `stride`-th step plus the final one, all in position space.
/// Returns the final fields in position space.
FieldPair propagate(const FieldPair& input, const PropagationPlan& plan, int steps, int stride = 1,
                    const StepObserver& observer = {});

struct Snapshot {
  double z = 0.0;
  FieldPair fields;
};

/// Convenience wrapper that keeps every observed snapshot in memory.
std::vector<Snapshot> propagate_trajectory(const FieldPair& input, const PropagationPlan& plan,
                                           int steps, int stride = 1);

/// Omega_p = amplitude exp(-(x^2+y^2)/2w^2), Omega_s = 0, position space.
/// Throws BadGrid when the grid cannot resolve the beam.
FieldPair gaussian_input(const TransverseGrid& grid, double w_p0, double amplitude = 1.0);

double rayleigh_length(double w_p0, double lambda);

}  // namespace vapor::beamprop
