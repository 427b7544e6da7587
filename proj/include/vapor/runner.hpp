#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vapor/beamprop.hpp"
#include "vapor/calibration.hpp"
#include "vapor/diagnostics.hpp"
#include "vapor/scenario.hpp"

namespace vapor::cli {

/// Zeroth-order state and the susceptibility model built on it.
struct MediumSolution {
  susceptibility::MediumParameters medium;  ///< n0 as actually used
  atom::DensityMatrix state;
  double delta = 0.0;  ///< two-photon detuning, rad/s
  susceptibility::KFactors k;
  susceptibility::SusceptibilityModel model;
  susceptibility::DickeCoefficients dicke;
  susceptibility::BandwidthScales scales;
  std::optional<susceptibility::CalibrationResult> calibration;
};

/// Steady state, detuning, K factors and (optionally) the density calibration.
/// `fixed_n0` overrides both the configured density and calibration.
MediumSolution solve_medium(const ScenarioConfig& cfg,
                            const susceptibility::MediumParameters& medium,
                            std::optional<double> fixed_n0 = std::nullopt);
MediumSolution solve_medium(const ScenarioConfig& cfg);

struct MetricsRow {
  double z = 0.0;  ///< m
  double power_p = 0.0, power_s = 0.0;  ///< relative to the input probe power
  std::optional<double> width_p_fit, width_s_fit;  ///< m
  double width_p_rms = 0.0, width_s_rms = 0.0;    ///< m
  double peak_p = 0.0, peak_s = 0.0;              ///< relative to the input peak amplitude
};

struct PropagationResult {
  std::vector<MetricsRow> rows;
  std::optional<double> z_balance;  ///< m
  beamprop::FieldPair input;
  beamprop::FieldPair output;
};

using SnapshotSink = std::function<void(int step, double z, const beamprop::FieldPair&)>;

beamprop::FieldPair scenario_input(const ScenarioConfig& cfg, const beamprop::TransverseGrid& grid);

/// Propagates the configured beam; `medium == nullptr` means free space.
/// `steps` overrides run.steps when given.
PropagationResult propagate_scenario(const ScenarioConfig& cfg, const MediumSolution* medium,
                                     std::optional<int> steps = std::nullopt,
                                     const SnapshotSink& sink = {});

enum class Command { SteadyState, Susceptibility, Propagate, SweepPump, Calibrate };

const char* command_name(Command c);

/// Runs one command, writing artifacts under `out_dir`. Returns the process
/// exit code: 0 ok, 2 configuration error, 3 numerical failure. Failures also
/// leave error.json in `out_dir` and print the same JSON to stderr.
int run_command(Command command, const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Formats a double with 17 significant digits ("nan" for NaN).
std::string format_number(double v);

}  // namespace vapor::cli
