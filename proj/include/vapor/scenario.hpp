#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "vapor/susceptibility.hpp"

// Scenario description. Rates are written in units of gamma31 and converted
// to rad/s with the `units.gamma31` anchor at parse time; lengths are SI.
namespace vapor::cli {

struct GridSpec {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;  ///< m
};

struct GaussianBeam {
  double w_p0 = 0.0;  ///< m
  double amplitude = 1.0;
};

struct ImageBeam {
  std::filesystem::path path;
  std::optional<double> threshold;  ///< binarize at this fraction of full scale
  double width_scale = 0.0;         ///< m per pixel
  double reference_width = 100e-6;  ///< m, sets the Rayleigh length
};

enum class DetuningMode { Explicit, Optimal };
enum class DensityMode { Explicit, Calibrated };

struct SweepSpec {
  double pump_min = 0.0;  ///< rad/s
  double pump_max = 0.0;
  int points = 20;
};

struct RunSpec {
  bool medium = true;
  double z_total = 1.0;  ///< in Rayleigh lengths
  int steps = 100;
  int field_snapshots = 2;  ///< evenly spaced field dumps including input and output
  DetuningMode detuning_mode = DetuningMode::Optimal;
  double detuning = 0.0;  ///< rad/s, used when explicit
  DensityMode density_mode = DensityMode::Explicit;
  double calibration_k = 0.1;  ///< probe wavenumber for calibration, in units of k1
  susceptibility::KMode k_mode = susceptibility::KMode::RealPart;
  int table_samples = 4096;
  int susceptibility_points = 201;
  double susceptibility_k_max = 3.0;  ///< in units of k1
  std::optional<SweepSpec> sweep;
};

struct ScenarioConfig {
  double gamma31 = 0.0;  ///< rad/s anchor for all rate inputs
  std::optional<double> mass_amu;
  susceptibility::MediumParameters medium;  ///< SI
  GridSpec grid;
  std::variant<GaussianBeam, ImageBeam> beam;
  RunSpec run;
  std::filesystem::path output_dir;

  /// Input document with defaults filled in; feeding it back reproduces this config.
  nlohmann::json echo;

  double reference_width() const;
  /// Rayleigh length of the reference width at the probe wavelength, m.
  double rayleigh_length() const;
};

/// Strict parser: malformed text raises ParseError (with line and column),
/// schema problems raise ValidationError listing every violation, including
/// unknown keys. Relative image paths resolve against `base_dir`.
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

/// Reads a config file, or the `config` block of a run_meta.json.
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace vapor::cli
