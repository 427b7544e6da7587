#include "vapor/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vapor/beamprop.hpp"
#include "vapor/errors.hpp"

namespace vapor::cli {

using nlohmann::json;

namespace {

// Walks one JSON object, fills defaults into it and records every problem.
class Section {
 public:
  Section(json& node, std::string path, std::vector<std::string>& errors)
      : node_(node), path_(std::move(path)), errors_(errors) {
    if (!node_.is_object()) {
      errors_.push_back(path_ + " must be an object");
      valid_ = false;
    }
  }

  ~Section() {
    if (!valid_) return;
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) errors_.push_back("unknown key " + where(key));
    }
  }

  bool has(const std::string& key) const { return valid_ && node_.contains(key); }

  std::optional<double> number(const std::string& key, std::optional<double> fallback = {}) {
    seen_.insert(key);
    if (!valid_) return std::nullopt;
    if (!node_.contains(key)) {
      if (fallback) {
        node_[key] = *fallback;
        return fallback;
      }
      errors_.push_back("missing " + where(key));
      return std::nullopt;
    }
    const json& v = node_[key];
    if (!v.is_number()) {
      errors_.push_back(where(key) + " must be a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      errors_.push_back(where(key) + " must be finite");
      return std::nullopt;
    }
    return x;
  }

  double positive(const std::string& key, std::optional<double> fallback = {}) {
    const auto v = number(key, fallback);
    if (v && !(*v > 0.0)) errors_.push_back(where(key) + " must be > 0");
    return v.value_or(1.0);
  }

  double non_negative(const std::string& key, std::optional<double> fallback = {}) {
    const auto v = number(key, fallback);
    if (v && *v < 0.0) errors_.push_back(where(key) + " must be >= 0");
    return v.value_or(0.0);
  }

  double any(const std::string& key, std::optional<double> fallback = {}) {
    return number(key, fallback).value_or(0.0);
  }

  int integer(const std::string& key, std::optional<int> fallback, int min_value) {
    seen_.insert(key);
    if (!valid_) return min_value;
    if (!node_.contains(key)) {
      if (fallback) {
        node_[key] = *fallback;
        return *fallback;
      }
      errors_.push_back("missing " + where(key));
      return min_value;
    }
    const json& v = node_[key];
    if (!v.is_number_integer()) {
      errors_.push_back(where(key) + " must be an integer");
      return min_value;
    }
    const auto x = v.get<long long>();
    if (x < min_value) {
      errors_.push_back(where(key) + " must be >= " + std::to_string(min_value));
      return min_value;
    }
    return static_cast<int>(x);
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!valid_) return fallback;
    if (!node_.contains(key)) {
      node_[key] = fallback;
      return fallback;
    }
    if (!node_[key].is_boolean()) {
      errors_.push_back(where(key) + " must be true or false");
      return fallback;
    }
    return node_[key].get<bool>();
  }

  std::string choice(const std::string& key, const std::string& fallback,
                     std::initializer_list<const char*> allowed) {
    seen_.insert(key);
    if (!valid_) return fallback;
    if (!node_.contains(key)) {
      node_[key] = fallback;
      return fallback;
    }
    if (!node_[key].is_string()) {
      errors_.push_back(where(key) + " must be a string");
      return fallback;
    }
    const auto s = node_[key].get<std::string>();
    for (const char* a : allowed) {
      if (s == a) return s;
    }
    std::string msg = where(key) + " must be one of";
    for (const char* a : allowed) msg += std::string(" \"") + a + "\"";
    errors_.push_back(msg);
    return fallback;
  }

  std::optional<std::string> text(const std::string& key) {
    seen_.insert(key);
    if (!valid_) return std::nullopt;
    if (!node_.contains(key)) {
      errors_.push_back("missing " + where(key));
      return std::nullopt;
    }
    if (!node_[key].is_string()) {
      errors_.push_back(where(key) + " must be a string");
      return std::nullopt;
    }
    return node_[key].get<std::string>();
  }

  /// A Rabi frequency: a number or a [re, im] pair.
  cdouble complex(const std::string& key) {
    seen_.insert(key);
    if (!valid_) return 0.0;
    if (!node_.contains(key)) {
      errors_.push_back("missing " + where(key));
      return 0.0;
    }
    const json& v = node_[key];
    if (v.is_number()) return v.get<double>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return {v[0].get<double>(), v[1].get<double>()};
    }
    errors_.push_back(where(key) + " must be a number or [re, im]");
    return 0.0;
  }

  Section child(const std::string& key, bool create = false) {
    seen_.insert(key);
    if (valid_ && !node_.contains(key)) {
      if (create) {
        node_[key] = json::object();
      } else {
        errors_.push_back("missing section " + where(key));
      }
    }
    if (!valid_ || !node_.contains(key)) return Section(dummy_, where(key), errors_, false);
    return Section(node_[key], where(key), errors_);
  }

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  Section(json& node, std::string path, std::vector<std::string>& errors, bool)
      : node_(node), path_(std::move(path)), errors_(errors), valid_(false) {}

  json& node_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
  bool valid_ = true;
  json dummy_;
};

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError("configuration is empty", 1, 1);
  }
  try {
    return json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    msg << "syntax error at line " << line << ", column " << col << ": " << e.what();
    throw ParseError(msg.str(), line, col);
  }
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

double ScenarioConfig::reference_width() const {
  if (const auto* g = std::get_if<GaussianBeam>(&beam)) return g->w_p0;
  return std::get<ImageBeam>(beam).reference_width;
}

double ScenarioConfig::rayleigh_length() const {
  return beamprop::rayleigh_length(reference_width(), medium.optics.lambda_p);
}

ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("configuration root must be an object", 1, 1);

  std::vector<std::string> errors;
  ScenarioConfig cfg;
  {
    Section root(doc, "", errors);

    Section units = root.child("units");
    cfg.gamma31 = units.positive("gamma31");
    const double g = cfg.gamma31;

    {
      Section atom = root.child("atom");
      auto& s = cfg.medium.scheme;
      s.gamma31 = g;
      s.gamma32 = g * atom.non_negative("gamma32");
      s.gamma41 = g * atom.non_negative("gamma41");
      s.gamma42 = g * atom.non_negative("gamma42");
      s.gamma51 = g * atom.non_negative("gamma51");
      s.gamma52 = g * atom.non_negative("gamma52");
      s.gamma21 = g * atom.non_negative("gamma21");
    }
    {
      Section drive = root.child("drive");
      auto& d = cfg.medium.drive;
      d.omega_c1 = g * drive.complex("omega_c1");
      d.omega_c2 = g * drive.complex("omega_c2");
      d.delta_c1 = g * drive.any("delta_c1", 0.0);
      d.delta_c2 = g * drive.any("delta_c2", 0.0);
      d.pump_p = g * drive.non_negative("pump_p");
    }
    {
      Section th = root.child("thermal");
      auto& t = cfg.medium.thermal;
      if (th.has("temperature")) t.temperature = th.positive("temperature");
      if (th.has("mass_amu")) cfg.mass_amu = th.positive("mass_amu");
      if (th.has("v_th")) {
        t.v_th = th.positive("v_th");
      } else if (t.temperature && cfg.mass_amu) {
        t.v_th = susceptibility::ThermalParameters::thermal_velocity(
            *t.temperature, *cfg.mass_amu * kAtomicMassUnit);
      } else {
        errors.push_back("thermal.v_th is required unless temperature and mass_amu are given");
      }
      t.gamma_c = g * th.non_negative("gamma_c");
      t.delta_k = th.non_negative("delta_k", 0.0);
      t.n0 = th.positive("n0");
    }
    {
      Section tr = root.child("transitions");
      cfg.medium.optics.lambda_p = tr.positive("lambda_p");
      cfg.medium.optics.lambda_s = tr.positive("lambda_s");
    }
    {
      Section grid = root.child("grid");
      cfg.grid.nx = grid.integer("nx", std::nullopt, 1);
      cfg.grid.ny = grid.integer("ny", cfg.grid.nx, 1);
      cfg.grid.dx = grid.positive("dx");
      cfg.grid.dy = grid.positive("dy", cfg.grid.dx);
      if (!power_of_two(cfg.grid.nx)) errors.push_back("grid.nx must be a power of two");
      if (!power_of_two(cfg.grid.ny)) errors.push_back("grid.ny must be a power of two");
    }
    {
      Section beam = root.child("beam");
      const bool gaussian = beam.has("gaussian");
      const bool image = beam.has("image");
      if (gaussian == image) errors.push_back("beam must contain exactly one of gaussian, image");
      if (gaussian) {
        Section gs = beam.child("gaussian");
        GaussianBeam b;
        b.w_p0 = gs.positive("w_p0");
        b.amplitude = gs.positive("amplitude", 1.0);
        cfg.beam = b;
      }
      if (image) {
        Section is = beam.child("image");
        ImageBeam b;
        if (auto p = is.text("path")) {
          b.path = *p;
          if (b.path.is_relative() && !base_dir.empty()) b.path = base_dir / b.path;
        }
        if (is.has("threshold")) {
          const double th = is.any("threshold");
          if (!(th > 0.0 && th < 1.0)) errors.push_back("beam.image.threshold must be in (0, 1)");
          b.threshold = th;
        }
        b.width_scale = is.positive("width_scale");
        b.reference_width = is.positive("reference_width", 100e-6);
        if (!gaussian) cfg.beam = b;
      }
      if (!gaussian && !image) cfg.beam = GaussianBeam{};
    }
    {
      Section run = root.child("run", true);
      auto& r = cfg.run;
      r.medium = run.boolean("medium", true);
      r.z_total = run.non_negative("z_total", 1.0);
      r.steps = run.integer("steps", 100, 1);
      r.field_snapshots = run.integer("field_snapshots", 2, 0);
      const auto det = run.choice("detuning", "optimal", {"optimal", "explicit"});
      r.detuning_mode = det == "optimal" ? DetuningMode::Optimal : DetuningMode::Explicit;
      r.detuning = g * run.any("detuning_value", 0.0);
      const auto dens = run.choice("density", "explicit", {"explicit", "calibrated"});
      r.density_mode = dens == "calibrated" ? DensityMode::Calibrated : DensityMode::Explicit;
      r.calibration_k = run.positive("calibration_k", 0.1);
      const auto km = run.choice("k_factors", "real", {"real", "complex"});
      r.k_mode = km == "real" ? susceptibility::KMode::RealPart : susceptibility::KMode::Complex;
      r.table_samples = run.integer("table_samples", 4096, 8);
      r.susceptibility_points = run.integer("susceptibility_points", 201, 2);
      r.susceptibility_k_max = run.positive("susceptibility_k_max", 3.0);
      if (run.has("sweep")) {
        Section sw = run.child("sweep");
        SweepSpec s;
        s.pump_min = g * sw.non_negative("pump_min");
        s.pump_max = g * sw.non_negative("pump_max");
        s.points = sw.integer("points", 20, 2);
        if (s.pump_max < s.pump_min) errors.push_back("run.sweep.pump_max must be >= pump_min");
        r.sweep = s;
      }
    }
    {
      Section out = root.child("output", true);
      if (!out.has("directory")) doc["output"]["directory"] = "out";
      if (auto d = out.text("directory")) cfg.output_dir = *d;
    }
  }
  if (!errors.empty()) throw ValidationError(errors);
  if (auto* img = std::get_if<ImageBeam>(&cfg.beam)) {
    // Echo an absolute path so the config can be replayed from anywhere.
    img->path = std::filesystem::absolute(img->path).lexically_normal();
    doc["beam"]["image"]["path"] = img->path.string();
  }
  cfg.echo = doc;
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto base = path.parent_path();

  // A run_meta.json carries the resolved configuration under "config".
  if (path.filename() == "run_meta.json") {
    const json meta = parse_json(text);
    if (!meta.is_object() || !meta.contains("config")) {
      throw ParseError("run_meta.json has no config block", 1, 1);
    }
    return parse_config(meta["config"].dump(), base);
  }
  return parse_config(text, base);
}

}  // namespace vapor::cli
