#include "vapor/runner.hpp"

#include <fftw3.h>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iostream>

#include "vapor/errors.hpp"
#include "vapor/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vapor::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using susceptibility::Channel;
using susceptibility::kAllChannels;

namespace {

constexpr const char* kVersion = "1.0.0";

json complex_json(cdouble v) { return json::array({v.real(), v.imag()}); }

json chi_json(const susceptibility::SusceptibilitySet& s) {
  json out = json::object();
  for (Channel c : kAllChannels) out[susceptibility::channel_name(c)] = complex_json(s[c]);
  return out;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::ofstream open_text(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

json versions() {
  return {{"vaporsim", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
          {"fftw", std::string(fftw_version)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

json state_json(const atom::DensityMatrix& rho) {
  json entries = json::array();
  for (int i = 1; i <= 5; ++i) {
    json row = json::array();
    for (int j = 1; j <= 5; ++j) row.push_back(complex_json(rho(i, j)));
    entries.push_back(row);
  }
  json pops = json::array();
  for (int i = 1; i <= 5; ++i) pops.push_back(rho.population(i));
  return {{"rho", entries},
          {"populations", pops},
          {"hermiticity_error", rho.hermiticity_error()},
          {"trace", complex_json(rho.trace())},
          {"min_eigenvalue", rho.min_eigenvalue()}};
}

json medium_json(const ScenarioConfig& cfg, const MediumSolution& m) {
  const auto& md = m.medium;
  const double g = cfg.gamma31;
  json j;
  j["gamma31"] = g;
  j["scheme_si"] = {{"gamma31", md.scheme.gamma31}, {"gamma32", md.scheme.gamma32},
                    {"gamma41", md.scheme.gamma41}, {"gamma42", md.scheme.gamma42},
                    {"gamma51", md.scheme.gamma51}, {"gamma52", md.scheme.gamma52},
                    {"gamma21", md.scheme.gamma21}};
  j["drive_si"] = {{"omega_c1", complex_json(md.drive.omega_c1)},
                   {"omega_c2", complex_json(md.drive.omega_c2)},
                   {"delta_c1", md.drive.delta_c1},
                   {"delta_c2", md.drive.delta_c2},
                   {"pump_p", md.drive.pump_p}};
  j["thermal_si"] = {{"v_th", md.thermal.v_th},
                     {"gamma_c", md.thermal.gamma_c},
                     {"delta_k", md.thermal.delta_k},
                     {"n0", md.thermal.n0}};
  if (md.thermal.temperature) j["thermal_si"]["temperature"] = *md.thermal.temperature;
  j["n0_configured"] = cfg.medium.thermal.n0;
  j["n0_used"] = md.thermal.n0;
  if (m.calibration) {
    j["calibration"] = {{"n0", m.calibration->n0},
                        {"flatness_residual", m.calibration->flatness_residual},
                        {"k_probe", m.calibration->k_probe}};
  }
  j["delta"] = m.delta;
  j["delta_over_gamma31"] = m.delta / g;
  j["delta_opt"] = m.dicke.delta_opt;
  j["alpha"] = m.dicke.alpha;
  j["k1"] = m.dicke.k1;
  j["bandwidth"] = {{"k0", m.scales.k0}, {"k1", m.scales.k1}};
  j["dicke_ratio"] = md.thermal.dicke_ratio(md.drive.pump_p);
  j["dicke_warning"] = md.thermal.dicke_warning(md.drive.pump_p);
  j["k_factors"] = {{"g31", complex_json(m.k.g31)},
                    {"g41", complex_json(m.k.g41)},
                    {"k31", complex_json(m.k.k31)},
                    {"k41", complex_json(m.k.k41)},
                    {"real_part_only", m.k.real_part_only},
                    {"dropped31", m.k.dropped31},
                    {"dropped41", m.k.dropped41}};
  j["gamma1"] = complex_json(m.model.rates().gamma1);
  j["gamma_c1"] = m.model.rates().gamma_c1;
  j["chi0"] = chi_json(m.dicke.chi0);
  j["chi1"] = chi_json(m.dicke.chi1);
  return j;
}

json row_json(const MetricsRow& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"z", r.z},
          {"P_p", r.power_p},
          {"P_s", r.power_s},
          {"w_p_fit", opt(r.width_p_fit)},
          {"w_s_fit", opt(r.width_s_fit)},
          {"w_p_rms", r.width_p_rms},
          {"w_s_rms", r.width_s_rms},
          {"peak_p", r.peak_p},
          {"peak_s", r.peak_s}};
}

void write_metrics_csv(const fs::path& path, const std::vector<MetricsRow>& rows) {
  auto out = open_text(path);
  out << "z,P_p,P_s,w_p_fit,w_s_fit,w_p_rms,w_s_rms,peak_p,peak_s\n";
  auto opt = [](const std::optional<double>& v) { return format_number(v ? *v : std::nan("")); };
  for (const auto& r : rows) {
    out << format_number(r.z) << ',' << format_number(r.power_p) << ','
        << format_number(r.power_s) << ',' << opt(r.width_p_fit) << ',' << opt(r.width_s_fit)
        << ',' << format_number(r.width_p_rms) << ',' << format_number(r.width_s_rms) << ','
        << format_number(r.peak_p) << ',' << format_number(r.peak_s) << '\n';
  }
}

void write_susceptibility_csv(const fs::path& path, const ScenarioConfig& cfg,
                              const MediumSolution& m) {
  auto out = open_text(path);
  out << "k_perp,k_over_k1";
  for (Channel c : kAllChannels) {
    const char* n = susceptibility::channel_name(c);
    out << ",re_chi_" << n << ",im_chi_" << n;
  }
  out << '\n';
  const int n = cfg.run.susceptibility_points;
  const double k_end = cfg.run.susceptibility_k_max * m.dicke.k1;
  for (int i = 0; i < n; ++i) {
    const double k = k_end * i / (n - 1);
    const auto chi = m.model.at(k);
    out << format_number(k) << ',' << format_number(k / m.dicke.k1);
    for (Channel c : kAllChannels) {
      out << ',' << format_number(chi[c].real()) << ',' << format_number(chi[c].imag());
    }
    out << '\n';
  }
}

json base_meta(Command command, const ScenarioConfig& cfg) {
  return {{"command", command_name(command)},
          {"config", cfg.echo},
          {"versions", versions()},
          {"threads", thread_count()}};
}

void dump_snapshot(const fs::path& dir, int index, double z, double z_r,
                   const beamprop::FieldPair& f, double full_scale) {
  char tag[32];
  std::snprintf(tag, sizeof tag, "snap_%03d", index);
  const json extra = {{"z", z}, {"z_over_zR", z / z_r}};
  for (const auto& [name, field] : {std::pair<const char*, const beamprop::ComplexField*>{
                                        "probe", &f.omega_p},
                                    {"signal", &f.omega_s}}) {
    const std::string stem = std::string(tag) + "_" + name;
    json e = extra;
    e["field"] = name;
    io::write_field(dir / stem, *field, f.grid, beamprop::Space::Position, e);
    io::write_intensity_pgm(dir / (stem + ".pgm"), *field, f.grid, full_scale);
  }
}


}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

const char* command_name(Command c) {
  switch (c) {
    case Command::SteadyState: return "steady-state";
    case Command::Susceptibility: return "susceptibility";
    case Command::Propagate: return "propagate";
    case Command::SweepPump: return "sweep-pump";
    case Command::Calibrate: return "calibrate";
  }
  return "?";
}

MediumSolution solve_medium(const ScenarioConfig& cfg,
                            const susceptibility::MediumParameters& medium_in,
                            std::optional<double> fixed_n0) {
  using namespace susceptibility;
  MediumParameters medium = medium_in;
  if (fixed_n0) medium.thermal.n0 = *fixed_n0;
  medium.validate();
  const KMode mode = cfg.run.k_mode;

  const atom::DensityMatrix state = atom::solve_steady_state(medium.scheme, medium.drive);
  const double delta = cfg.run.detuning_mode == DetuningMode::Optimal
                           ? optimal_detuning(medium, mode)
                           : cfg.run.detuning;
  const KFactors k = k_factors(medium, delta, mode);
  SusceptibilityModel model(state, medium, delta, k);
  DickeCoefficients dicke = chi_dicke(state, medium, delta, mode);
  const BandwidthScales scales = bandwidth_scales(medium, k);

  std::optional<CalibrationResult> calibration;
  if (!fixed_n0 && cfg.run.density_mode == DensityMode::Calibrated) {
    const double n_ref = medium.thermal.n0;
    const ChiProfile profile = [&model](double kp) { return model.at(kp); };
    calibration = calibrate_density(profile, n_ref, medium.optics,
                                    cfg.run.calibration_k * dicke.k1, n_ref);
    const double factor = calibration->n0 / n_ref;
    model = model.scaled(factor);
    for (Channel c : kAllChannels) {
      dicke.chi0[c] *= factor;
      dicke.chi1[c] *= factor;
    }
    medium.thermal.n0 = calibration->n0;
  }
  return MediumSolution{medium, state, delta, k, model, dicke, scales, calibration};
}

MediumSolution solve_medium(const ScenarioConfig& cfg) { return solve_medium(cfg, cfg.medium); }

beamprop::FieldPair scenario_input(const ScenarioConfig& cfg, const beamprop::TransverseGrid& grid) {
  if (const auto* g = std::get_if<GaussianBeam>(&cfg.beam)) {
    return beamprop::gaussian_input(grid, g->w_p0, g->amplitude);
  }
  const auto& im = std::get<ImageBeam>(cfg.beam);
  return io::load_image(im.path, grid, im.width_scale, im.threshold);
}

PropagationResult propagate_scenario(const ScenarioConfig& cfg, const MediumSolution* medium,
                                     std::optional<int> steps_override, const SnapshotSink& sink) {
  const auto grid = beamprop::make_grid(cfg.grid.nx, cfg.grid.ny, cfg.grid.dx, cfg.grid.dy);
  PropagationResult result;
  result.input = scenario_input(cfg, grid);

  const int steps = steps_override.value_or(cfg.run.steps);
  const double z_r = cfg.rayleigh_length();
  const double dz = cfg.run.z_total * z_r / steps;

  beamprop::SusceptibilityTable table = beamprop::SusceptibilityTable::vacuum();
  if (medium) {
    const auto& model = medium->model;
    const double k_max = 1.5 * std::max(grid.nyquist_x(), grid.nyquist_y());
    table = beamprop::SusceptibilityTable::build([&model](double k) { return model.at(k); }, k_max,
                                                 cfg.run.table_samples);
  }
  const auto plan = beamprop::build_plan(grid, table, cfg.medium.optics, dz);

  const double p0 = beamprop::power(result.input.omega_p, grid, beamprop::Space::Position);
  double a0 = 0.0;
  for (const auto& v : result.input.omega_p) a0 = std::max(a0, std::abs(v));
  if (!(p0 > 0.0)) throw DegenerateImage("input probe field is zero");

  auto observer = [&](int step, double z, const beamprop::FieldPair& f) {
    diagnostics::BeamMetrics mp, ms;
#pragma omp parallel sections
    {
#pragma omp section
      mp = diagnostics::beam_metrics(f.omega_p, f.grid);
#pragma omp section
      ms = diagnostics::beam_metrics(f.omega_s, f.grid);
    }
    MetricsRow r;
    r.z = z;
    r.power_p = mp.power / p0;
    r.power_s = ms.power / p0;
    r.width_p_fit = mp.width_fit;
    r.width_s_fit = ms.width_fit;
    r.width_p_rms = mp.width_rms;
    r.width_s_rms = ms.width_rms;
    r.peak_p = mp.peak / a0;
    r.peak_s = ms.peak / a0;
    result.rows.push_back(r);
    if (sink) sink(step, z, f);
  };
  result.output = beamprop::propagate(result.input, plan, steps, 1, observer);

  if (medium && result.rows.size() >= 50) {
    std::vector<double> z, pp, ps;
    for (const auto& r : result.rows) {
      z.push_back(r.z);
      pp.push_back(r.power_p);
      ps.push_back(r.power_s);
    }
    try {
      result.z_balance = diagnostics::balance_point(z, pp, ps, z_r);
    } catch (const NotReached&) {
    }
  }
  return result;
}

namespace {

void run_steady_state(const ScenarioConfig& cfg, const fs::path& out) {
  const auto state = atom::solve_steady_state(cfg.medium.scheme, cfg.medium.drive);
  const auto l = atom::build_liouvillian(cfg.medium.scheme, cfg.medium.drive);
  json j = state_json(state);
  j["residual"] = atom::steady_state_residual(l, state);
  j["pump_over_gamma31"] = cfg.medium.drive.pump_p / cfg.gamma31;
  write_json(out / "steady_state.json", j);
  write_json(out / "run_meta.json", base_meta(Command::SteadyState, cfg));
}

void run_susceptibility(const ScenarioConfig& cfg, const fs::path& out) {
  const auto m = solve_medium(cfg);
  write_json(out / "steady_state.json", state_json(m.state));
  write_susceptibility_csv(out / "susceptibility.csv", cfg, m);
  json meta = base_meta(Command::Susceptibility, cfg);
  meta["resolved"] = medium_json(cfg, m);
  write_json(out / "run_meta.json", meta);
}

void run_calibrate(const ScenarioConfig& cfg, const fs::path& out) {
  ScenarioConfig c = cfg;
  c.run.density_mode = DensityMode::Calibrated;
  const auto m = solve_medium(c);
  json j = {{"n0", m.calibration->n0},
            {"n0_guess", cfg.medium.thermal.n0},
            {"flatness_residual", m.calibration->flatness_residual},
            {"k_probe", m.calibration->k_probe},
            {"k1", m.dicke.k1}};
  write_json(out / "calibration.json", j);
  json meta = base_meta(Command::Calibrate, cfg);
  meta["resolved"] = medium_json(cfg, m);
  write_json(out / "run_meta.json", meta);
}

void run_propagate(const ScenarioConfig& cfg, const fs::path& out) {
  json meta = base_meta(Command::Propagate, cfg);
  std::optional<MediumSolution> m;
  if (cfg.run.medium) {
    m = solve_medium(cfg);
    meta["resolved"] = medium_json(cfg, *m);
    write_json(out / "steady_state.json", state_json(m->state));
    write_susceptibility_csv(out / "susceptibility.csv", cfg, *m);
  }
  const double z_r = cfg.rayleigh_length();
  const int steps = cfg.run.steps;
  const int dumps = cfg.run.field_snapshots;
  std::vector<int> dump_steps;
  for (int i = 0; i < dumps; ++i) {
    dump_steps.push_back(dumps == 1 ? steps
                                    : static_cast<int>(std::lround(double(i) * steps / (dumps - 1))));
  }
  const fs::path field_dir = out / "fields";
  if (dumps > 0) fs::create_directories(field_dir);

  double full_scale = 0.0;
  int dump_index = 0;
  auto sink = [&](int step, double z, const beamprop::FieldPair& f) {
    if (step == 0) {
      for (const auto& v : f.omega_p) full_scale = std::max(full_scale, std::norm(v));
    }
    if (std::find(dump_steps.begin(), dump_steps.end(), step) != dump_steps.end()) {
      dump_snapshot(field_dir, dump_index++, z, z_r, f, full_scale);
    }
  };
  const auto result = propagate_scenario(cfg, m ? &*m : nullptr, std::nullopt, sink);
  write_metrics_csv(out / "metrics.csv", result.rows);

  json res;
  res["z_rayleigh"] = z_r;
  res["dz"] = cfg.run.z_total * z_r / steps;
  res["reference_width"] = cfg.reference_width();
  res["final"] = row_json(result.rows.back());
  res["z_balance"] = result.z_balance ? json(*result.z_balance) : json(nullptr);
  if (result.z_balance) res["z_balance_over_zR"] = *result.z_balance / z_r;

  if (std::holds_alternative<ImageBeam>(cfg.beam)) {
    const auto ref = diagnostics::intensity(result.input.omega_p);
    json fid;
    auto report = [&](const beamprop::ComplexField& f) {
      const auto r = diagnostics::image_fidelity(ref, diagnostics::intensity(f));
      return json{{"correlation", r.correlation}, {"nrmse", r.nrmse}};
    };
    fid[m ? "medium_probe" : "vacuum_probe"] = report(result.output.omega_p);
    if (m) {
      fid["medium_signal"] = report(result.output.omega_s);
      const auto ps = diagnostics::image_fidelity(diagnostics::intensity(result.output.omega_p),
                                                  diagnostics::intensity(result.output.omega_s));
      fid["probe_vs_signal"] = {{"correlation", ps.correlation}, {"nrmse", ps.nrmse}};
      // Free-space reference over the same distance.
      ScenarioConfig vac = cfg;
      vac.run.medium = false;
      const auto v = propagate_scenario(vac, nullptr, 1);
      fid["vacuum_probe"] = report(v.output.omega_p);
    }
    write_json(out / "fidelity.json", fid);
    res["fidelity"] = fid;
  }
  meta["results"] = res;
  write_json(out / "run_meta.json", meta);
}

void run_sweep(const ScenarioConfig& cfg, const fs::path& out) {
  SweepSpec sweep = cfg.run.sweep.value_or(SweepSpec{0.0, 2.0 * cfg.gamma31, 20});
  // Density is fixed once, at the configured pump rate.
  const MediumSolution base = solve_medium(cfg);
  const double n0 = base.medium.thermal.n0;

  auto csv = open_text(out / "sweep.csv");
  csv << "p_over_gamma31,p,delta,k1,P_p,P_s,w_p_fit,w_s_fit,w_p_rms,w_s_rms,peak_p,peak_s\n";
  json points = json::array();
  for (int i = 0; i < sweep.points; ++i) {
    const double p = sweep.pump_min + (sweep.pump_max - sweep.pump_min) * i / (sweep.points - 1);
    auto medium = cfg.medium;
    medium.drive.pump_p = p;
    const MediumSolution m = solve_medium(cfg, medium, n0);
    // The medium is z-invariant, so one exact step reaches the output plane.
    const auto r = propagate_scenario(cfg, &m, 1);
    const MetricsRow& f = r.rows.back();
    auto opt = [](const std::optional<double>& v) { return format_number(v ? *v : std::nan("")); };
    csv << format_number(p / cfg.gamma31) << ',' << format_number(p) << ','
        << format_number(m.delta) << ',' << format_number(m.dicke.k1) << ','
        << format_number(f.power_p) << ',' << format_number(f.power_s) << ','
        << opt(f.width_p_fit) << ',' << opt(f.width_s_fit) << ',' << format_number(f.width_p_rms)
        << ',' << format_number(f.width_s_rms) << ',' << format_number(f.peak_p) << ','
        << format_number(f.peak_s) << '\n';
    json pt = row_json(f);
    pt["p"] = p;
    pt["delta"] = m.delta;
    pt["k1"] = m.dicke.k1;
    points.push_back(pt);
  }
  json meta = base_meta(Command::SweepPump, cfg);
  meta["resolved"] = medium_json(cfg, base);
  meta["results"] = {{"n0", n0}, {"points", points}};
  write_json(out / "run_meta.json", meta);
}

}  // namespace

int run_command(Command command, const ScenarioConfig& cfg, const fs::path& out_dir) {
  try {
    fs::create_directories(out_dir);
    fs::remove(out_dir / "error.json");
    switch (command) {
      case Command::SteadyState: run_steady_state(cfg, out_dir); break;
      case Command::Susceptibility: run_susceptibility(cfg, out_dir); break;
      case Command::Propagate: run_propagate(cfg, out_dir); break;
      case Command::SweepPump: run_sweep(cfg, out_dir); break;
      case Command::Calibrate: run_calibrate(cfg, out_dir); break;
    }
    return 0;
  } catch (const std::exception& e) {
    json err = {{"command", command_name(command)}, {"message", e.what()}};
    int code = 3;
    if (const auto* ve = dynamic_cast<const Error*>(&e)) {
      err["error"] = std::string(ve->kind());
      code = ve->category() == ErrorCategory::Config ? 2 : 3;
    } else if (dynamic_cast<const std::invalid_argument*>(&e)) {
      err["error"] = "InvalidArgument";
      code = 2;
    } else {
      err["error"] = "InternalError";
    }
    err["exit_code"] = code;
    std::cerr << err.dump() << "\n";
    try {
      write_json(out_dir / "error.json", err);
    } catch (...) {
    }
    return code;
  }
}

}  // namespace vapor::cli
