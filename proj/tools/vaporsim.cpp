#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "vapor/errors.hpp"
#include "vapor/runner.hpp"
#include "vapor/scenario.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
};

int execute(vapor::cli::Command command, const Options& opt) {
  vapor::cli::ScenarioConfig cfg;
  try {
    cfg = vapor::cli::load_config(opt.config);
  } catch (const vapor::Error& e) {
    nlohmann::json err = {{"command", vapor::cli::command_name(command)},
                          {"error", std::string(e.kind())},
                          {"message", e.what()},
                          {"exit_code", 2}};
    if (const auto* pe = dynamic_cast<const vapor::ParseError*>(&e)) {
      err["line"] = pe->line();
      err["column"] = pe->column();
    }
    if (const auto* ve = dynamic_cast<const vapor::ValidationError*>(&e)) {
      err["violations"] = ve->violations();
    }
    std::cerr << err.dump() << "\n";
    return 2;
  }
  const std::filesystem::path out = opt.out.empty() ? cfg.output_dir : std::filesystem::path(opt.out);
  return vapor::cli::run_command(command, cfg, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal-vapor four-wave-mixing image propagation"};
  app.require_subcommand(1);

  Options opt;
  vapor::cli::Command chosen = vapor::cli::Command::Propagate;
  const std::pair<const char*, vapor::cli::Command> commands[] = {
      {"steady-state", vapor::cli::Command::SteadyState},
      {"susceptibility", vapor::cli::Command::Susceptibility},
      {"propagate", vapor::cli::Command::Propagate},
      {"sweep-pump", vapor::cli::Command::SweepPump},
      {"calibrate", vapor::cli::Command::Calibrate},
  };
  const char* help[] = {
      "zeroth-order density matrix -> steady_state.json",
      "k-resolved susceptibilities -> susceptibility.csv",
      "beam propagation -> metrics.csv and field snapshots",
      "output power and width versus pump rate -> sweep.csv",
      "diffraction-flat density -> calibration.json",
  };
  int i = 0;
  for (const auto& [name, cmd] : commands) {
    auto* sub = app.add_subcommand(name, help[i++]);
    sub->add_option("--config", opt.config, "scenario file (or run_meta.json)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory (default: output.directory)");
    sub->callback([&chosen, cmd = cmd] { chosen = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return execute(chosen, opt);
}
