// udw_harvest: transition probabilities, nonlocal correlators, concurrence
// and harvesting thresholds for two detectors near a reflecting plane.
//
//   udw_harvest point CONFIG [--with-c]
//   udw_harvest sweep CONFIG -o OUT.csv
//   udw_harvest threshold CONFIG -o OUT.csv
//   udw_harvest preset NAME [-o DIR]      (or: udw_harvest --preset NAME)
//
// Exit status: 0 all rows converged, 2 finished with flagged rows,
// 1 configuration or I/O error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "udw/cli/commands.hpp"

namespace {

using namespace udw::cli;

udw::cli::RunConfig load(const std::string& path, std::optional<double> tol) {
  RunConfig cfg = load_config(path);
  if (tol) override_rel_tol(cfg, *tol);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement harvesting by detectors near a reflecting boundary"};
  app.require_subcommand(0, 1);

  int threads = 1;
  std::optional<double> tol;
  std::string preset_flag;
  std::string preset_dir = ".";
  app.add_option("--threads", threads, "Worker threads for sweep rows")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "Override the quadrature rel_tol")->check(CLI::PositiveNumber);
  app.add_option("--preset", preset_flag, "Run a figure preset (same as the preset subcommand)");
  app.add_option("--preset-dir", preset_dir, "Output directory for --preset");
  app.fallthrough();

  std::string config_path, output_path;
  bool with_c = false;

  auto* point = app.add_subcommand("point", "Evaluate one configuration");
  point->add_option("config", config_path, "Configuration file")->required();
  point->add_flag("--with-c", with_c, "Also evaluate the correlator C");

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over the [sweep] grid");
  sweep->add_option("config", config_path, "Configuration file")->required();
  sweep->add_option("-o,--output", output_path, "CSV output path")->required();

  auto* threshold = app.add_subcommand("threshold", "dd_max or a_max along the [sweep] grid");
  threshold->add_option("config", config_path, "Configuration file")->required();
  threshold->add_option("-o,--output", output_path, "CSV output path")->required();

  std::string preset_name;
  bool list = false;
  auto* preset = app.add_subcommand("preset", "Run a built-in figure parameter set");
  preset->add_option("name", preset_name, "Preset name, e.g. fig2a");
  preset->add_option("-o,--output", preset_dir, "Output directory");
  preset->add_flag("--list", list, "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*point) return cmd_point(load(config_path, tol), std::cout, with_c);
    if (*sweep) return cmd_sweep(load(config_path, tol), output_path, threads);
    if (*threshold) return cmd_threshold(load(config_path, tol), output_path, threads);
    if (*preset || !preset_flag.empty()) {
      if (list) {
        for (const auto& n : preset_names()) std::cout << n << "\n";
        return kExitOk;
      }
      const std::string name = preset_name.empty() ? preset_flag : preset_name;
      if (name.empty()) throw ConfigError("preset: a preset name is required (see --list)");
      return cmd_preset(name, preset_dir, threads, tol, std::cout);
    }
    std::cerr << app.help();
    return kExitError;
  } catch (const udw::OnBoundaryError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const udw::InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
