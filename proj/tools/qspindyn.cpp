// qspindyn: paired q-LL / q-LLG single-spin simulations and rescaling-misfit
// analysis.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qspin/error.hpp"
#include "qspin/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

qspin::ScenarioConfig resolve(const std::string& config_or_preset) {
  std::error_code ec;
  if (fs::is_regular_file(config_or_preset, ec)) return qspin::load_config_file(config_or_preset);
  for (const auto& p : qspin::list_presets()) {
    if (p.name == config_or_preset) return qspin::preset(config_or_preset);
  }
  throw qspin::ConfigError("config", "'" + config_or_preset + "' is neither a config file nor a preset name");
}

void print_verdict(const fs::path& verdict_path) {
  const auto v = nlohmann::json::parse(std::ifstream(verdict_path));
  std::cout << "verdict: " << (v.at("equivalent").get<bool>() ? "equivalent" : "inequivalent")
            << "  spread=" << v.at("spread").get<double>()
            << "  residual=" << v.at("residual").get<double>() << "\n";
  for (const auto& [name, zeta] : v.at("per_component_argmins").items()) {
    std::printf("  %-4s argmin zeta = %.7f\n", name.c_str(), zeta.get<double>());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Landau-Lifshitz / Landau-Lifshitz-Gilbert single-spin simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Integrate both equations and write artifacts");
  std::string target;
  std::string out_dir;
  std::optional<std::size_t> n_grid;
  std::optional<double> t_max;
  run->add_option("config", target, "Scenario JSON file or preset name")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--n-grid", n_grid, "Override the output grid size");
  run->add_option("--t-max", t_max, "Override the simulated duration");

  auto* presets = app.add_subcommand("presets", "List built-in scenarios");

  auto* show = app.add_subcommand("show", "Print a preset as scenario JSON");
  std::string show_name;
  show->add_option("preset", show_name, "Preset name")->required();

  auto* validate = app.add_subcommand("validate", "Check a scenario JSON file");
  std::string validate_path;
  validate->add_option("config", validate_path, "Scenario JSON file")->required();

  auto* misfit = app.add_subcommand("misfit", "Recompute misfits from persisted trajectories");
  std::string rerun_dir;
  misfit->add_option("--rerun", rerun_dir, "Artifact directory of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      qspin::ScenarioConfig cfg = resolve(target);
      if (n_grid || t_max) {
        auto raw = qspin::to_json(cfg);
        if (n_grid) raw["n_grid"] = *n_grid;
        if (t_max) raw["t_max"] = *t_max;
        cfg = qspin::validate_config(raw);
      }
      const auto artifact = qspin::run_scenario(cfg, out_dir);
      std::cout << "wrote " << artifact.manifest.string() << "\n";
      print_verdict(artifact.verdict);
    } else if (*presets) {
      for (const auto& p : qspin::list_presets()) std::cout << p.name << "\t" << p.description << "\n";
    } else if (*show) {
      std::cout << qspin::to_json(qspin::preset(show_name)).dump(2) << "\n";
    } else if (*validate) {
      const auto cfg = qspin::load_config_file(validate_path);
      std::cout << "ok\n" << qspin::to_json(cfg).dump(2) << "\n";
    } else if (*misfit) {
      const auto artifact = qspin::rerun_misfits(rerun_dir);
      std::cout << "rewrote " << artifact.misfit.string() << "\n";
      print_verdict(artifact.verdict);
    }
  } catch (const qspin::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
