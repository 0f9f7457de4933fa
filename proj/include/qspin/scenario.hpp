#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qspin/dynamics.hpp"
#include "qspin/hamiltonian.hpp"
#include "qspin/misfit.hpp"
#include "qspin/observables.hpp"
#include "qspin/spin_algebra.hpp"

namespace qspin {

inline constexpr int kConfigSchemaVersion = 1;

struct ScenarioConfig {
  std::string name = "custom";
  SpinQuantumNumber spin = SpinQuantumNumber::one();
  InitialStateSpec initial_state = SpinTypeState{};
  HamiltonianSpec hamiltonian;
  double kappa = 0.0;
  double t_max = 40.0;
  std::size_t n_grid = 50'000;
  /// integrator.kappa always mirrors `kappa`.
  IntegratorConfig integrator;
  ZetaScan zeta_scan;
  std::string seed_label;
  double zeta_tol = kDefaultZetaTolerance;
  double residual_tol = kDefaultResidualTolerance;
};

/// Parses and fully validates a scenario; every violation is collected into
/// one ConfigError (field paths like "initial_state.m0").
ScenarioConfig validate_config(const nlohmann::json& raw);
ScenarioConfig validate_config_text(std::string_view text);
ScenarioConfig load_config_file(const std::filesystem::path& path);

nlohmann::json to_json(const ScenarioConfig& cfg);

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list_presets();
/// Throws ConfigError for unknown names.
ScenarioConfig preset(std::string_view name);

/// q-LL and q-LLG runs of one scenario with their observables and misfits.
/// The q-LLG run extends to zeta_scan.hi * t_max on the same grid spacing.
struct ScenarioResult {
  Trajectory qll;
  Trajectory qllg;
  ObservableTable obs_qll;
  ObservableTable obs_qllg;
  CurveMap curves;
  EquivalenceVerdict verdict;
};

/// Number of q-LLG grid points so that zeta_hi * t_max is covered with the
/// q-LL spacing.
std::size_t extended_grid_size(std::size_t n_grid, double zeta_hi);

/// Integrates both equations (concurrently) and evaluates everything.
ScenarioResult simulate(const ScenarioConfig& cfg, const MisfitOptions& opts = {});

/// All nine misfit curves, q-LLG against q-LL.
CurveMap compute_misfits(const ObservableTable& qllg, const ObservableTable& qll,
                         const ZetaScan& scan, const MisfitOptions& opts = {});

struct RunArtifact {
  std::filesystem::path config;
  std::filesystem::path trajectory_qll;
  std::filesystem::path trajectory_qllg;
  std::filesystem::path observables_qll;
  std::filesystem::path observables_qllg;
  std::filesystem::path misfit;
  std::filesystem::path verdict;
  std::filesystem::path manifest;
  nlohmann::json config_echo;
};

RunArtifact run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                         const MisfitOptions& opts = {});

/// Recomputes misfit.json and verdict.json in `dir` from its config.json and
/// persisted trajectory CSVs, without integrating again.
RunArtifact rerun_misfits(const std::filesystem::path& dir, const MisfitOptions& opts = {});

}  // namespace qspin
