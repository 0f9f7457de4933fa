#pragma once

// On-disk formats shared with the plotting tools. CSVs are comma separated,
// LF terminated, one header row, doubles printed with 17 significant digits.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qspin/densmat.hpp"
#include "qspin/dynamics.hpp"
#include "qspin/misfit.hpp"
#include "qspin/observables.hpp"

namespace qspin::artifacts {

inline constexpr std::string_view kConfigFile = "config.json";
inline constexpr std::string_view kMisfitFile = "misfit.json";
inline constexpr std::string_view kVerdictFile = "verdict.json";
inline constexpr std::string_view kManifestFile = "manifest.json";

std::string trajectory_file(DynamicsKind kind);   // trajectory_qll.csv, ...
std::string observables_file(DynamicsKind kind);  // observables_qll.csv, ...

/// "%.17g"
std::string format_double(double v);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

/// t, Sx, Sy, Sz, Cxx, Cxy, Cxz, Cyy, Cyz, Czz, purity, energy, Ve, trC
std::string observables_csv(const ObservableTable& table);

/// t, then rho_i_j_re / rho_i_j_im for all i, j, then drho_i_j_re /
/// drho_i_j_im (rho-dot), row-major.
std::string trajectory_csv(const Trajectory& traj);

struct PersistedTrajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  std::vector<ComplexMatrix> derivatives;
};

PersistedTrajectory parse_trajectory_csv(std::string_view text);

nlohmann::json misfit_json(std::string_view scenario, const CurveMap& curves,
                           kernels::Isa isa);
nlohmann::json verdict_json(std::string_view scenario, const EquivalenceVerdict& verdict);

}  // namespace qspin::artifacts
