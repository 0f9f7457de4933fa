#include <cmath>

#include "qspin/error.hpp"
#include "qspin/scenario.hpp"

namespace qspin {

namespace {

// Oblique field at 45 degrees to z with |B| = B_0 = 1.
Vec3 oblique_field() { return Vec3(1.0, 0.0, 1.0) / std::sqrt(2.0); }

ScenarioConfig base(std::string name, InitialStateSpec state, double k_perp, double k_par) {
  ScenarioConfig cfg;
  cfg.name = std::move(name);
  cfg.spin = SpinQuantumNumber::one();
  cfg.initial_state = std::move(state);
  cfg.hamiltonian = HamiltonianSpec{oblique_field(), k_perp, k_par};
  cfg.kappa = 0.5;
  cfg.integrator.kappa = cfg.kappa;
  cfg.seed_label = cfg.name;
  return cfg;
}

struct PresetEntry {
  const char* name;
  const char* description;
  ScenarioConfig (*make)();
};

const PresetEntry kPresets[] = {
    {"rescalable",
     "spin-type m0=1 along z, no anisotropy, oblique field, kappa=0.5 (equivalent under "
     "rescaling by 1+kappa^2 m0^2/9)",
     [] { return base("rescalable", SpinTypeState{1.0, Vec3::UnitZ()}, 0.0, 0.0); }},
    {"case_i",
     "spin-type m0=1 along z, K_perp=0.3, K_par=-0.1, oblique field, kappa=0.5",
     [] { return base("case_i", SpinTypeState{1.0, Vec3::UnitZ()}, 0.3, -0.1); }},
    {"case_ii",
     "qutrit mixture p=5/6 of |1;1> and |1;-1>, no anisotropy, oblique field, kappa=0.5",
     [] { return base("case_ii", QutritMixtureState{5.0 / 6.0}, 0.0, 0.0); }},
    {"case_iii_qutrit_aniso",
     "qutrit mixture p=5/6 with K_perp=0.3, K_par=-0.1, oblique field, kappa=0.5",
     [] { return base("case_iii_qutrit_aniso", QutritMixtureState{5.0 / 6.0}, 0.3, -0.1); }},
    {"spin_half_regression",
     "spin-1/2 Bloch state m0=0.8 along z, oblique field, kappa=0.5 (equivalent under "
     "rescaling by 1+kappa^2 m0^2)",
     [] {
       ScenarioConfig cfg = base("spin_half_regression", SpinTypeState{0.8, Vec3::UnitZ()},
                                 0.0, 0.0);
       cfg.spin = SpinQuantumNumber::half();
       return cfg;
     }},
};

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& p : kPresets) out.push_back({p.name, p.description});
  return out;
}

ScenarioConfig preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.make();
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

}  // namespace qspin
