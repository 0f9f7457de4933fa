#include "qspin/scenario.hpp"

#include <cmath>
#include <future>
#include <optional>

#include "qspin/artifacts.hpp"
#include "qspin/error.hpp"

namespace qspin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Collects every problem found while reading a config.
class Reader {
 public:
  std::vector<FieldError> errors;

  void fail(std::string path, std::string message) {
    errors.push_back({std::move(path), std::move(message)});
  }

  void reject_unknown(const json& obj, const std::string& prefix,
                      std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : obj.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        fail(prefix + key, "unknown field");
      }
    }
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                               std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
      if (!fallback) fail(path, "required field is missing");
      return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
      fail(path, "must be a number");
      return std::nullopt;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return d;
  }

  std::optional<long long> integer(const json& obj, const std::string& key,
                                   const std::string& path,
                                   std::optional<long long> fallback = std::nullopt) {
    if (!obj.contains(key)) {
      if (!fallback) fail(path, "required field is missing");
      return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      fail(path, "must be an integer");
      return std::nullopt;
    }
    return v.get<long long>();
  }

  std::optional<std::string> string(const json& obj, const std::string& key,
                                    const std::string& path,
                                    std::optional<std::string> fallback = std::nullopt) {
    if (!obj.contains(key)) {
      if (!fallback) fail(path, "required field is missing");
      return fallback;
    }
    if (!obj.at(key).is_string()) {
      fail(path, "must be a string");
      return std::nullopt;
    }
    return obj.at(key).get<std::string>();
  }

  std::optional<Vec3> vec3(const json& obj, const std::string& key, const std::string& path,
                           std::optional<Vec3> fallback = std::nullopt) {
    if (!obj.contains(key)) {
      if (!fallback) fail(path, "required field is missing");
      return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3) {
      fail(path, "must be an array of 3 numbers");
      return std::nullopt;
    }
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!v[static_cast<std::size_t>(i)].is_number()) {
        fail(path + "[" + std::to_string(i) + "]", "must be a number");
        return std::nullopt;
      }
      out(i) = v[static_cast<std::size_t>(i)].get<double>();
    }
    if (!out.allFinite()) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return out;
  }

  const json* object(const json& obj, const std::string& key, const std::string& path,
                     bool required) {
    if (!obj.contains(key)) {
      if (required) fail(path, "required field is missing");
      return nullptr;
    }
    if (!obj.at(key).is_object()) {
      fail(path, "must be an object");
      return nullptr;
    }
    return &obj.at(key);
  }
};

std::optional<ComplexMatrix> read_matrix(Reader& r, const json& obj, const std::string& path) {
  const auto dims_ok = [](const json& m) {
    if (!m.is_array() || m.empty()) return false;
    for (const auto& row : m) {
      if (!row.is_array() || row.size() != m.size()) return false;
      for (const auto& x : row)
        if (!x.is_number()) return false;
    }
    return true;
  };
  if (!obj.contains("re") || !dims_ok(obj.at("re"))) {
    r.fail(path + ".re", "must be a square array of numbers");
    return std::nullopt;
  }
  const json& re = obj.at("re");
  const auto n = static_cast<Eigen::Index>(re.size());
  ComplexMatrix m(n, n);
  const json* im = obj.contains("im") ? &obj.at("im") : nullptr;
  if (im && (!dims_ok(*im) || im->size() != re.size())) {
    r.fail(path + ".im", "must be a square array matching re");
    return std::nullopt;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      m(i, j) = Complex(re[ui][uj].get<double>(), im ? (*im)[ui][uj].get<double>() : 0.0);
    }
  return m;
}

std::optional<InitialStateSpec> read_initial_state(Reader& r, const json& obj) {
  const std::string p = "initial_state.";
  const auto kind = r.string(obj, "kind", p + "kind");
  if (!kind) return std::nullopt;
  if (*kind == "spin_type") {
    r.reject_unknown(obj, p, {"kind", "m0", "axis"});
    const auto m0 = r.number(obj, "m0", p + "m0");
    const auto axis = r.vec3(obj, "axis", p + "axis", Vec3::UnitZ());
    bool ok = m0 && axis;
    if (m0 && *m0 > 1.0) {
      r.fail(p + "m0", "m0 exceeds positivity bound (m0 <= 1)");
      ok = false;
    } else if (m0 && *m0 < 0.0) {
      r.fail(p + "m0", "m0 must be >= 0");
      ok = false;
    }
    if (axis && std::abs(axis->norm() - 1.0) > 1e-9) {
      r.fail(p + "axis", "must be a unit vector");
      ok = false;
    }
    if (!ok) return std::nullopt;
    return SpinTypeState{*m0, *axis};
  }
  if (*kind == "qutrit_mixture") {
    r.reject_unknown(obj, p, {"kind", "p"});
    const auto pw = r.number(obj, "p", p + "p");
    if (pw && (*pw < 0.0 || *pw > 1.0)) {
      r.fail(p + "p", "must lie in [0, 1]");
      return std::nullopt;
    }
    if (!pw) return std::nullopt;
    return QutritMixtureState{*pw};
  }
  if (*kind == "explicit") {
    r.reject_unknown(obj, p, {"kind", "re", "im"});
    auto m = read_matrix(r, obj, "initial_state");
    if (!m) return std::nullopt;
    return ExplicitState{std::move(*m)};
  }
  r.fail(p + "kind", "must be one of spin_type, qutrit_mixture, explicit");
  return std::nullopt;
}

json initial_state_json(const InitialStateSpec& spec) {
  if (const auto* st = std::get_if<SpinTypeState>(&spec)) {
    return {{"kind", "spin_type"},
            {"m0", st->m0},
            {"axis", {st->axis.x(), st->axis.y(), st->axis.z()}}};
  }
  if (const auto* q = std::get_if<QutritMixtureState>(&spec)) {
    return {{"kind", "qutrit_mixture"}, {"p", q->p}};
  }
  const auto& m = std::get<ExplicitState>(spec).matrix;
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ii = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"kind", "explicit"}, {"re", re}, {"im", im}};
}

}  // namespace

ScenarioConfig validate_config(const json& raw) {
  Reader r;
  ScenarioConfig cfg;
  if (!raw.is_object()) throw ConfigError("$", "config must be a JSON object");

  r.reject_unknown(raw, "", {"schema_version", "name", "two_s", "initial_state", "hamiltonian",
                             "kappa", "t_max", "n_grid", "integrator", "zeta_scan",
                             "seed_label", "verdict"});

  if (const auto v = r.integer(raw, "schema_version", "schema_version");
      v && *v != kConfigSchemaVersion) {
    r.fail("schema_version", "unsupported version " + std::to_string(*v) + " (expected " +
                                 std::to_string(kConfigSchemaVersion) + ")");
  }
  if (const auto v = r.string(raw, "name", "name", "custom")) cfg.name = *v;
  if (const auto v = r.string(raw, "seed_label", "seed_label", "")) cfg.seed_label = *v;

  std::optional<SpinQuantumNumber> spin;
  if (const auto v = r.integer(raw, "two_s", "two_s", 2)) {
    if (*v < 1 || *v > 64) r.fail("two_s", "must lie in [1, 64]");
    else spin = SpinQuantumNumber(static_cast<int>(*v));
  }
  if (spin) cfg.spin = *spin;

  std::optional<InitialStateSpec> state;
  if (const json* obj = r.object(raw, "initial_state", "initial_state", true)) {
    state = read_initial_state(r, *obj);
  }

  if (const json* obj = r.object(raw, "hamiltonian", "hamiltonian", true)) {
    r.reject_unknown(*obj, "hamiltonian.", {"b_field", "k_perp", "k_par"});
    if (const auto b = r.vec3(*obj, "b_field", "hamiltonian.b_field")) cfg.hamiltonian.b_field = *b;
    if (const auto k = r.number(*obj, "k_perp", "hamiltonian.k_perp", 0.0)) cfg.hamiltonian.k_perp = *k;
    if (const auto k = r.number(*obj, "k_par", "hamiltonian.k_par", 0.0)) cfg.hamiltonian.k_par = *k;
  }

  if (const auto k = r.number(raw, "kappa", "kappa")) {
    if (*k < 0.0) r.fail("kappa", "negative damping is not allowed");
    else cfg.kappa = *k;
  }
  if (const auto t = r.number(raw, "t_max", "t_max", 40.0)) {
    if (*t <= 0.0) r.fail("t_max", "must be > 0");
    else cfg.t_max = *t;
  }
  if (const auto n = r.integer(raw, "n_grid", "n_grid", 50'000)) {
    if (*n < 2) r.fail("n_grid", "must be >= 2");
    else if (*n > 100'000'000) r.fail("n_grid", "must be <= 1e8");
    else cfg.n_grid = static_cast<std::size_t>(*n);
  }

  if (const json* obj = r.object(raw, "integrator", "integrator", false)) {
    r.reject_unknown(*obj, "integrator.", {"method", "step", "rel_tol", "abs_tol"});
    if (const auto m = r.string(*obj, "method", "integrator.method", "rk4")) {
      if (*m == "rk4") cfg.integrator.method = IntegratorMethod::RK4Fixed;
      else if (*m == "rk45") cfg.integrator.method = IntegratorMethod::RK45Adaptive;
      else r.fail("integrator.method", "must be rk4 or rk45");
    }
    const std::pair<const char*, double*> positives[] = {{"step", &cfg.integrator.step},
                                                         {"rel_tol", &cfg.integrator.rel_tol},
                                                         {"abs_tol", &cfg.integrator.abs_tol}};
    for (const auto& [key, slot] : positives) {
      const std::string path = std::string("integrator.") + key;
      if (const auto v = r.number(*obj, key, path, *slot)) {
        if (*v <= 0.0) r.fail(path, "must be > 0");
        else *slot = *v;
      }
    }
  }
  cfg.integrator.kappa = cfg.kappa;

  if (const json* obj = r.object(raw, "zeta_scan", "zeta_scan", false)) {
    r.reject_unknown(*obj, "zeta_scan.", {"lo", "hi", "count"});
    const auto lo = r.number(*obj, "lo", "zeta_scan.lo", cfg.zeta_scan.lo);
    const auto hi = r.number(*obj, "hi", "zeta_scan.hi", cfg.zeta_scan.hi);
    const auto count = r.integer(*obj, "count", "zeta_scan.count",
                                 static_cast<long long>(cfg.zeta_scan.count));
    if (lo && *lo <= 0.0) r.fail("zeta_scan.lo", "must be > 0");
    if (lo && hi && *hi <= *lo) r.fail("zeta_scan.hi", "must exceed zeta_scan.lo");
    if (count && *count < 3) r.fail("zeta_scan.count", "must be >= 3");
    if (lo && hi && count && *lo > 0.0 && *hi > *lo && *count >= 3) {
      cfg.zeta_scan = ZetaScan{*lo, *hi, static_cast<std::size_t>(*count)};
    }
  }

  if (const json* obj = r.object(raw, "verdict", "verdict", false)) {
    r.reject_unknown(*obj, "verdict.", {"zeta_tol", "residual_tol"});
    if (const auto v = r.number(*obj, "zeta_tol", "verdict.zeta_tol", cfg.zeta_tol)) {
      if (*v <= 0.0) r.fail("verdict.zeta_tol", "must be > 0");
      else cfg.zeta_tol = *v;
    }
    if (const auto v = r.number(*obj, "residual_tol", "verdict.residual_tol", cfg.residual_tol)) {
      if (*v <= 0.0) r.fail("verdict.residual_tol", "must be > 0");
      else cfg.residual_tol = *v;
    }
  }

  // Physical validity of the initial state against the chosen spin.
  if (state && spin) {
    try {
      (void)build_initial_state(*state, *spin);
      cfg.initial_state = *state;
    } catch (const Error& e) {
      r.fail("initial_state", e.what());
    }
  }

  if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
  return cfg;
}

ScenarioConfig validate_config_text(std::string_view text) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  return validate_config(raw);
}

ScenarioConfig load_config_file(const fs::path& path) {
  std::string text;
  try {
    text = artifacts::read_file(path);
  } catch (const Error& e) {
    throw ConfigError("$", e.what());
  }
  return validate_config_text(text);
}

json to_json(const ScenarioConfig& cfg) {
  const auto& b = cfg.hamiltonian.b_field;
  return {
      {"schema_version", kConfigSchemaVersion},
      {"name", cfg.name},
      {"two_s", cfg.spin.two_s()},
      {"initial_state", initial_state_json(cfg.initial_state)},
      {"hamiltonian",
       {{"b_field", {b.x(), b.y(), b.z()}},
        {"k_perp", cfg.hamiltonian.k_perp},
        {"k_par", cfg.hamiltonian.k_par}}},
      {"kappa", cfg.kappa},
      {"t_max", cfg.t_max},
      {"n_grid", cfg.n_grid},
      {"integrator",
       {{"method", cfg.integrator.method == IntegratorMethod::RK4Fixed ? "rk4" : "rk45"},
        {"step", cfg.integrator.step},
        {"rel_tol", cfg.integrator.rel_tol},
        {"abs_tol", cfg.integrator.abs_tol}}},
      {"zeta_scan",
       {{"lo", cfg.zeta_scan.lo}, {"hi", cfg.zeta_scan.hi}, {"count", cfg.zeta_scan.count}}},
      {"seed_label", cfg.seed_label},
      {"verdict", {{"zeta_tol", cfg.zeta_tol}, {"residual_tol", cfg.residual_tol}}},
  };
}

std::size_t extended_grid_size(std::size_t n_grid, double zeta_hi) {
  const double intervals = static_cast<double>(n_grid - 1) * std::max(zeta_hi, 1.0);
  return static_cast<std::size_t>(std::ceil(intervals - 1e-9)) + 1;
}

CurveMap compute_misfits(const ObservableTable& qllg, const ObservableTable& qll,
                         const ZetaScan& scan, const MisfitOptions& opts) {
  const auto zetas = scan.grid();
  CurveMap curves;
  for (auto name : kMisfitComponents) {
    curves.emplace(std::string(name),
                   misfit_curve(ObservableSeries::from_table(qllg, name),
                                ObservableSeries::from_table(qll, name), zetas, opts));
  }
  return curves;
}

ScenarioResult simulate(const ScenarioConfig& cfg, const MisfitOptions& opts) {
  const SpinOperators ops = make_spin_operators(cfg.spin);
  const DensityMatrix rho0 = build_initial_state(cfg.initial_state, cfg.spin);
  const HamiltonianMatrix h = build_hamiltonian(cfg.hamiltonian, ops);
  IntegratorConfig icfg = cfg.integrator;
  icfg.kappa = cfg.kappa;

  const double dt_grid = cfg.t_max / static_cast<double>(cfg.n_grid - 1);
  const std::size_t n_llg = extended_grid_size(cfg.n_grid, cfg.zeta_scan.hi);
  const double t_llg = dt_grid * static_cast<double>(n_llg - 1);

  auto llg_future = std::async(std::launch::async, [&] {
    return integrate(DynamicsKind::QLLG, rho0, h, icfg, t_llg, n_llg);
  });
  ScenarioResult res;
  res.qll = integrate(DynamicsKind::QLL, rho0, h, icfg, cfg.t_max, cfg.n_grid);
  res.qllg = llg_future.get();

  res.obs_qll = compute_observables(res.qll, ops, h);
  res.obs_qllg = compute_observables(res.qllg, ops, h);
  res.curves = compute_misfits(res.obs_qllg, res.obs_qll, cfg.zeta_scan, opts);
  res.verdict = equivalence_verdict(res.curves, cfg.zeta_tol, cfg.residual_tol);
  return res;
}

namespace {

RunArtifact artifact_paths(const fs::path& dir) {
  RunArtifact a;
  a.config = dir / artifacts::kConfigFile;
  a.trajectory_qll = dir / artifacts::trajectory_file(DynamicsKind::QLL);
  a.trajectory_qllg = dir / artifacts::trajectory_file(DynamicsKind::QLLG);
  a.observables_qll = dir / artifacts::observables_file(DynamicsKind::QLL);
  a.observables_qllg = dir / artifacts::observables_file(DynamicsKind::QLLG);
  a.misfit = dir / artifacts::kMisfitFile;
  a.verdict = dir / artifacts::kVerdictFile;
  a.manifest = dir / artifacts::kManifestFile;
  return a;
}

json diagnostics_json(const TrajectoryDiagnostics& d, std::size_t points) {
  return {{"grid_points", points},
          {"internal_steps", d.internal_steps},
          {"max_trace_drift", d.max_trace_drift},
          {"max_purity_drift", d.max_purity_drift},
          {"min_eigenvalue", d.min_eigenvalue}};
}

void write_manifest(const RunArtifact& a, const json& extra) {
  json m = {{"schema_version", 1},
            {"config", a.config.filename().string()},
            {"trajectories",
             {{"qll", a.trajectory_qll.filename().string()},
              {"qllg", a.trajectory_qllg.filename().string()}}},
            {"observables",
             {{"qll", a.observables_qll.filename().string()},
              {"qllg", a.observables_qllg.filename().string()}}},
            {"misfit", a.misfit.filename().string()},
            {"verdict", a.verdict.filename().string()},
            {"config_echo", a.config_echo}};
  m.update(extra);
  artifacts::write_file_atomic(a.manifest, m.dump(2) + "\n");
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error("cannot create output directory " + dir.string());
  }
}

}  // namespace

RunArtifact run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir,
                         const MisfitOptions& opts) {
  prepare_dir(out_dir);
  const ScenarioResult res = simulate(cfg, opts);

  RunArtifact a = artifact_paths(out_dir);
  a.config_echo = to_json(cfg);
  artifacts::write_file_atomic(a.config, a.config_echo.dump(2) + "\n");
  artifacts::write_file_atomic(a.trajectory_qll, artifacts::trajectory_csv(res.qll));
  artifacts::write_file_atomic(a.trajectory_qllg, artifacts::trajectory_csv(res.qllg));
  artifacts::write_file_atomic(a.observables_qll, artifacts::observables_csv(res.obs_qll));
  artifacts::write_file_atomic(a.observables_qllg, artifacts::observables_csv(res.obs_qllg));
  artifacts::write_file_atomic(a.misfit,
                               artifacts::misfit_json(cfg.name, res.curves, opts.isa).dump() + "\n");
  artifacts::write_file_atomic(a.verdict,
                               artifacts::verdict_json(cfg.name, res.verdict).dump(2) + "\n");
  write_manifest(a, {{"diagnostics",
                      {{"qll", diagnostics_json(res.qll.diagnostics, res.qll.size())},
                       {"qllg", diagnostics_json(res.qllg.diagnostics, res.qllg.size())}}}});
  return a;
}

RunArtifact rerun_misfits(const fs::path& dir, const MisfitOptions& opts) {
  RunArtifact a = artifact_paths(dir);
  const ScenarioConfig cfg = load_config_file(a.config);
  a.config_echo = to_json(cfg);

  const SpinOperators ops = make_spin_operators(cfg.spin);
  const HamiltonianMatrix h = build_hamiltonian(cfg.hamiltonian, ops);
  auto load = [&](const fs::path& p) {
    const auto t = artifacts::parse_trajectory_csv(artifacts::read_file(p));
    if (!t.states.empty() && t.states.front().rows() != cfg.spin.dim()) {
      throw Error(p.string() + ": state dimension does not match config two_s");
    }
    return compute_observables(t.times, t.states, t.derivatives, ops, h);
  };
  const ObservableTable qll = load(a.trajectory_qll);
  const ObservableTable qllg = load(a.trajectory_qllg);

  const CurveMap curves = compute_misfits(qllg, qll, cfg.zeta_scan, opts);
  const EquivalenceVerdict verdict = equivalence_verdict(curves, cfg.zeta_tol, cfg.residual_tol);
  artifacts::write_file_atomic(a.misfit,
                               artifacts::misfit_json(cfg.name, curves, opts.isa).dump() + "\n");
  artifacts::write_file_atomic(a.verdict, artifacts::verdict_json(cfg.name, verdict).dump(2) + "\n");
  return a;
}

}  // namespace qspin
