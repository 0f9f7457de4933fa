#include "qspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qspin/error.hpp"

namespace qspin {

namespace {

constexpr double kPositivityTolerance = 1e-6;

void normalize_in_place(ComplexMatrix& rho) {
  rho = hermitian_part(rho);
  rho /= rho.trace().real();
}

struct Stepper {
  DynamicsKind kind;
  const ComplexMatrix& h;
  double kappa;

  ComplexMatrix operator()(const ComplexMatrix& rho) const { return rhs(kind, rho, h, kappa); }
};

void rk4_step(const Stepper& f, ComplexMatrix& rho, double dt) {
  const ComplexMatrix k1 = f(rho);
  const ComplexMatrix k2 = f(rho + (0.5 * dt) * k1);
  const ComplexMatrix k3 = f(rho + (0.5 * dt) * k2);
  const ComplexMatrix k4 = f(rho + dt * k3);
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  normalize_in_place(rho);
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// Advances rho across [0, span] adaptively. `step` carries the step size
// between calls.
std::size_t dopri_advance(const Stepper& f, ComplexMatrix& rho, double span, double& step,
                          const IntegratorConfig& cfg) {
  std::size_t steps = 0;
  double t = 0.0;
  ComplexMatrix k1 = f(rho);
  while (span - t > 1e-15 * span) {
    const bool last = step >= span - t;
    const double dt = last ? span - t : step;
    const ComplexMatrix k2 = f(rho + dt * (a21 * k1));
    const ComplexMatrix k3 = f(rho + dt * (a31 * k1 + a32 * k2));
    const ComplexMatrix k4 = f(rho + dt * (a41 * k1 + a42 * k2 + a43 * k3));
    const ComplexMatrix k5 = f(rho + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const ComplexMatrix k6 =
        f(rho + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    ComplexMatrix next = rho + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const ComplexMatrix k7 = f(next);
    const ComplexMatrix err =
        dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double scale =
          cfg.abs_tol + cfg.rel_tol * std::max(std::abs(rho(i)), std::abs(next(i)));
      err_norm = std::max(err_norm, std::abs(err(i)) / scale);
    }

    const double factor =
        err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    if (err_norm <= 1.0) {
      t = last ? span : t + dt;
      normalize_in_place(next);
      rho = std::move(next);
      k1 = f(rho);
      ++steps;
      if (!last) step = dt * factor;
      else step = std::max(step, dt * factor);
    } else {
      step = dt * factor;
      if (step < 1e-14 * span) {
        throw NumericalError("adaptive integrator step size underflow");
      }
    }
    if (steps > 100'000'000) throw NumericalError("adaptive integrator exceeded step budget");
  }
  return steps;
}

std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

}  // namespace

std::string_view to_string(DynamicsKind kind) noexcept {
  return kind == DynamicsKind::QLL ? "qll" : "qllg";
}

void IntegratorConfig::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InvalidStateError("kappa must be >= 0");
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidStateError("integrator step must be > 0");
  if (method == IntegratorMethod::RK45Adaptive && (!(rel_tol > 0.0) || !(abs_tol > 0.0))) {
    throw InvalidStateError("integrator tolerances must be > 0");
  }
}

ComplexMatrix rhs(DynamicsKind kind, const ComplexMatrix& rho, const ComplexMatrix& h,
                  double kappa) {
  const ComplexMatrix rh = commutator(rho, h);
  if (kind == DynamicsKind::QLL) {
    return hermitian_part(kI * rh - kappa * commutator(rho, rh));
  }
  return solve_implicit_rhs(rho, kI * rh, kappa);
}

Trajectory integrate(DynamicsKind kind, const DensityMatrix& rho0, const HamiltonianMatrix& h,
                     const IntegratorConfig& cfg, double t_max, std::size_t n_grid) {
  cfg.validate();
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidStateError("t_max must be > 0");
  if (n_grid < 2) throw InvalidStateError("n_grid must be >= 2");
  if (h.h.rows() != rho0.dim()) throw DimensionError("hamiltonian and state dimensions differ");

  const Stepper f{kind, h.h, cfg.kappa};
  const double dt_grid = t_max / static_cast<double>(n_grid - 1);
  const auto substeps = static_cast<std::size_t>(std::ceil(dt_grid / cfg.step - 1e-12));
  const double dt = dt_grid / static_cast<double>(std::max<std::size_t>(substeps, 1));
  double adaptive_step = std::min(cfg.step, dt_grid);

  Trajectory traj;
  traj.kind = kind;
  traj.times.reserve(n_grid);
  traj.states.reserve(n_grid);
  traj.derivatives.reserve(n_grid);

  const double purity0 = rho0.purity();
  auto& diag = traj.diagnostics;
  diag.min_eigenvalue = eigenvalues_hermitian(rho0.matrix()).front();

  ComplexMatrix rho = rho0.matrix();
  auto record = [&](std::size_t i) {
    const double t = static_cast<double>(i) * dt_grid;
    if (!rho.allFinite()) {
      throw NumericalError("state became non-finite before t = " + format_time(t) +
                           "; reduce the integrator step");
    }
    const double lowest = eigenvalues_hermitian(rho).front();
    if (!(lowest >= -kPositivityTolerance)) {
      throw NumericalError("positivity violated at t = " + format_time(t) +
                           " (min eigenvalue " + std::to_string(lowest) +
                           "); reduce the integrator step");
    }
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, lowest);
    const DensityMatrix state = DensityMatrix::assume_valid(rho);
    diag.max_trace_drift = std::max(diag.max_trace_drift, std::abs(rho.trace() - 1.0));
    diag.max_purity_drift = std::max(diag.max_purity_drift, std::abs(state.purity() - purity0));
    traj.times.push_back(t);
    traj.derivatives.push_back(f(rho));
    traj.states.push_back(state);
  };

  record(0);
  for (std::size_t i = 1; i < n_grid; ++i) {
    if (cfg.method == IntegratorMethod::RK4Fixed) {
      for (std::size_t s = 0; s < substeps; ++s) rk4_step(f, rho, dt);
      diag.internal_steps += substeps;
    } else {
      diag.internal_steps += dopri_advance(f, rho, dt_grid, adaptive_step, cfg);
    }
    record(i);
  }
  return traj;
}

}  // namespace qspin
