#include <cmath>

#include "doctest.h"
#include "qspin/dynamics.hpp"
#include "qspin/error.hpp"
#include "qspin/misfit.hpp"
#include "qspin/observables.hpp"
#include "test_support.hpp"

using namespace qspin;
using namespace qspin::testing;

namespace {

const Vec3 kOblique = Vec3(1.0, 0.0, 1.0) / std::sqrt(2.0);

IntegratorConfig rk4(double kappa, double step = 1e-3) {
  IntegratorConfig cfg;
  cfg.kappa = kappa;
  cfg.step = step;
  return cfg;
}

}  // namespace

TEST_CASE("undamped right-hand sides coincide with the von Neumann term") {
  const ComplexMatrix rho = random_density(3);
  const ComplexMatrix h = random_hermitian(3);
  const ComplexMatrix vn = kI * naive_commutator(rho, h);
  CHECK(max_abs_diff(rhs(DynamicsKind::QLL, rho, h, 0.0), vn) <= 1e-14);
  CHECK(max_abs_diff(rhs(DynamicsKind::QLLG, rho, h, 0.0), vn) <= 1e-14);
}

TEST_CASE("states commuting with H are stationary") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  const auto h = build_hamiltonian({Vec3::UnitZ(), 0.0, 0.7}, ops);
  const ComplexMatrix rho = diag3(0.5, 0.3, 0.2);
  for (auto kind : {DynamicsKind::QLL, DynamicsKind::QLLG}) {
    CHECK(rhs(kind, rho, h.h, 0.8).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("right-hand sides are Hermitian and traceless") {
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index d = 2 + i % 4;
    const ComplexMatrix rho = random_density(d);
    const ComplexMatrix h = random_hermitian(d);
    for (auto kind : {DynamicsKind::QLL, DynamicsKind::QLLG}) {
      const ComplexMatrix f = rhs(kind, rho, h, uniform(0, 5));
      CHECK(hermiticity_defect(f) <= 1e-10);
      CHECK(std::abs(f.trace()) <= 1e-10);
    }
  }
}

TEST_CASE("spin-1/2: q-LLG rhs is the q-LL rhs divided by 1 + kappa^2 |m|^2") {
  const auto ops = make_spin_operators(SpinQuantumNumber::half());
  const ComplexMatrix rho = 0.5 * ComplexMatrix::Identity(2, 2) + ops.sz;  // (I + sigma_z)/2
  const ComplexMatrix h = -ops.sx;                                          // -sigma_x / 2
  const double kappa = 0.5;
  const ComplexMatrix ll = rhs(DynamicsKind::QLL, rho, h, kappa);
  const ComplexMatrix llg = rhs(DynamicsKind::QLLG, rho, h, kappa);
  const ComplexMatrix oracle = fixed_point_implicit(rho, kI * naive_commutator(rho, h), kappa);
  CHECK(max_abs_diff(llg, oracle) <= 1e-12);
  CHECK(max_abs_diff(llg, ll / (1.0 + kappa * kappa)) <= 1e-14);

  for (int i = 0; i < 50; ++i) {
    const double m = uniform(0.0, 1.0);
    const Vec3 n = random_unit();
    const ComplexMatrix r = 0.5 * ComplexMatrix::Identity(2, 2) + m * ops.dot(n);
    const ComplexMatrix hz = -ops.dot(random_unit() * uniform(0.2, 2.0));
    const double k = uniform(0.0, 2.0);
    CHECK(max_abs_diff(rhs(DynamicsKind::QLLG, r, hz, k),
                       rhs(DynamicsKind::QLL, r, hz, k) / (1.0 + k * k * m * m)) <= 1e-13);
  }
}

TEST_CASE("integrate: stationary state stays put") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  const auto h = build_hamiltonian({Vec3::UnitZ(), 0.0, -0.2}, ops);
  const auto rho0 = DensityMatrix::validated(diag3(0.6, 0.3, 0.1));
  for (auto kind : {DynamicsKind::QLL, DynamicsKind::QLLG}) {
    const auto traj = integrate(kind, rho0, h, rk4(0.5), 5.0, 51);
    for (const auto& s : traj.states) CHECK(max_abs_diff(s.matrix(), rho0.matrix()) <= 1e-15);
  }
}

TEST_CASE("integrate: undamped Larmor precession about z") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  const auto h = build_hamiltonian({Vec3::UnitZ(), 0.0, 0.0}, ops);
  const double m0 = 0.8;
  const auto rho0 = build_initial_state(SpinTypeState{m0, Vec3::UnitX()}, SpinQuantumNumber::one());
  const double amplitude = 2.0 / 3.0 * m0;  // Tr(Sx^2)/3 = 2/3
  for (auto kind : {DynamicsKind::QLL, DynamicsKind::QLLG}) {
    const auto traj = integrate(kind, rho0, h, rk4(0.0), 4.0 * M_PI, 401);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const auto s = spin_expectation(traj.states[i], ops);
      const double t = traj.times[i];
      worst = std::max({worst, std::abs(s.sx - amplitude * std::cos(t)),
                        std::abs(s.sy + amplitude * std::sin(t)), std::abs(s.sz)});
    }
    CHECK(worst <= 1e-9);
    CHECK(traj.times.back() == doctest::Approx(4.0 * M_PI));
  }
}

TEST_CASE("integrate: trace and purity are conserved with damping and anisotropy") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  const auto h = build_hamiltonian({kOblique, 0.3, -0.1}, ops);
  const auto rho0 = build_initial_state(SpinTypeState{1.0, Vec3::UnitZ()}, SpinQuantumNumber::one());
  for (auto kind : {DynamicsKind::QLL, DynamicsKind::QLLG}) {
    const auto traj = integrate(kind, rho0, h, rk4(0.5), 10.0, 2001);
    for (const auto& s : traj.states) {
      CHECK(std::abs(s.matrix().trace() - 1.0) <= 1e-9);
      CHECK(std::abs(s.purity() - 5.0 / 9.0) <= 1e-8);
      CHECK(hermiticity_defect(s.matrix()) <= 1e-10);
    }
    CHECK(traj.diagnostics.max_purity_drift <= 1e-8);
    CHECK(traj.diagnostics.min_eigenvalue >= -1e-6);
  }
}

TEST_CASE("energy dissipation identities against centred finite differences") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  const auto h = build_hamiltonian({kOblique, 0.3, -0.1}, ops);
  const auto rho0 = build_initial_state(QutritMixtureState{5.0 / 6.0}, SpinQuantumNumber::one());
  const double kappa = 0.5;
  for (auto kind : {DynamicsKind::QLL, DynamicsKind::QLLG}) {
    CAPTURE(to_string(kind));
    const auto traj = integrate(kind, rho0, h, rk4(kappa), 8.0, 10001);
    const double dt = traj.spacing();
    std::vector<double> energy;
    for (const auto& s : traj.states) energy.push_back(trace_product(h.h, s.matrix()).real());
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
      const ComplexMatrix& rho = traj.states[i].matrix();
      double rate = 0.0;
      if (kind == DynamicsKind::QLL) {
        const ComplexMatrix c = naive_commutator(rho, h.h);
        rate = -kappa * naive_product(c.adjoint(), c).trace().real();
      } else {
        const ComplexMatrix& d = traj.derivatives[i];
        rate = -kappa * naive_product(d, d).trace().real();
      }
      const double fd = (energy[i + 1] - energy[i - 1]) / (2.0 * dt);
      CHECK(std::abs(fd - rate) <= 1e-4 * std::abs(rate) + 1e-10);
      CHECK(energy[i + 1] <= energy[i] + 1e-14);
    }
  }
}

TEST_CASE("RK4 converges at fourth order") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  const auto h = build_hamiltonian({kOblique, 0.3, -0.1}, ops);
  const auto rho0 = build_initial_state(SpinTypeState{0.5, Vec3::UnitZ()}, SpinQuantumNumber::one());
  for (auto kind : {DynamicsKind::QLL, DynamicsKind::QLLG}) {
    const double step = 0.1;
    auto end_state = [&](double s) { return integrate(kind, rho0, h, rk4(0.5, s), 4.0, 2).states.back().matrix(); };
    const ComplexMatrix reference = end_state(step / 8.0);
    const double e1 = max_abs_diff(end_state(step), reference);
    const double e2 = max_abs_diff(end_state(step / 2.0), reference);
    CAPTURE(e1);
    CAPTURE(e2);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
  }
}

TEST_CASE("adaptive Dormand-Prince agrees with fixed-step RK4") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  const auto h = build_hamiltonian({kOblique, 0.3, -0.1}, ops);
  const auto rho0 = build_initial_state(SpinTypeState{1.0, Vec3::UnitZ()}, SpinQuantumNumber::one());
  IntegratorConfig adaptive = rk4(0.5, 0.05);
  adaptive.method = IntegratorMethod::RK45Adaptive;
  for (auto kind : {DynamicsKind::QLL, DynamicsKind::QLLG}) {
    const auto a = integrate(kind, rho0, h, adaptive, 10.0, 101);
    const auto b = integrate(kind, rho0, h, rk4(0.5), 10.0, 101);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(max_abs_diff(a.states[i].matrix(), b.states[i].matrix()) <= 1e-8);
    }
    CHECK(a.diagnostics.internal_steps < b.diagnostics.internal_steps);
  }
}

TEST_CASE("integrate validates its inputs") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  const auto h = build_hamiltonian({Vec3::UnitZ(), 0.0, 0.0}, ops);
  const auto rho0 = DensityMatrix::validated(ComplexMatrix::Identity(3, 3) / 3.0);
  CHECK_THROWS_AS(integrate(DynamicsKind::QLL, rho0, h, rk4(0.1), 0.0, 10), InvalidStateError);
  CHECK_THROWS_AS(integrate(DynamicsKind::QLL, rho0, h, rk4(0.1), 1.0, 1), InvalidStateError);
  CHECK_THROWS_AS(integrate(DynamicsKind::QLL, rho0, h, rk4(-0.1), 1.0, 10), InvalidStateError);
  CHECK_THROWS_AS(integrate(DynamicsKind::QLL, rho0, h, rk4(0.1, 0.0), 1.0, 10), InvalidStateError);
  const auto h2 = build_hamiltonian({Vec3::UnitZ(), 0.0, 0.0}, make_spin_operators(SpinQuantumNumber::half()));
  CHECK_THROWS_AS(integrate(DynamicsKind::QLL, rho0, h2, rk4(0.1), 1.0, 10), DimensionError);
}

TEST_CASE("integrate reports positivity loss from an unstable step") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  const auto h = build_hamiltonian({kOblique * 5.0, 3.0, -1.0}, ops);
  const auto rho0 = build_initial_state(SpinTypeState{1.0, Vec3::UnitZ()}, SpinQuantumNumber::one());
  CHECK_THROWS_AS(integrate(DynamicsKind::QLL, rho0, h, rk4(2.0, 10.0), 100.0, 11), NumericalError);
}
