#include <cmath>

#include "doctest.h"
#include "qspin/error.hpp"
#include "qspin/spin_algebra.hpp"
#include "test_support.hpp"

using namespace qspin;
using namespace qspin::testing;

namespace {

void check_su2_relations(const SpinOperators& ops) {
  CHECK(max_abs_diff(commutator(ops.sx, ops.sy), kI * ops.sz) <= 1e-12);
  CHECK(max_abs_diff(commutator(ops.sy, ops.sz), kI * ops.sx) <= 1e-12);
  CHECK(max_abs_diff(commutator(ops.sz, ops.sx), kI * ops.sy) <= 1e-12);
  const double s = ops.spin.s();
  const auto d = ops.spin.dim();
  const ComplexMatrix casimir = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
  CHECK(max_abs_diff(casimir, s * (s + 1.0) * ComplexMatrix::Identity(d, d)) <= 1e-12);
}

}  // namespace

TEST_CASE("spin-1 operators equal the literal basis matrices") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  CHECK(max_abs_diff(ops.sx, literal_sx()) <= 1e-14);
  CHECK(max_abs_diff(ops.sy, literal_sy()) <= 1e-14);
  CHECK(max_abs_diff(ops.sz, literal_sz()) <= 1e-14);
}

TEST_CASE("spin-1/2 operators are Pauli halves") {
  const auto ops = make_spin_operators(SpinQuantumNumber::half());
  ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 0.5, 0.5, 0;
  sy << 0, Complex(0, -0.5), Complex(0, 0.5), 0;
  sz << 0.5, 0, 0, -0.5;
  CHECK(max_abs_diff(ops.sx, sx) <= 1e-15);
  CHECK(max_abs_diff(ops.sy, sy) <= 1e-15);
  CHECK(max_abs_diff(ops.sz, sz) <= 1e-15);
}

TEST_CASE("su(2) relations and Casimir for several spins") {
  for (int two_s = 1; two_s <= 8; ++two_s) {
    CAPTURE(two_s);
    check_su2_relations(make_spin_operators(SpinQuantumNumber(two_s)));
  }
  const auto ops = make_spin_operators(SpinQuantumNumber(3));
  const ComplexMatrix casimir = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
  CHECK(max_abs_diff(casimir, 3.75 * ComplexMatrix::Identity(4, 4)) <= 1e-12);
}

TEST_CASE("SpinQuantumNumber rejects two_s < 1") {
  CHECK_THROWS_AS(SpinQuantumNumber(0), InvalidStateError);
}

TEST_CASE("Gell-Mann matrices") {
  const auto gm = make_gell_mann();
  CHECK(max_abs_diff(gm.lambda(3), diag3(1, -1, 0)) == 0.0);
  CHECK(max_abs_diff(gm.lambda(8), diag3(1, 1, -2) / std::sqrt(3.0)) <= 1e-15);

  for (int i = 1; i <= 8; ++i) {
    CHECK(std::abs(gm.lambda(i).trace()) <= 1e-14);
    CHECK(hermiticity_defect(gm.lambda(i)) == 0.0);
    for (int j = 1; j <= 8; ++j) {
      const Complex tr = naive_product(gm.lambda(i), gm.lambda(j)).trace();
      CHECK(std::abs(tr - (i == j ? 2.0 : 0.0)) <= 1e-12);
    }
  }
}

TEST_CASE("spin operators decompose over the Gell-Mann basis") {
  const auto ops = make_spin_operators(SpinQuantumNumber::one());
  auto gm = make_gell_mann();
  CHECK(spin_from_gellmann_check(ops, gm));

  // S_z^2 carries +1/2 lambda_3.
  CHECK(0.5 * trace_product(ops.sz * ops.sz, gm.lambda(3)).real() ==
        doctest::Approx(0.5).epsilon(1e-14));

  gm.lambdas[5](1, 2) += 1e-6;
  CHECK_FALSE(spin_from_gellmann_check(ops, gm));
  CHECK_FALSE(spin_from_gellmann_check(make_spin_operators(SpinQuantumNumber::half()),
                                       make_gell_mann()));
}

TEST_CASE("initial states") {
  const auto one = SpinQuantumNumber::one();
  SUBCASE("spin-type m0 = 1 along z") {
    const auto rho = build_initial_state(SpinTypeState{1.0, Vec3::UnitZ()}, one);
    CHECK(max_abs_diff(rho.matrix(), diag3(2.0 / 3.0, 1.0 / 3.0, 0.0)) <= 1e-15);
    CHECK(rho.purity() == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
  }
  SUBCASE("qutrit mixture p = 5/6") {
    const auto rho = build_initial_state(QutritMixtureState{5.0 / 6.0}, one);
    CHECK(max_abs_diff(rho.matrix(), diag3(5.0 / 6.0, 0.0, 1.0 / 6.0)) <= 1e-15);
    // Equivalent Gell-Mann form (1/3)(I + (3p - 2) S_z + lambda_3).
    const auto gm = make_gell_mann();
    const ComplexMatrix alt =
        (ComplexMatrix::Identity(3, 3) + 0.5 * literal_sz() + gm.lambda(3)) / 3.0;
    CHECK(max_abs_diff(rho.matrix(), alt) <= 1e-15);
  }
  SUBCASE("spin-type m0 = 0 is maximally mixed") {
    const auto rho = build_initial_state(SpinTypeState{0.0, Vec3::UnitX()}, one);
    CHECK(max_abs_diff(rho.matrix(), ComplexMatrix::Identity(3, 3) / 3.0) <= 1e-16);
  }
  SUBCASE("spin-1/2 spin-type is the Bloch form") {
    const Vec3 n = Vec3(1.0, 2.0, 2.0) / 3.0;
    const auto rho = build_initial_state(SpinTypeState{0.6, n}, SpinQuantumNumber::half());
    const auto ops = make_spin_operators(SpinQuantumNumber::half());
    const ComplexMatrix bloch = 0.5 * (ComplexMatrix::Identity(2, 2) + 0.6 * 2.0 * ops.dot(n));
    CHECK(max_abs_diff(rho.matrix(), bloch) <= 1e-15);
  }
  SUBCASE("m0 = 1 saturates positivity for every spin") {
    for (int two_s = 1; two_s <= 6; ++two_s) {
      const auto rho = build_initial_state(SpinTypeState{1.0, random_unit()}, SpinQuantumNumber(two_s));
      CHECK(std::abs(eigenvalues_hermitian(rho.matrix()).front()) <= 1e-12);
    }
  }
  SUBCASE("invalid specs") {
    CHECK_THROWS_AS(build_initial_state(SpinTypeState{1.5, Vec3::UnitZ()}, one), InvalidStateError);
    CHECK_THROWS_AS(build_initial_state(SpinTypeState{0.5, Vec3(1, 1, 0)}, one), InvalidStateError);
    CHECK_THROWS_AS(build_initial_state(QutritMixtureState{1.2}, one), InvalidStateError);
    CHECK_THROWS_AS(build_initial_state(QutritMixtureState{0.5}, SpinQuantumNumber::half()),
                    DimensionError);
    CHECK_THROWS_AS(build_initial_state(ExplicitState{diag3(1.2, 0.0, -0.2)}, one),
                    InvalidStateError);
    CHECK_THROWS_AS(build_initial_state(ExplicitState{ComplexMatrix::Identity(2, 2) / 2.0}, one),
                    DimensionError);
  }
}

TEST_CASE("purity of spin-type states follows 1/3 + (2/9) m0^2") {
  for (double m0 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto rho = build_initial_state(SpinTypeState{m0, Vec3::UnitZ()}, SpinQuantumNumber::one());
    const double direct = naive_product(rho.matrix(), rho.matrix()).trace().real();
    CHECK(direct == doctest::Approx(1.0 / 3.0 + 2.0 / 9.0 * m0 * m0).epsilon(1e-14));
  }
}

TEST_CASE("coherence vector") {
  const auto gm = make_gell_mann();
  SUBCASE("maximally mixed state has x = 0") {
    const auto v = to_coherence_vector(DensityMatrix::validated(ComplexMatrix::Identity(3, 3) / 3.0), gm);
    CHECK(v.norm_squared() <= 1e-30);
  }
  SUBCASE("pure state has |x| = 1") {
    const auto v = to_coherence_vector(DensityMatrix::validated(diag3(1, 0, 0)), gm);
    CHECK(v.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("spin-type state along z lives in components 3 and 8") {
    const auto rho = build_initial_state(SpinTypeState{1.0, Vec3::UnitZ()}, SpinQuantumNumber::one());
    const auto v = to_coherence_vector(rho, gm);
    for (int k : {1, 2, 4, 5, 6, 7}) CHECK(v.x[static_cast<std::size_t>(k - 1)] == 0.0);
    // diag(2/3, 1/3, 0): x3 = (sqrt3/2)(1/3), x8 = (sqrt3/2)(1/sqrt3)(2/3 + 1/3) = 1/2.
    CHECK(v.x[2] == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-14));
    CHECK(v.x[7] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(max_abs_diff(from_coherence_vector(v, gm), rho.matrix()) <= 1e-15);
  }
  SUBCASE("round trip on random states") {
    for (int i = 0; i < 1000; ++i) {
      const auto rho = DensityMatrix::validated(random_density(3));
      const auto v = to_coherence_vector(rho, gm);
      CHECK(v.norm_squared() <= 1.0 + 1e-10);
      CHECK(max_abs_diff(from_coherence_vector(v, gm), rho.matrix()) <= 1e-12);
    }
  }
  SUBCASE("non spin-1 input is rejected") {
    CHECK_THROWS_AS(to_coherence_vector(DensityMatrix::validated(ComplexMatrix::Identity(2, 2) / 2.0), gm),
                    DimensionError);
  }
}
