#pragma once

#include <array>

#include "qspin/densmat.hpp"
#include "qspin/spin_algebra.hpp"

namespace qspin {

/// Zeeman field plus two-axis anisotropy. Energies in units of gamma_g B_0,
/// time in units of (gamma_g B_0)^-1.
struct HamiltonianSpec {
  Vec3 b_field = Vec3::Zero();
  double k_perp = 0.0;  // coefficient of S_x^2
  double k_par = 0.0;   // coefficient of S_z^2
};

struct HamiltonianMatrix {
  ComplexMatrix h;
};

/// H = -B.S + K_perp S_x^2 + K_par S_z^2
HamiltonianMatrix build_hamiltonian(const HamiltonianSpec& spec, const SpinOperators& ops);

struct GellMannDecomposition {
  double identity = 0.0;          // c0
  std::array<double, 8> coeffs{};  // coefficient of lambda_1 ... lambda_8
};

/// h = c0 I + sum_i coeffs_i lambda_i with coeffs_i = Tr(h lambda_i)/2.
GellMannDecomposition gellmann_decompose(const HamiltonianMatrix& h, const GellMannBasis& gm);

struct ProportionalityReport {
  ComplexMatrix triple;       // [rho0, [rho0, [rho0, target]]]
  bool degenerate = false;    // reference has zero norm
  bool proportional = false;
  Complex ratio{0.0, 0.0};    // triple ~= ratio * reference
  double relative_residual = 0.0;
};

/// Computes the triple commutator of `target` with rho0 and tests whether it
/// is a complex multiple of `reference` within `rel_tol` (Frobenius norm).
ProportionalityReport triple_commutator_check(const DensityMatrix& rho0,
                                              const ComplexMatrix& target,
                                              const ComplexMatrix& reference,
                                              double rel_tol = 1e-10);

/// Zeeman case: target B.S, reference [rho0, B.S].
ProportionalityReport zeeman_triple_commutator_check(const DensityMatrix& rho0, const Vec3& b,
                                                     const SpinOperators& ops,
                                                     double rel_tol = 1e-10);

/// Anisotropy case: target lambda_4, reference lambda_5.
ProportionalityReport anisotropy_triple_commutator_check(const DensityMatrix& rho0,
                                                         const GellMannBasis& gm,
                                                         double rel_tol = 1e-10);

}  // namespace qspin
