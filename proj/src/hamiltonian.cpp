#include "qspin/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "qspin/error.hpp"

namespace qspin {

HamiltonianMatrix build_hamiltonian(const HamiltonianSpec& spec, const SpinOperators& ops) {
  if (!spec.b_field.allFinite() || !std::isfinite(spec.k_perp) || !std::isfinite(spec.k_par)) {
    throw InvalidStateError("hamiltonian parameters must be finite");
  }
  ComplexMatrix h = -ops.dot(spec.b_field) + spec.k_perp * (ops.sx * ops.sx) +
                    spec.k_par * (ops.sz * ops.sz);
  return HamiltonianMatrix{hermitian_part(h)};
}

GellMannDecomposition gellmann_decompose(const HamiltonianMatrix& h, const GellMannBasis& gm) {
  if (h.h.rows() != 3 || h.h.cols() != 3) {
    throw DimensionError("gellmann_decompose: requires a 3x3 matrix, got dim " +
                         std::to_string(h.h.rows()));
  }
  GellMannDecomposition out;
  out.identity = h.h.trace().real() / 3.0;
  for (int k = 0; k < 8; ++k) {
    out.coeffs[static_cast<std::size_t>(k)] = 0.5 * trace_product(h.h, gm.lambda(k + 1)).real();
  }
  return out;
}

ProportionalityReport triple_commutator_check(const DensityMatrix& rho0,
                                              const ComplexMatrix& target,
                                              const ComplexMatrix& reference, double rel_tol) {
  const ComplexMatrix& r = rho0.matrix();
  ProportionalityReport rep;
  rep.triple = commutator(r, commutator(r, commutator(r, target)));

  const double ref_norm2 = reference.squaredNorm();
  const double triple_norm = rep.triple.norm();
  if (ref_norm2 == 0.0 || std::sqrt(ref_norm2) <= 1e-300) {
    rep.degenerate = true;
    rep.proportional = triple_norm == 0.0;
    return rep;
  }
  // Least-squares multiple: <ref, triple> / <ref, ref> with <a,b> = Tr(a^dagger b).
  rep.ratio = reference.conjugate().cwiseProduct(rep.triple).sum() / ref_norm2;
  const double residual = (rep.triple - rep.ratio * reference).norm();
  rep.relative_residual = triple_norm > 0.0 ? residual / triple_norm : 0.0;
  rep.proportional = rep.relative_residual <= rel_tol;
  return rep;
}

ProportionalityReport zeeman_triple_commutator_check(const DensityMatrix& rho0, const Vec3& b,
                                                     const SpinOperators& ops, double rel_tol) {
  const ComplexMatrix bs = ops.dot(b);
  return triple_commutator_check(rho0, bs, commutator(rho0.matrix(), bs), rel_tol);
}

ProportionalityReport anisotropy_triple_commutator_check(const DensityMatrix& rho0,
                                                         const GellMannBasis& gm,
                                                         double rel_tol) {
  if (rho0.dim() != 3) throw DimensionError("anisotropy check requires spin 1");
  return triple_commutator_check(rho0, gm.lambda(4), gm.lambda(5), rel_tol);
}

}  // namespace qspin
