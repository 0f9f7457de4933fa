#pragma once

#include <array>
#include <variant>

#include <Eigen/Dense>

#include "qspin/densmat.hpp"

namespace qspin {

using Vec3 = Eigen::Vector3d;

/// Spin quantum number stored as 2s so half-integers are exact.
class SpinQuantumNumber {
 public:
  explicit SpinQuantumNumber(int two_s);

  static SpinQuantumNumber half() { return SpinQuantumNumber(1); }
  static SpinQuantumNumber one() { return SpinQuantumNumber(2); }

  int two_s() const noexcept { return two_s_; }
  double s() const noexcept { return 0.5 * two_s_; }
  Eigen::Index dim() const noexcept { return two_s_ + 1; }

  friend bool operator==(SpinQuantumNumber, SpinQuantumNumber) = default;

 private:
  int two_s_;
};

/// (S_x, S_y, S_z) in the basis |s;s>, |s;s-1>, ..., |s;-s>, hbar = 1.
struct SpinOperators {
  SpinQuantumNumber spin;
  ComplexMatrix sx;
  ComplexMatrix sy;
  ComplexMatrix sz;

  const ComplexMatrix& component(int axis) const;
  /// v . S
  ComplexMatrix dot(const Vec3& v) const;
};

SpinOperators make_spin_operators(SpinQuantumNumber s);

/// The eight Gell-Mann matrices on the spin-1 basis |1;1>, |1;0>, |1;-1>.
struct GellMannBasis {
  std::array<ComplexMatrix, 8> lambdas;

  /// One-based access, lambda(1) ... lambda(8).
  const ComplexMatrix& lambda(int k) const { return lambdas.at(static_cast<std::size_t>(k - 1)); }
};

GellMannBasis make_gell_mann();

/// True iff S_x, S_y, S_z and S_x^2, S_z^2 decompose over the Gell-Mann basis
/// as expected for spin 1, entrywise within `tol`.
bool spin_from_gellmann_check(const SpinOperators& ops, const GellMannBasis& gm,
                              double tol = 1e-12);

struct CoherenceVector {
  std::array<double, 8> x{};

  double norm_squared() const;
};

/// x_i = (sqrt(3)/2) Tr(rho lambda_i). Requires d = 3.
CoherenceVector to_coherence_vector(const DensityMatrix& rho, const GellMannBasis& gm);
/// (1/3)(I + sqrt(3) x . lambda)
ComplexMatrix from_coherence_vector(const CoherenceVector& v, const GellMannBasis& gm);

/// rho = (1/d)(I + (m0/s) axis . S); for s = 1 this is (1/3)(I + m0 axis . S).
struct SpinTypeState {
  double m0 = 0.0;
  Vec3 axis = Vec3::UnitZ();
};

/// p |1;1><1;1| + (1-p) |1;-1><1;-1|, spin 1 only.
struct QutritMixtureState {
  double p = 1.0;
};

struct ExplicitState {
  ComplexMatrix matrix;
};

using InitialStateSpec = std::variant<SpinTypeState, QutritMixtureState, ExplicitState>;

DensityMatrix build_initial_state(const InitialStateSpec& spec, SpinQuantumNumber s);

}  // namespace qspin
