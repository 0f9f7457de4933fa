#include "qspin/spin_algebra.hpp"

#include <cmath>
#include <string>

#include "qspin/error.hpp"

namespace qspin {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_spin_one(Eigen::Index d, const char* what) {
  if (d != 3) {
    throw DimensionError(std::string(what) + ": requires a 3x3 (spin-1) matrix, got dim " +
                         std::to_string(d));
  }
}

}  // namespace

SpinQuantumNumber::SpinQuantumNumber(int two_s) : two_s_(two_s) {
  if (two_s < 1) throw InvalidStateError("spin quantum number needs two_s >= 1");
}

const ComplexMatrix& SpinOperators::component(int axis) const {
  switch (axis) {
    case 0: return sx;
    case 1: return sy;
    case 2: return sz;
    default: throw DimensionError("spin component index must be 0, 1 or 2");
  }
}

ComplexMatrix SpinOperators::dot(const Vec3& v) const {
  return v.x() * sx + v.y() * sy + v.z() * sz;
}

SpinOperators make_spin_operators(SpinQuantumNumber s) {
  const Eigen::Index d = s.dim();
  const double sv = s.s();
  ComplexMatrix sz = ComplexMatrix::Zero(d, d);
  ComplexMatrix splus = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = sv - static_cast<double>(k);
    sz(k, k) = m;
    // <m+1| S+ |m> sits one row above |m>.
    if (k > 0) splus(k - 1, k) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix sminus = splus.adjoint();
  return SpinOperators{s, 0.5 * (splus + sminus), (splus - sminus) / (2.0 * kI), sz};
}

GellMannBasis make_gell_mann() {
  GellMannBasis gm;
  for (auto& l : gm.lambdas) l = ComplexMatrix::Zero(3, 3);
  auto& l = gm.lambdas;
  l[0](0, 1) = 1.0;  l[0](1, 0) = 1.0;
  l[1](0, 1) = -kI;  l[1](1, 0) = kI;
  l[2](0, 0) = 1.0;  l[2](1, 1) = -1.0;
  l[3](0, 2) = 1.0;  l[3](2, 0) = 1.0;
  l[4](0, 2) = -kI;  l[4](2, 0) = kI;
  l[5](1, 2) = 1.0;  l[5](2, 1) = 1.0;
  l[6](1, 2) = -kI;  l[6](2, 1) = kI;
  l[7](0, 0) = 1.0 / kSqrt3;
  l[7](1, 1) = 1.0 / kSqrt3;
  l[7](2, 2) = -2.0 / kSqrt3;
  return gm;
}

bool spin_from_gellmann_check(const SpinOperators& ops, const GellMannBasis& gm, double tol) {
  if (ops.spin != SpinQuantumNumber::one()) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const ComplexMatrix sx = (gm.lambda(1) + gm.lambda(6)) / kSqrt2;
  const ComplexMatrix sy = (gm.lambda(2) + gm.lambda(7)) / kSqrt2;
  const ComplexMatrix sz = 0.5 * (gm.lambda(3) + kSqrt3 * gm.lambda(8));
  const ComplexMatrix sx2 = (2.0 / 3.0) * id - 0.25 * gm.lambda(3) + 0.5 * gm.lambda(4) +
                            gm.lambda(8) / (4.0 * kSqrt3);
  const ComplexMatrix sz2 = (2.0 / 3.0) * id + 0.5 * gm.lambda(3) - gm.lambda(8) / (2.0 * kSqrt3);
  return max_abs_diff(ops.sx, sx) <= tol && max_abs_diff(ops.sy, sy) <= tol &&
         max_abs_diff(ops.sz, sz) <= tol && max_abs_diff(ops.sx * ops.sx, sx2) <= tol &&
         max_abs_diff(ops.sz * ops.sz, sz2) <= tol;
}

double CoherenceVector::norm_squared() const {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

CoherenceVector to_coherence_vector(const DensityMatrix& rho, const GellMannBasis& gm) {
  require_spin_one(rho.dim(), "to_coherence_vector");
  CoherenceVector v;
  for (int k = 0; k < 8; ++k) {
    v.x[static_cast<std::size_t>(k)] =
        0.5 * kSqrt3 * trace_product(rho.matrix(), gm.lambda(k + 1)).real();
  }
  return v;
}

ComplexMatrix from_coherence_vector(const CoherenceVector& v, const GellMannBasis& gm) {
  ComplexMatrix m = ComplexMatrix::Identity(3, 3);
  for (int k = 0; k < 8; ++k) m += kSqrt3 * v.x[static_cast<std::size_t>(k)] * gm.lambda(k + 1);
  return m / 3.0;
}

DensityMatrix build_initial_state(const InitialStateSpec& spec, SpinQuantumNumber s) {
  const Eigen::Index d = s.dim();
  return std::visit(
      overloaded{
          [&](const SpinTypeState& st) {
            if (!(st.m0 >= 0.0 && st.m0 <= 1.0)) {
              throw InvalidStateError("m0 exceeds positivity bound: need 0 <= m0 <= 1, got " +
                                      std::to_string(st.m0));
            }
            if (!st.axis.allFinite() || std::abs(st.axis.norm() - 1.0) > 1e-9) {
              throw InvalidStateError("spin-type axis must be a unit vector");
            }
            const SpinOperators ops = make_spin_operators(s);
            const ComplexMatrix m = (ComplexMatrix::Identity(d, d) +
                                     (st.m0 / s.s()) * ops.dot(st.axis)) /
                                    static_cast<double>(d);
            return DensityMatrix::validated(hermitian_part(m));
          },
          [&](const QutritMixtureState& q) {
            if (d != 3) throw DimensionError("qutrit_mixture state requires spin 1");
            if (!(q.p >= 0.0 && q.p <= 1.0)) {
              throw InvalidStateError("qutrit mixture weight p must lie in [0, 1]");
            }
            ComplexMatrix m = ComplexMatrix::Zero(3, 3);
            m(0, 0) = q.p;
            m(2, 2) = 1.0 - q.p;
            return DensityMatrix::validated(m);
          },
          [&](const ExplicitState& e) {
            if (e.matrix.rows() != d || e.matrix.cols() != d) {
              throw DimensionError("explicit state dimension does not match spin");
            }
            return DensityMatrix::validated(e.matrix);
          },
      },
      spec);
}

}  // namespace qspin
