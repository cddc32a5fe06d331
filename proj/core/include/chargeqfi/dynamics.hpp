#pragma once

#include <Eigen/Dense>

#include "chargeqfi/model.hpp"

namespace chargeqfi {

using Superoperator = Eigen::Matrix<Complex, 16, 16>;
using VecState = Eigen::Matrix<Complex, 16, 1>;

// Column stacking: vec(rho)[i + 4 j] = rho(i, j).
VecState vectorize(const ComplexMatrix4& m);
ComplexMatrix4 unvectorize(const VecState& v);

// d(rho)/dt = -i[H, rho] + (Gamma/8) sum_j (2 Z_j rho Z_j - Z_j Z_j rho - rho Z_j Z_j)
ComplexMatrix4 lindblad_rhs(const ComplexMatrix4& rho, const SystemParams& p);
inline ComplexMatrix4 lindblad_rhs(const DensityMatrix& rho,
                                   const SystemParams& p) {
  return lindblad_rhs(rho.matrix(), p);
}

// Generator of the master equation acting on column-stacked states.
// Immutable once built.
class Liouvillian {
 public:
  explicit Liouvillian(const SystemParams& p);

  const Superoperator& matrix() const { return op_; }
  const SystemParams& params() const { return params_; }

  ComplexMatrix4 apply(const ComplexMatrix4& rho) const;

  // exp(L t) as a 16x16 propagator.
  Superoperator propagator(double t) const;

  // Largest |Tr L[E_ij]| over the 16 matrix units.
  double trace_defect() const;

 private:
  SystemParams params_;
  Superoperator op_;
};

inline Liouvillian build_liouvillian(const SystemParams& p) {
  return Liouvillian(p);
}

// Tolerance beyond which a propagated state is treated as a kernel failure.
inline constexpr double kPropagationContractTol = 1e-8;

// rho(t) = unvec(exp(L t) vec(rho0)). Throws NumericalError when the result
// breaks trace or Hermiticity by more than kPropagationContractTol.
DensityMatrix propagate_expm(const DensityMatrix& rho0, const SystemParams& p,
                             double t);
DensityMatrix propagate_expm(const DensityMatrix& rho0, const Liouvillian& l,
                             double t);

// Adaptive Dormand-Prince integration of lindblad_rhs from 0 to t.
// rel_tol must lie in [1e-12, 1e-4]; the absolute floor is 1e-12.
DensityMatrix propagate_rk(const DensityMatrix& rho0, const SystemParams& p,
                           double t, double rel_tol = 1e-9);

}  // namespace chargeqfi
