#include "chargeqfi/model.hpp"

#include <cmath>
#include <string>

#include "chargeqfi/errors.hpp"

namespace chargeqfi {

void SystemParams::validate() const {
  const double fields[] = {e_c1, e_c2, e_j1, e_j2, e_m, n_g1, n_g2, gamma};
  for (double v : fields) {
    if (!std::isfinite(v)) {
      throw PreconditionError("system parameters must be finite");
    }
  }
  if (gamma < 0.0) {
    throw PreconditionError("dephasing rate must be non-negative, got " +
                            std::to_string(gamma));
  }
}

SystemParams SystemParams::degenerate(double gamma, double e_j, double e_m) {
  SystemParams p;
  p.e_j1 = e_j;
  p.e_j2 = e_j;
  p.e_m = e_m;
  p.gamma = gamma;
  return p;
}

Kappa kappa_coefficients(const SystemParams& p) {
  return {2.0 * p.e_c1 * (1.0 - 2.0 * p.n_g1) + p.e_m * (1.0 - 2.0 * p.n_g2),
          2.0 * p.e_c2 * (1.0 - 2.0 * p.n_g2) + p.e_m * (1.0 - 2.0 * p.n_g1)};
}

double max_abs_diff(const ComplexMatrix4& a, const ComplexMatrix4& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix4& a, const ComplexMatrix4& b,
                  double abs_tol) {
  return max_abs_diff(a, b) <= abs_tol;
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

namespace {

ComplexMatrix4 kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  ComplexMatrix4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

ComplexMatrix4 on_qubit1(const Eigen::Matrix2cd& op) {
  return kron(op, Eigen::Matrix2cd::Identity());
}

ComplexMatrix4 on_qubit2(const Eigen::Matrix2cd& op) {
  return kron(Eigen::Matrix2cd::Identity(), op);
}

ComplexMatrix4 build_hamiltonian(const SystemParams& p) {
  const auto [k1, k2] = kappa_coefficients(p);
  const Eigen::Matrix2cd x = pauli_x();
  const Eigen::Matrix2cd z = pauli_z();
  const ComplexMatrix4 generator = k1 * on_qubit1(z) + k2 * on_qubit2(z) +
                                   p.e_j1 * on_qubit1(x) +
                                   p.e_j2 * on_qubit2(x) -
                                   2.0 * p.e_m * kron(z, z);
  return -0.5 * generator;
}

DensityMatrix DensityMatrix::checked(const ComplexMatrix4& m) {
  DensityMatrix rho = unchecked(m);
  const Check c = rho.check();
  if (!c.hermitian) {
    throw NumericalError("density matrix is not Hermitian (defect " +
                         std::to_string(rho.hermiticity_defect()) + ")");
  }
  if (!c.unit_trace) {
    throw NumericalError("density matrix trace deviates from 1");
  }
  if (!c.positive) {
    throw NumericalError("density matrix has a negative eigenvalue " +
                         std::to_string(rho.min_eigenvalue()));
  }
  return rho;
}

double DensityMatrix::purity() const {
  return (mat_ * mat_).trace().real();
}

double DensityMatrix::hermiticity_defect() const {
  return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix4 h = 0.5 * (mat_ + mat_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix4> solver(
      h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix::Check DensityMatrix::check() const {
  Check c;
  c.hermitian = hermiticity_defect() <= kHermitianTol;
  const Complex tr = trace();
  c.unit_trace = std::abs(tr.imag()) <= kTraceTol &&
                 std::abs(tr.real() - 1.0) <= kTraceTol;
  c.positive = min_eigenvalue() >= -kPositivityTol;
  return c;
}

DensityMatrix bell_state_psi_plus() {
  ComplexMatrix4 m = ComplexMatrix4::Zero();
  m(1, 1) = 0.5;
  m(2, 2) = 0.5;
  m(1, 2) = 0.5;
  m(2, 1) = 0.5;
  return DensityMatrix::unchecked(m);
}

}  // namespace chargeqfi
