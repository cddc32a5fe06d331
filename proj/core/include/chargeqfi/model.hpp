#pragma once

#include <complex>

#include <Eigen/Dense>

namespace chargeqfi {

using Complex = std::complex<double>;
using ComplexMatrix4 = Eigen::Matrix4cd;
using ComplexVector4 = Eigen::Vector4cd;

// Physical constants of the two-qubit charge Hamiltonian plus the dephasing
// rate. Energies are dimensionless (hbar = 1); time is in inverse energy.
struct SystemParams {
  double e_c1 = 0.0;
  double e_c2 = 0.0;
  double e_j1 = 0.0;
  double e_j2 = 0.0;
  double e_m = 0.0;
  double n_g1 = 0.5;
  double n_g2 = 0.5;
  double gamma = 0.0;

  // Identical qubits biased at the charge degeneracy point.
  bool degenerate_identical() const {
    return n_g1 == 0.5 && n_g2 == 0.5 && e_j1 == e_j2;
  }

  // Throws PreconditionError on negative gamma or non-finite entries.
  void validate() const;

  // Degeneracy-point parameters with E_J1 = E_J2 = e_j.
  static SystemParams degenerate(double gamma, double e_j, double e_m);
};

struct Kappa {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
};

Kappa kappa_coefficients(const SystemParams& p);

// Largest absolute entry of a - b.
double max_abs_diff(const ComplexMatrix4& a, const ComplexMatrix4& b);

bool approx_equal(const ComplexMatrix4& a, const ComplexMatrix4& b,
                  double abs_tol);

// Pauli operators on a single qubit (sigma_z|0> = +|0>).
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_z();

// Single-qubit operator embedded on qubit 1 (left factor) or qubit 2.
ComplexMatrix4 on_qubit1(const Eigen::Matrix2cd& op);
ComplexMatrix4 on_qubit2(const Eigen::Matrix2cd& op);

// H = -1/2 {k1 Z(x)I + k2 I(x)Z + EJ1 X(x)I + EJ2 I(x)X - 2 Em Z(x)Z}
// in the basis {|00>, |01>, |10>, |11>}.
ComplexMatrix4 build_hamiltonian(const SystemParams& p);

// 4x4 complex Hermitian, unit-trace, positive semidefinite state.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-9;
  static constexpr double kPositivityTol = 1e-9;

  DensityMatrix() = default;

  // Wraps a matrix without checking the density-matrix invariants. Used for
  // closed-form expressions that are audited rather than trusted.
  static DensityMatrix unchecked(const ComplexMatrix4& m) {
    DensityMatrix rho;
    rho.mat_ = m;
    return rho;
  }

  // Throws NumericalError when any invariant fails.
  static DensityMatrix checked(const ComplexMatrix4& m);

  const ComplexMatrix4& matrix() const { return mat_; }
  Complex operator()(int row, int col) const { return mat_(row, col); }

  Complex trace() const { return mat_.trace(); }
  double purity() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;

  struct Check {
    bool hermitian = false;
    bool unit_trace = false;
    bool positive = false;
    bool ok() const { return hermitian && unit_trace && positive; }
  };
  Check check() const;

 private:
  ComplexMatrix4 mat_ = ComplexMatrix4::Zero();
};

// |psi+><psi+| with |psi+> = (|01> + |10>)/sqrt(2).
DensityMatrix bell_state_psi_plus();

}  // namespace chargeqfi
