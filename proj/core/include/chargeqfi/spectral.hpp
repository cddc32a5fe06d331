#pragma once

#include <Eigen/Dense>

#include "chargeqfi/model.hpp"

namespace chargeqfi {

// Eigenvalues at or below this value are treated as exactly zero when
// deciding which QFI terms to include.
inline constexpr double kEigenvalueClamp = 1e-12;

// Eigendecomposition with eigenvalues sorted descending (ties keep solver
// order) and each eigenvector phased so its largest-magnitude entry is real
// and non-negative (lowest index among ties).
struct SpectralDecomposition {
  Eigen::Vector4d eigenvalues = Eigen::Vector4d::Zero();
  ComplexMatrix4 eigenvectors = ComplexMatrix4::Identity();  // columns
  double residual = 0.0;  // max_i |rho v_i - eps_i v_i|

  ComplexVector4 vector(int i) const { return eigenvectors.col(i); }
  ComplexMatrix4 reconstruct() const;
};

// Tie window used by the gauge rule when two entries have equal magnitude.
inline constexpr double kGaugeTieTol = 1e-6;

// Rephases v in place per the gauge rule.
void fix_gauge(ComplexVector4& v);

// Throws NumericalError when the eigen residual exceeds 1e-8.
SpectralDecomposition spectral_decompose(const ComplexMatrix4& rho);
inline SpectralDecomposition spectral_decompose(const DensityMatrix& rho) {
  return spectral_decompose(rho.matrix());
}

// Structure constants of the closed-form eigenvectors. theta uses
// atan2(beta, alpha), which agrees with arctan(beta/alpha) for alpha > 0 and
// picks the branch by quadrant otherwise.
struct EigStructureParams {
  double theta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double mu_plus_eig = 0.0;
  double mu_minus_eig = 0.0;
};

// Closed-form eigenvalues and eigenvectors, evaluated from the closed-form
// closed-form state. Index i holds epsilon_{i+1} / V_{i+1}.
struct ClosedFormEigensystem {
  Eigen::Vector4d eigenvalues = Eigen::Vector4d::Zero();
  ComplexMatrix4 eigenvectors = ComplexMatrix4::Zero();  // columns
  EigStructureParams structure;
};

// Audit-only path; never feeds the QFI. Throws DomainError when
// alpha = beta = 0 (theta undefined) and propagates closed-form errors.
ClosedFormEigensystem closed_form_eigensystem(const SystemParams& p, double t);

// Largest principal-angle sine between span{a0, a1} and span{b0, b1}.
double subspace_angle(const ComplexVector4& a0, const ComplexVector4& a1,
                      const ComplexVector4& b0, const ComplexVector4& b1);

}  // namespace chargeqfi
