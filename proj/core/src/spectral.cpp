#include "chargeqfi/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "chargeqfi/analytic.hpp"
#include "chargeqfi/errors.hpp"

namespace chargeqfi {

ComplexMatrix4 SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() *
         eigenvectors.adjoint();
}

void fix_gauge(ComplexVector4& v) {
  const double biggest = v.cwiseAbs().maxCoeff();
  int pivot = 0;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(v(k)) >= biggest - kGaugeTieTol) {
      pivot = k;
      break;
    }
  }
  const double mag = std::abs(v(pivot));
  if (mag == 0.0) return;
  v *= std::conj(v(pivot)) / mag;
  v(pivot) = Complex(std::abs(v(pivot)), 0.0);
}

SpectralDecomposition spectral_decompose(const ComplexMatrix4& rho) {
  if (!rho.allFinite()) {
    throw NumericalError("spectral_decompose: non-finite input");
  }
  const ComplexMatrix4 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix4> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spectral_decompose: eigen solver did not converge");
  }
  // Solver output is ascending; reverse to descending, stable for ties.
  std::array<int, 4> order{3, 2, 1, 0};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });

  SpectralDecomposition out;
  for (int i = 0; i < 4; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(order[i]);
    ComplexVector4 v = solver.eigenvectors().col(order[i]);
    fix_gauge(v);
    out.eigenvectors.col(i) = v;
  }
  for (int i = 0; i < 4; ++i) {
    const double r =
        (rho * out.vector(i) - out.eigenvalues(i) * out.vector(i)).norm();
    out.residual = std::max(out.residual, r);
  }
  if (out.residual > 1e-8) {
    throw NumericalError("spectral_decompose: eigen residual " +
                         std::to_string(out.residual) + " exceeds 1e-8");
  }
  return out;
}

ClosedFormEigensystem closed_form_eigensystem(const SystemParams& p, double t) {
  const AnalyticCoefficients c = analytic_coefficients(p, t);
  const ComplexMatrix4 rho = analytic_state(p, t).matrix();
  const double ej = p.e_j1;
  const double em = p.e_m;
  const double g = p.gamma;
  const double s2 = std::sqrt(2.0);
  const double arg1 = s2 * c.lambda1 * t;
  const double arg2 = s2 * c.lambda2 * t;
  const double decay = std::exp(-2.0 * g * t);

  ClosedFormEigensystem out;
  EigStructureParams& s = out.structure;
  s.alpha = ej * em * decay / (4.0 * c.lambda3) *
            (std::cosh(arg2) - std::cos(arg1));
  s.beta = s2 * ej * decay / (8.0 * c.lambda3) *
           (c.lambda2 * std::sinh(arg2) + c.lambda1 * std::sin(arg1));
  if (s.alpha == 0.0 && s.beta == 0.0) {
    throw DomainError("closed-form eigensystem: alpha = beta = 0, theta undefined");
  }
  s.theta = std::atan2(s.beta, s.alpha);
  const double radius = std::hypot(s.alpha, s.beta);

  const double r11 = rho(0, 0).real();
  const double r14 = rho(0, 3).real();
  const double r22 = rho(1, 1).real();
  const double r23 = rho(1, 2).real();
  const double r12r21 = (rho(0, 1) * rho(1, 0)).real();
  const double disc_rad =
      (r11 + r14 + r22 + r23) * (r11 + r14 + r22 + r23) + 16.0 * r12r21;
  if (disc_rad < 0.0) {
    throw DomainError("closed-form eigensystem: negative discriminant in mu");
  }
  const double disc = std::sqrt(disc_rad);
  const double base = -r11 - r14 + r22 + r23;
  s.mu_plus_eig = (base + disc) / (4.0 * radius);
  s.mu_minus_eig = (base - disc) / (4.0 * radius);

  out.eigenvalues(0) = r11 - r14;
  out.eigenvalues(1) = r22 - r23;
  out.eigenvalues(2) = -2.0 * radius * s.mu_plus_eig;
  out.eigenvalues(3) = -2.0 * radius * s.mu_minus_eig;

  const double inv_s2 = 1.0 / s2;
  out.eigenvectors.col(0) << -inv_s2, 0.0, 0.0, inv_s2;
  out.eigenvectors.col(1) << 0.0, -inv_s2, inv_s2, 0.0;
  const Complex phase = std::polar(1.0, -s.theta);
  auto branch = [&](double mu) {
    ComplexVector4 v;
    v << 1.0, mu * phase, mu * phase, 1.0;
    return ComplexVector4(v / std::sqrt(2.0 * (1.0 + mu * mu)));
  };
  out.eigenvectors.col(2) = branch(s.mu_minus_eig);
  out.eigenvectors.col(3) = branch(s.mu_plus_eig);
  return out;
}

double subspace_angle(const ComplexVector4& a0, const ComplexVector4& a1,
                      const ComplexVector4& b0, const ComplexVector4& b1) {
  Eigen::Matrix<Complex, 4, 2> a, b;
  a << a0, a1;
  b << b0, b1;
  const Eigen::Matrix<Complex, 4, 2> qa =
      a.householderQr().householderQ() * Eigen::Matrix<Complex, 4, 2>::Identity();
  const Eigen::Matrix<Complex, 4, 2> qb =
      b.householderQr().householderQ() * Eigen::Matrix<Complex, 4, 2>::Identity();
  // Largest singular value of the part of Qb outside span(Qa) is the sine
  // of the largest principal angle.
  const Eigen::Matrix<Complex, 4, 2> outside = qb - qa * (qa.adjoint() * qb);
  Eigen::JacobiSVD<Eigen::Matrix<Complex, 4, 2>> svd(outside);
  return svd.singularValues()(0);
}

}  // namespace chargeqfi
