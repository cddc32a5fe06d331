#include "chargeqfi/qfi.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "chargeqfi/dynamics.hpp"
#include "chargeqfi/errors.hpp"
#include "oracles.hpp"

namespace chargeqfi {
namespace {

SystemParams reference(double g = 0.4, double e = 0.1) {
  return SystemParams::degenerate(g, e, e);
}

constexpr Estimand kAll[] = {Estimand::kGamma, Estimand::kEJ, Estimand::kEm};

TEST(Estimand, ParseAndShift) {
  EXPECT_EQ(parse_estimand("gamma"), Estimand::kGamma);
  EXPECT_EQ(parse_estimand("ej"), Estimand::kEJ);
  EXPECT_EQ(parse_estimand("em"), Estimand::kEm);
  EXPECT_FALSE(parse_estimand("ec").has_value());
  const SystemParams s = with_estimand(reference(), Estimand::kEJ, 0.3);
  EXPECT_EQ(s.e_j1, 0.3);
  EXPECT_EQ(s.e_j2, 0.3);
  EXPECT_EQ(estimand_value(s, Estimand::kEJ), 0.3);
  EXPECT_EQ(with_estimand(reference(), Estimand::kEm, 0.7).e_m, 0.7);
  EXPECT_EQ(with_estimand(reference(), Estimand::kGamma, 0.9).gamma, 0.9);
}

TEST(DRho, VanishesAtTimeZero) {
  for (Estimand eta : kAll) {
    EXPECT_LE(d_rho(reference(), 0.0, eta).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(DRho, RichardsonConsistent) {
  for (Estimand eta : kAll) {
    for (double t : {0.5, 2.0, 7.0}) {
      const ComplexMatrix4 a = d_rho(reference(), t, eta, 1e-4);
      const ComplexMatrix4 b = d_rho(reference(), t, eta, 5e-5);
      // The O(h^2) truncation term grows with the evolution time.
      EXPECT_LE(max_abs_diff(a, b), 1e-7 * std::max(1.0, t * t))
          << to_string(eta) << " t=" << t;
      EXPECT_LE(std::abs(a.trace()), 1e-10);
      EXPECT_LE(max_abs_diff(a, a.adjoint()), 1e-10);
    }
  }
}

TEST(DRho, StepHalvingAtReferencePoint) {
  const ComplexMatrix4 a = d_rho(reference(), 1.0, Estimand::kGamma, 1e-4);
  const ComplexMatrix4 b = d_rho(reference(), 1.0, Estimand::kGamma, 5e-5);
  EXPECT_LE(max_abs_diff(a, b), 1e-7);
}

TEST(DRho, GammaDerivativeOfDephasedCoherence) {
  // rho_23 decays as e^{-Gamma t}/2 when only dephasing acts on the
  // single-excitation coherence: H = 0 reduces it to this exactly.
  SystemParams p;
  p.gamma = 0.4;
  const double t = 1.5;
  const ComplexMatrix4 d = d_rho(p, t, Estimand::kGamma);
  EXPECT_NEAR(d(1, 2).real(), -0.5 * t * std::exp(-p.gamma * t), 1e-8);
}

TEST(DRho, Preconditions) {
  SystemParams p = reference(5e-5);
  EXPECT_THROW(d_rho(p, 1.0, Estimand::kGamma, 1e-4), PreconditionError);
  EXPECT_NO_THROW(d_rho(p, 1.0, Estimand::kEJ, 1e-4));
  EXPECT_THROW(d_rho(reference(), 1.0, Estimand::kEJ, 1e-8), PreconditionError);
  EXPECT_THROW(d_rho(reference(), 1.0, Estimand::kEJ, 1e-2), PreconditionError);
}

TEST(SpectralDerivative, EigenvalueDerivativesSumToZero) {
  for (Estimand eta : kAll) {
    const SpectralDerivative d = spectral_derivative(reference(), 2.0, eta);
    EXPECT_NEAR(d.d_eigenvalues.sum(), 0.0, 1e-9);
    EXPECT_LE(d.gauge_residual, 1e-3);
  }
}

TEST(SpectralDerivative, ParallelTransportGauge) {
  const SpectralDerivative d = spectral_derivative(reference(), 3.0, Estimand::kEm);
  for (int i = 0; i < 4; ++i) {
    if (!d.active[i]) continue;
    const Complex ip = d.base.vector(i).dot(d.d_eigenvectors.col(i));
    EXPECT_LE(std::abs(ip.imag()), 1e-6);
  }
}

TEST(SpectralDerivative, ConstantEigenplaneBranchesDoNotMove) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector4 v1, v2;
  v1 << -h, 0, 0, h;
  v2 << 0, -h, h, 0;
  for (Estimand eta : kAll) {
    const SpectralDerivative d = spectral_derivative(reference(), 2.0, eta);
    for (int i = 0; i < 4; ++i) {
      const double w = std::norm(v1.dot(d.base.vector(i))) +
                       std::norm(v2.dot(d.base.vector(i)));
      // Branches lying in span{V1, V2}: moving within that plane only.
      if (w < 1.0 - 1e-10 || !d.active[i]) continue;
      const ComplexVector4 dv = d.d_eigenvectors.col(i);
      const ComplexVector4 out =
          dv - v1 * v1.dot(dv) - v2 * v2.dot(dv);
      EXPECT_LE(out.norm(), 1e-6) << to_string(eta) << " branch " << i;
    }
  }
}

TEST(Qfi, ZeroAtTimeZero) {
  for (Estimand eta : kAll) {
    const QfiBreakdown q = qfi_components(reference(), 0.0, eta);
    EXPECT_LE(std::abs(q.f_total), 1e-8) << to_string(eta);
    EXPECT_TRUE(std::isinf(q.cramer_rao_bound));
  }
}

TEST(Qfi, DecompositionMatchesSld) {
  for (Estimand eta : kAll) {
    for (double t : {0.1, 1.0, 4.0, 10.0}) {
      const QfiBreakdown q = qfi_components(reference(), t, eta);
      const double sld = qfi_sld(reference(), t, eta);
      EXPECT_NEAR(q.f_total, q.f_c + q.f_p - q.f_m, 1e-12);
      EXPECT_LE(std::abs(q.f_total - sld), 1e-5 * std::max(sld, 1e-3))
          << to_string(eta) << " t=" << t;
      EXPECT_GE(q.f_c, -1e-12);
      EXPECT_GE(q.f_p, -1e-12);
      EXPECT_GE(q.f_m, -1e-12);
    }
  }
}

TEST(Qfi, MatchesBuresFidelityOracle) {
  const double h = 1e-4;
  for (Estimand eta : kAll) {
    for (double t : {0.5, 3.0}) {
      const SystemParams p = reference();
      const double v = estimand_value(p, eta);
      const ComplexMatrix4 plus =
          propagate_expm(bell_state_psi_plus(), with_estimand(p, eta, v + h), t).matrix();
      const ComplexMatrix4 minus =
          propagate_expm(bell_state_psi_plus(), with_estimand(p, eta, v - h), t).matrix();
      const double bures = oracle::bures_qfi(minus, plus, h);
      const double f = qfi_components(p, t, eta).f_total;
      EXPECT_NEAR(f, bures, 1e-3 * std::max(bures, 1.0)) << to_string(eta) << " t=" << t;
    }
  }
}

TEST(Qfi, UnitaryLimitIsPurelyGeometric) {
  const SystemParams p = reference(0.0);
  const QfiBreakdown q = qfi_components(p, 1.0, Estimand::kEJ);
  EXPECT_LE(std::abs(q.f_c), 1e-6);
  EXPECT_LE(std::abs(q.f_m), 1e-6);
  EXPECT_NEAR(q.f_total, q.f_p, 1e-6);
  EXPECT_NEAR(q.f_total, qfi_sld(p, 1.0, Estimand::kEJ), 1e-6);
  EXPECT_GT(q.f_total, 1.0);
  EXPECT_EQ(q.diagnostics.clamped_eigenvalues, 3);
}

TEST(Qfi, PureStateFormula) {
  // For a pure state F = 4(<d psi|d psi> - |<psi|d psi>|^2). Here psi(t) is
  // the Bell state propagated by exp(-iHt).
  const SystemParams p = reference(0.0, 0.2);
  const double t = 2.0, h = 1e-5;
  auto psi = [&](double ej) {
    SystemParams q = with_estimand(p, Estimand::kEJ, ej);
    const Eigen::Matrix4cd u =
        (Complex(0, -t) * oracle::hamiltonian(q.e_c1, q.e_c2, q.e_j1, q.e_j2, q.e_m,
                                              q.n_g1, q.n_g2))
            .exp();
    ComplexVector4 b;
    b << 0, 1, 1, 0;
    return ComplexVector4(u * b / std::sqrt(2.0));
  };
  const ComplexVector4 v = psi(0.2);
  const ComplexVector4 dv = (psi(0.2 + h) - psi(0.2 - h)) / (2 * h);
  const double expected = 4.0 * (dv.squaredNorm() - std::norm(v.dot(dv)));
  EXPECT_NEAR(qfi_components(p, t, Estimand::kEJ).f_total, expected, 1e-5 * expected);
}

TEST(Qfi, GaugeInsensitive) {
  const SystemParams p = reference();
  const double t = 2.5, h = kDefaultFdStep;
  auto decompose_at = [&](double shift) {
    return spectral_decompose(propagate_expm(
        bell_state_psi_plus(), with_estimand(p, Estimand::kEm, p.e_m + shift), t));
  };
  const SpectralDecomposition base = decompose_at(0.0);
  SpectralDecomposition rotated = base;
  for (int i = 0; i < 4; ++i) {
    rotated.eigenvectors.col(i) *= std::polar(1.0, 0.7 + 1.3 * i);
  }
  const SpectralDecomposition plus = decompose_at(h), minus = decompose_at(-h);
  const QfiBreakdown a = qfi_from_derivative(spectral_derivative(base, plus, minus, h));
  const QfiBreakdown b =
      qfi_from_derivative(spectral_derivative(rotated, plus, minus, h));
  EXPECT_NEAR(a.f_total, b.f_total, 1e-10);
  EXPECT_NEAR(a.f_c, b.f_c, 1e-10);
  EXPECT_NEAR(a.f_p, b.f_p, 1e-10);
  EXPECT_NEAR(a.f_m, b.f_m, 1e-10);
}

TEST(Qfi, StepRobust) {
  for (Estimand eta : kAll) {
    const double a = qfi_components(reference(), 2.0, eta, 1e-4).f_total;
    const double b = qfi_components(reference(), 2.0, eta, 1e-5).f_total;
    EXPECT_NEAR(a, b, 1e-5 * std::max(a, 1.0)) << to_string(eta);
    const QfiBreakdown q = qfi_components(reference(), 2.0, eta);
    EXPECT_GE(q.diagnostics.halving_rel_change, 0.0);
    EXPECT_LE(q.diagnostics.halving_rel_change, 1e-5);
    EXPECT_EQ(q.diagnostics.step, kDefaultFdStep);
  }
}

TEST(Qfi, SldOfStaticStateIsZero) {
  const SpectralDecomposition base = spectral_decompose(bell_state_psi_plus());
  EXPECT_EQ(qfi_sld(base, ComplexMatrix4::Zero()), 0.0);
}

TEST(CramerRao, Bound) {
  EXPECT_EQ(cramer_rao(4.0), 0.25);
  EXPECT_TRUE(std::isinf(cramer_rao(0.0)));
  EXPECT_TRUE(std::isinf(cramer_rao(-1e-9)));
  EXPECT_THROW(cramer_rao(-1e-3), PreconditionError);
  const QfiBreakdown q = qfi_components(reference(), 1.0, Estimand::kGamma);
  EXPECT_NEAR(q.f_total * q.cramer_rao_bound, 1.0, 1e-12);
}

}  // namespace
}  // namespace chargeqfi
