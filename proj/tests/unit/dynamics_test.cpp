#include "chargeqfi/dynamics.hpp"

#include <random>

#include <gtest/gtest.h>

#include "chargeqfi/errors.hpp"
#include "chargeqfi/ode.hpp"

namespace chargeqfi {
namespace {

ComplexMatrix4 unit(int r, int c) {
  ComplexMatrix4 m = ComplexMatrix4::Zero();
  m(r, c) = 1.0;
  return m;
}

ComplexMatrix4 random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(rng), g(rng));
  ComplexMatrix4 rho = a * a.adjoint();
  return rho / rho.trace();
}

SystemParams generic_params() {
  SystemParams p;
  p.e_c1 = 0.4;
  p.e_c2 = 0.25;
  p.e_j1 = 0.13;
  p.e_j2 = 0.08;
  p.e_m = 0.07;
  p.n_g1 = 0.45;
  p.n_g2 = 0.6;
  p.gamma = 0.35;
  return p;
}

int flips(int a, int b) { return ((a ^ b) & 1) + (((a ^ b) >> 1) & 1); }

TEST(LindbladRhs, NoDephasingIsPureCommutator) {
  std::mt19937_64 rng(7);
  const ComplexMatrix4 rho = random_state(rng);
  SystemParams p = generic_params();
  p.gamma = 0.0;
  const ComplexMatrix4 h = build_hamiltonian(p);
  const ComplexMatrix4 expected = Complex(0.0, -1.0) * (h * rho - rho * h);
  EXPECT_EQ(lindblad_rhs(rho, p), expected);
}

TEST(LindbladRhs, PureDephasingOfBellCoherence) {
  // Each qubit's Z dissipator maps |01><10| to -(Gamma/2)|01><10|, so the
  // coherence rho_23 = 1/2 decays at rate Gamma: d rho_23/dt = -0.4 * 0.5.
  const SystemParams p = SystemParams::degenerate(0.4, 0.0, 0.0);
  const ComplexMatrix4 rhs = lindblad_rhs(bell_state_psi_plus(), p);
  EXPECT_NEAR(rhs(1, 2).real(), -0.2, 1e-15);
  EXPECT_NEAR(rhs(2, 1).real(), -0.2, 1e-15);
  EXPECT_NEAR(rhs(1, 1).real(), 0.0, 1e-15);
}

TEST(LindbladRhs, TracelessAndHermitian) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix4 rho = random_state(rng);
    const ComplexMatrix4 d = lindblad_rhs(rho, generic_params());
    EXPECT_LE(std::abs(d.trace()), 1e-12);
    EXPECT_LE((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Liouvillian, ZeroForTrivialGenerator) {
  const Liouvillian l(SystemParams::degenerate(0.0, 0.0, 0.0));
  EXPECT_EQ(l.matrix(), Superoperator::Zero());
}

TEST(Liouvillian, AgreesWithRhsOnMatrixUnits) {
  const SystemParams p = generic_params();
  const Liouvillian l(p);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      EXPECT_LE(max_abs_diff(l.apply(unit(r, c)), lindblad_rhs(unit(r, c), p)),
                1e-13);
    }
  }
  EXPECT_LE(l.trace_defect(), 1e-12);
}

TEST(Liouvillian, PureDephasingIsDiagonalWithSelectionRules) {
  const double gamma = 0.4;
  const Liouvillian l(SystemParams::degenerate(gamma, 0.0, 0.0));
  const Superoperator& m = l.matrix();
  for (int k = 0; k < 16; ++k) {
    const int r = k % 4, c = k / 4;
    EXPECT_NEAR(m(k, k).real(), -0.5 * gamma * flips(r, c), 1e-15);
    for (int q = 0; q < 16; ++q) {
      if (q != k) {
        EXPECT_EQ(m(k, q), Complex(0.0));
      }
    }
  }
}

TEST(PropagateExpm, ZeroTimeReturnsInitialState) {
  const DensityMatrix rho0 = bell_state_psi_plus();
  const DensityMatrix out = propagate_expm(rho0, generic_params(), 0.0);
  EXPECT_LE(max_abs_diff(out.matrix(), rho0.matrix()), 1e-13);
}

TEST(PropagateExpm, UnitaryEvolutionKeepsPurity) {
  SystemParams p = generic_params();
  p.gamma = 0.0;
  for (double t : {0.3, 2.0, 17.0}) {
    EXPECT_NEAR(propagate_expm(bell_state_psi_plus(), p, t).purity(), 1.0, 1e-12);
  }
}

TEST(PropagateExpm, PureDephasingCoherenceDecay) {
  const SystemParams p = SystemParams::degenerate(0.4, 0.0, 0.0);
  const DensityMatrix rho = propagate_expm(bell_state_psi_plus(), p, 1.0);
  EXPECT_NEAR(rho(1, 2).real(), 0.33516002301781966, 1e-12);
  EXPECT_NEAR(rho(1, 1).real(), 0.5, 1e-15);
}

TEST(PropagateExpm, PureDephasingSelectionRulesOnAllUnits) {
  const double gamma = 0.4, t = 2.5;
  const Liouvillian l(SystemParams::degenerate(gamma, 0.0, 0.0));
  const Superoperator prop = l.propagator(t);
  for (int k = 0; k < 16; ++k) {
    const int r = k % 4, c = k / 4;
    EXPECT_NEAR(prop(k, k).real(), std::exp(-0.5 * gamma * flips(r, c) * t), 1e-13);
  }
}

TEST(PropagateExpm, SemigroupProperty) {
  const SystemParams p = generic_params();
  const DensityMatrix rho0 = bell_state_psi_plus();
  const DensityMatrix two_step =
      propagate_expm(propagate_expm(rho0, p, 1.7), p, 3.1);
  const DensityMatrix one_step = propagate_expm(rho0, p, 4.8);
  EXPECT_LE(max_abs_diff(two_step.matrix(), one_step.matrix()), 1e-9);
}

TEST(PropagateExpm, RejectsNegativeTime) {
  EXPECT_THROW(propagate_expm(bell_state_psi_plus(), generic_params(), -1.0),
               PreconditionError);
}

TEST(PropagateRk, ZeroTimeReturnsInitialState) {
  const DensityMatrix rho0 = bell_state_psi_plus();
  EXPECT_EQ(propagate_rk(rho0, generic_params(), 0.0).matrix(), rho0.matrix());
}

TEST(PropagateRk, MatchesExpmForGenericParams) {
  const SystemParams p = generic_params();
  const double rel_tol = 1e-9;
  const DensityMatrix a = propagate_expm(bell_state_psi_plus(), p, 5.0);
  const DensityMatrix b = propagate_rk(bell_state_psi_plus(), p, 5.0, rel_tol);
  EXPECT_LE(max_abs_diff(a.matrix(), b.matrix()), std::max(10 * rel_tol, 1e-8));
}

TEST(PropagateRk, LooseToleranceStillWithinContract) {
  const SystemParams p = SystemParams::degenerate(0.3, 0.2, 0.2);
  const double rel_tol = 1e-6;
  const DensityMatrix a = propagate_expm(bell_state_psi_plus(), p, 10.0);
  const DensityMatrix b = propagate_rk(bell_state_psi_plus(), p, 10.0, rel_tol);
  EXPECT_LE(max_abs_diff(a.matrix(), b.matrix()), std::max(10 * rel_tol, 1e-8));
}

TEST(PropagateRk, UnitaryPurity) {
  const SystemParams p = SystemParams::degenerate(0.0, 0.1, 0.1);
  EXPECT_NEAR(propagate_rk(bell_state_psi_plus(), p, 2.0).purity(), 1.0, 1e-8);
}

TEST(PropagateRk, RejectsBadArguments) {
  const DensityMatrix rho0 = bell_state_psi_plus();
  EXPECT_THROW(propagate_rk(rho0, generic_params(), 1.0, 1e-3), PreconditionError);
  EXPECT_THROW(propagate_rk(rho0, generic_params(), 1.0, 1e-13), PreconditionError);
  EXPECT_THROW(propagate_rk(rho0, generic_params(), -0.5), PreconditionError);
}

TEST(Dopri5, ReportsFailureOnFiniteTimeBlowUp) {
  // y' = y^2, y(0) = 1 diverges at t = 1.
  using V = Eigen::Matrix<double, 1, 1>;
  auto rhs = [](double, const V& y) { return V(y(0) * y(0)); };
  EXPECT_THROW(integrate_dopri5(rhs, V(1.0), 0.0, 2.0, OdeOptions{}), NumericalError);
}

TEST(Dopri5, ExponentialDecayAccuracy) {
  using V = Eigen::Matrix<double, 1, 1>;
  auto rhs = [](double, const V& y) { return V(-3.0 * y(0)); };
  OdeStats stats;
  const V y = integrate_dopri5(rhs, V(1.0), 0.0, 2.0, OdeOptions{}, &stats);
  EXPECT_NEAR(y(0), std::exp(-6.0), 1e-11);
  EXPECT_GT(stats.accepted, 0u);
}

}  // namespace
}  // namespace chargeqfi
