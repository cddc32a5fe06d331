#include <random>

#include <gtest/gtest.h>

#include "chargeqfi/dynamics.hpp"
#include "chargeqfi/qfi.hpp"
#include "chargeqfi/spectral.hpp"
#include "oracles.hpp"

namespace chargeqfi {
namespace {

class RandomCases : public ::testing::Test {
 protected:
  std::mt19937_64 rng{20240611};

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  }

  SystemParams params() {
    SystemParams p;
    p.e_c1 = uniform(0.0, 0.5);
    p.e_c2 = uniform(0.0, 0.5);
    p.e_j1 = uniform(0.0, 0.5);
    p.e_j2 = uniform(0.0, 0.5);
    p.e_m = uniform(0.0, 0.5);
    p.n_g1 = uniform(0.0, 1.0);
    p.n_g2 = uniform(0.0, 1.0);
    p.gamma = uniform(0.0, 1.0);
    return p;
  }

  ComplexMatrix4 any_matrix() {
    std::normal_distribution<double> g;
    ComplexMatrix4 a;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(rng), g(rng));
    return a;
  }

  DensityMatrix state() {
    const ComplexMatrix4 a = any_matrix();
    ComplexMatrix4 rho = a * a.adjoint();
    return DensityMatrix::checked(rho / rho.trace().real());
  }
};

TEST_F(RandomCases, EvolutionStaysPhysical) {
  for (int n = 0; n < 40; ++n) {
    const SystemParams p = params();
    const DensityMatrix rho0 = state();
    const double t = uniform(0.0, 20.0);
    const DensityMatrix rho = propagate_expm(rho0, p, t);
    const auto c = rho.check();
    EXPECT_TRUE(c.ok()) << "case " << n;
    EXPECT_LE(std::abs(rho.trace() - 1.0), 1e-9);
    EXPECT_LE(rho.hermiticity_defect(), 1e-10);
    EXPECT_GE(rho.min_eigenvalue(), -1e-9);
    EXPECT_LE(rho.purity(), rho0.purity() + 1e-9);
  }
}

TEST_F(RandomCases, GeneratorIsTracelessAndHermitianPreserving) {
  for (int n = 0; n < 40; ++n) {
    const SystemParams p = params();
    const ComplexMatrix4 h = [&] {
      const ComplexMatrix4 a = any_matrix();
      return ComplexMatrix4(a + a.adjoint());
    }();
    const ComplexMatrix4 d = lindblad_rhs(h, p);
    EXPECT_LE(std::abs(d.trace()), 1e-12);
    EXPECT_LE(max_abs_diff(d, d.adjoint()), 1e-12);
    const ComplexMatrix4 x = any_matrix();
    EXPECT_LE(max_abs_diff(Liouvillian(p).apply(x), lindblad_rhs(x, p)), 1e-12);
    EXPECT_LE(Liouvillian(p).trace_defect(), 1e-13);
  }
}

TEST_F(RandomCases, HamiltonianMatchesOracle) {
  for (int n = 0; n < 40; ++n) {
    const SystemParams p = params();
    EXPECT_LE(max_abs_diff(build_hamiltonian(p),
                           oracle::hamiltonian(p.e_c1, p.e_c2, p.e_j1, p.e_j2,
                                               p.e_m, p.n_g1, p.n_g2)),
              1e-14);
  }
}

TEST_F(RandomCases, SpectralReconstruction) {
  for (int n = 0; n < 40; ++n) {
    const DensityMatrix rho = state();
    const SpectralDecomposition s = spectral_decompose(rho);
    EXPECT_LE(max_abs_diff(s.reconstruct(), rho.matrix()), 1e-12);
    EXPECT_LE(s.residual, 1e-12);
  }
}

TEST_F(RandomCases, QfiNonNegativeAndDecomposes) {
  const Estimand etas[] = {Estimand::kGamma, Estimand::kEJ, Estimand::kEm};
  for (int n = 0; n < 15; ++n) {
    const double g = uniform(0.1, 0.8);
    const double e = uniform(0.02, 0.4);
    const SystemParams p = SystemParams::degenerate(g, e, e);
    const double t = uniform(0.1, 10.0);
    const Estimand eta = etas[n % 3];
    const QfiBreakdown q = qfi_components(p, t, eta);
    EXPECT_GE(q.f_total, -1e-8);
    EXPECT_NEAR(q.f_total, q.f_c + q.f_p - q.f_m, 1e-12);
    const double sld = qfi_sld(p, t, eta);
    EXPECT_LE(std::abs(q.f_total - sld), 1e-4 * std::max(sld, 1e-3))
        << "g=" << g << " e=" << e << " t=" << t << " " << to_string(eta);
  }
}

}  // namespace
}  // namespace chargeqfi
