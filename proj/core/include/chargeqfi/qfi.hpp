#pragma once

#include <array>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "chargeqfi/model.hpp"
#include "chargeqfi/spectral.hpp"

namespace chargeqfi {

// Parameter being estimated. EJ moves e_j1 and e_j2 together.
enum class Estimand { kGamma, kEJ, kEm };

std::string_view to_string(Estimand e);
std::optional<Estimand> parse_estimand(std::string_view s);

double estimand_value(const SystemParams& p, Estimand eta);
SystemParams with_estimand(SystemParams p, Estimand eta, double value);

inline constexpr double kDefaultFdStep = 1e-4;
inline constexpr double kMinFdStep = 1e-7;
inline constexpr double kMaxFdStep = 1e-3;

// Central difference (rho(eta + h) - rho(eta - h)) / 2h of the state evolved
// from |psi+><psi+| to time t. Throws PreconditionError for h outside
// [kMinFdStep, kMaxFdStep] or when the lower shift makes Gamma negative.
ComplexMatrix4 d_rho(const SystemParams& p, double t, Estimand eta,
                     double h = kDefaultFdStep);

// Eigenbranch derivatives in the parallel-transport gauge. Only branches
// whose eigenvalue exceeds kEigenvalueClamp are differentiated; the others
// carry a zero eigenvector derivative and never enter the QFI.
struct SpectralDerivative {
  enum class Method { kCentralDiff };

  SpectralDecomposition base;
  Eigen::Vector4d d_eigenvalues = Eigen::Vector4d::Zero();
  ComplexMatrix4 d_eigenvectors = ComplexMatrix4::Zero();  // columns
  Method method = Method::kCentralDiff;
  double step = 0.0;

  std::array<bool, 4> active{};
  int clamped = 0;
  int near_degenerate_pairs = 0;
  // max over active branches and both shifts of 1 - |<v_i(eta)|v_i(eta+-h)>|
  double gauge_residual = 0.0;
};

// Overlaps this close to each other make branch matching ambiguous.
inline constexpr double kBranchAmbiguityTol = 1e-3;
inline constexpr double kNearDegenerateGap = 1e-6;

// Matches the shifted decompositions to `base` by maximal overlap, aligns
// phases so <v_i(eta)|v_i(eta+-h)> is real positive, and central-differences
// the matched branches. Throws DegenerateDerivativeError on ambiguous
// matches.
SpectralDerivative spectral_derivative(const SpectralDecomposition& base,
                                       const SpectralDecomposition& plus,
                                       const SpectralDecomposition& minus,
                                       double h);

SpectralDerivative spectral_derivative(const SystemParams& p, double t,
                                       Estimand eta,
                                       double h = kDefaultFdStep);

struct QfiDiagnostics {
  double step = 0.0;
  int clamped_eigenvalues = 0;
  int near_degenerate_pairs = 0;
  double gauge_residual = 0.0;
  // |F(h) - F(h/2)| / max(|F(h)|, 1e-12); negative when not evaluated.
  double halving_rel_change = -1.0;
};

struct QfiBreakdown {
  double f_c = 0.0;
  double f_p = 0.0;
  double f_m = 0.0;
  double f_total = 0.0;
  double cramer_rao_bound = 0.0;
  QfiDiagnostics diagnostics;
};

// F_C + F_P - F_M from an already computed spectral derivative.
QfiBreakdown qfi_from_derivative(const SpectralDerivative& d);

// Full breakdown at step h, with the h/2 re-evaluation recorded in the
// diagnostics.
QfiBreakdown qfi_components(const SystemParams& p, double t, Estimand eta,
                            double h = kDefaultFdStep);

// sum_{eps_i + eps_j > clamp} 2 |<V_i| d rho |V_j>|^2 / (eps_i + eps_j)
double qfi_sld(const SpectralDecomposition& base, const ComplexMatrix4& drho);
double qfi_sld(const SystemParams& p, double t, Estimand eta,
               double h = kDefaultFdStep);

// 1/f for f > 1e-12, +inf otherwise. f below -1e-8 is a contract violation.
double cramer_rao(double f);

}  // namespace chargeqfi
