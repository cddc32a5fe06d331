#include "chargeqfi/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chargeqfi/dynamics.hpp"
#include "chargeqfi/errors.hpp"

namespace chargeqfi {

std::string_view to_string(Estimand e) {
  switch (e) {
    case Estimand::kGamma:
      return "gamma";
    case Estimand::kEJ:
      return "ej";
    case Estimand::kEm:
      return "em";
  }
  return "?";
}

std::optional<Estimand> parse_estimand(std::string_view s) {
  if (s == "gamma") return Estimand::kGamma;
  if (s == "ej") return Estimand::kEJ;
  if (s == "em") return Estimand::kEm;
  return std::nullopt;
}

double estimand_value(const SystemParams& p, Estimand eta) {
  switch (eta) {
    case Estimand::kGamma:
      return p.gamma;
    case Estimand::kEJ:
      return p.e_j1;
    case Estimand::kEm:
      return p.e_m;
  }
  return 0.0;
}

SystemParams with_estimand(SystemParams p, Estimand eta, double value) {
  switch (eta) {
    case Estimand::kGamma:
      p.gamma = value;
      break;
    case Estimand::kEJ:
      p.e_j1 = value;
      p.e_j2 = value;
      break;
    case Estimand::kEm:
      p.e_m = value;
      break;
  }
  return p;
}

namespace {

struct Shifted {
  SystemParams plus;
  SystemParams minus;
};

Shifted shifted_params(const SystemParams& p, Estimand eta, double h) {
  if (!(h >= kMinFdStep && h <= kMaxFdStep)) {
    throw PreconditionError("finite-difference step must lie in [1e-7, 1e-3]");
  }
  p.validate();
  const double v = estimand_value(p, eta);
  Shifted s{with_estimand(p, eta, v + h), with_estimand(p, eta, v - h)};
  if (s.minus.gamma < 0.0) {
    throw PreconditionError(
        "finite difference would evaluate a negative dephasing rate (gamma - h "
        "< 0)");
  }
  return s;
}

DensityMatrix evolve(const SystemParams& p, double t) {
  return propagate_expm(bell_state_psi_plus(), p, t);
}

struct Match {
  int index = -1;
  Complex overlap;
};

}  // namespace

ComplexMatrix4 d_rho(const SystemParams& p, double t, Estimand eta, double h) {
  const Shifted s = shifted_params(p, eta, h);
  return (evolve(s.plus, t).matrix() - evolve(s.minus, t).matrix()) / (2.0 * h);
}

SpectralDerivative spectral_derivative(const SpectralDecomposition& base,
                                       const SpectralDecomposition& plus,
                                       const SpectralDecomposition& minus,
                                       double h) {
  SpectralDerivative d;
  d.base = base;
  d.step = h;
  for (int i = 0; i < 4; ++i) {
    d.active[i] = base.eigenvalues(i) > kEigenvalueClamp;
    if (!d.active[i]) ++d.clamped;
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if ((d.active[i] || d.active[j]) &&
          std::abs(base.eigenvalues(i) - base.eigenvalues(j)) <
              kNearDegenerateGap) {
        ++d.near_degenerate_pairs;
      }
    }
  }

  // Active branches are matched by overlap; the rest take the remaining
  // shifted indices in sorted order.
  auto match_all = [&](const SpectralDecomposition& shifted) {
    std::array<Match, 4> m{};
    std::array<bool, 4> taken{};
    for (int i = 0; i < 4; ++i) {
      if (!d.active[i]) continue;
      const ComplexVector4 vi = base.vector(i);
      int best = -1;
      double best_mag = -1.0, second_mag = -1.0;
      for (int j = 0; j < 4; ++j) {
        const double mag = std::abs(vi.dot(shifted.vector(j)));
        if (mag > best_mag) {
          second_mag = best_mag;
          best_mag = mag;
          best = j;
        } else if (mag > second_mag) {
          second_mag = mag;
        }
      }
      if (best_mag - second_mag < kBranchAmbiguityTol || taken[best]) {
        throw DegenerateDerivativeError(
            "eigenbranch " + std::to_string(i) +
            " cannot be matched unambiguously across the parameter shift "
            "(overlaps " +
            std::to_string(best_mag) + " vs " + std::to_string(second_mag) +
            ")");
      }
      taken[best] = true;
      m[i] = {best, vi.dot(shifted.vector(best))};
    }
    int next = 0;
    for (int i = 0; i < 4; ++i) {
      if (d.active[i]) continue;
      while (taken[next]) ++next;
      taken[next] = true;
      m[i] = {next, Complex(0.0, 0.0)};
    }
    return m;
  };

  const std::array<Match, 4> mp = match_all(plus);
  const std::array<Match, 4> mm = match_all(minus);
  for (int i = 0; i < 4; ++i) {
    d.d_eigenvalues(i) =
        (plus.eigenvalues(mp[i].index) - minus.eigenvalues(mm[i].index)) /
        (2.0 * h);
    if (!d.active[i]) continue;
    // v.dot(w) = <v|w>; multiplying w by conj(<v|w>)/|<v|w>| makes it real.
    const double ap = std::abs(mp[i].overlap);
    const double am = std::abs(mm[i].overlap);
    const ComplexVector4 vp =
        plus.vector(mp[i].index) * (std::conj(mp[i].overlap) / ap);
    const ComplexVector4 vm =
        minus.vector(mm[i].index) * (std::conj(mm[i].overlap) / am);
    d.d_eigenvectors.col(i) = (vp - vm) / (2.0 * h);
    d.gauge_residual = std::max({d.gauge_residual, 1.0 - ap, 1.0 - am});
  }
  return d;
}

SpectralDerivative spectral_derivative(const SystemParams& p, double t,
                                       Estimand eta, double h) {
  const Shifted s = shifted_params(p, eta, h);
  return spectral_derivative(spectral_decompose(evolve(p, t)),
                             spectral_decompose(evolve(s.plus, t)),
                             spectral_decompose(evolve(s.minus, t)), h);
}

double cramer_rao(double f) {
  if (f < -1e-8) {
    throw PreconditionError("cramer_rao: Fisher information is negative (" +
                            std::to_string(f) + ")");
  }
  return f > 1e-12 ? 1.0 / f : std::numeric_limits<double>::infinity();
}

QfiBreakdown qfi_from_derivative(const SpectralDerivative& d) {
  QfiBreakdown q;
  const Eigen::Vector4d& eps = d.base.eigenvalues;
  for (int i = 0; i < 4; ++i) {
    if (!d.active[i]) continue;
    const ComplexVector4 v = d.base.vector(i);
    const ComplexVector4 dv = d.d_eigenvectors.col(i);
    q.f_c += d.d_eigenvalues(i) * d.d_eigenvalues(i) / eps(i);
    q.f_p += 4.0 * eps(i) * (dv.squaredNorm() - std::norm(v.dot(dv)));
    for (int j = 0; j < 4; ++j) {
      if (j == i || !d.active[j]) continue;
      const double weight = eps(i) * eps(j) / (eps(i) + eps(j));
      q.f_m += 8.0 * weight * std::norm(v.dot(d.d_eigenvectors.col(j)));
    }
  }
  q.f_total = q.f_c + q.f_p - q.f_m;
  q.cramer_rao_bound = cramer_rao(q.f_total);
  q.diagnostics.step = d.step;
  q.diagnostics.clamped_eigenvalues = d.clamped;
  q.diagnostics.near_degenerate_pairs = d.near_degenerate_pairs;
  q.diagnostics.gauge_residual = d.gauge_residual;
  return q;
}

QfiBreakdown qfi_components(const SystemParams& p, double t, Estimand eta,
                            double h) {
  QfiBreakdown q = qfi_from_derivative(spectral_derivative(p, t, eta, h));
  const QfiBreakdown half =
      qfi_from_derivative(spectral_derivative(p, t, eta, 0.5 * h));
  q.diagnostics.halving_rel_change =
      std::abs(q.f_total - half.f_total) / std::max(std::abs(q.f_total), 1e-12);
  return q;
}

double qfi_sld(const SpectralDecomposition& base, const ComplexMatrix4& drho) {
  Eigen::Vector4d eps;
  for (int i = 0; i < 4; ++i) {
    eps(i) = base.eigenvalues(i) > kEigenvalueClamp ? base.eigenvalues(i) : 0.0;
  }
  const ComplexMatrix4 in_eigenbasis =
      base.eigenvectors.adjoint() * drho * base.eigenvectors;
  double f = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double denom = eps(i) + eps(j);
      if (denom <= kEigenvalueClamp) continue;
      f += 2.0 * std::norm(in_eigenbasis(i, j)) / denom;
    }
  }
  return f;
}

double qfi_sld(const SystemParams& p, double t, Estimand eta, double h) {
  const ComplexMatrix4 drho = d_rho(p, t, eta, h);
  return qfi_sld(spectral_decompose(evolve(p, t)), drho);
}

}  // namespace chargeqfi
