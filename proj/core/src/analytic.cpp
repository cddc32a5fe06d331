#include "chargeqfi/analytic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "chargeqfi/dynamics.hpp"
#include "chargeqfi/errors.hpp"

namespace chargeqfi {

namespace {

double checked_sqrt(double radicand, const char* what) {
  if (!(radicand >= 0.0)) {
    throw DomainError(std::string("closed form: negative radicand in ") +
                      what + " (" + std::to_string(radicand) + ")");
  }
  return std::sqrt(radicand);
}

void require_closed_form_domain(const SystemParams& p, double t) {
  if (!p.degenerate_identical()) {
    throw PreconditionError(
        "closed form needs identical qubits at the degeneracy point");
  }
  p.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw PreconditionError("closed form: t must be finite and >= 0");
  }
}

}  // namespace

AnalyticCoefficients analytic_coefficients(const SystemParams& p, double t) {
  require_closed_form_domain(p, t);
  const double g = p.gamma;
  const double ej = p.e_j1;
  const double em = p.e_m;
  const double g2 = g * g, ej2 = ej * ej, em2 = em * em;

  AnalyticCoefficients c;
  // Verbatim: the last term carries E_m, not E_m^2.
  const double l3_rad = em2 * em2 + (ej2 - g2) * (ej2 - g2) +
                        2.0 * em * (ej2 + g2) * (ej2 + g2);
  c.lambda3 = checked_sqrt(l3_rad, "lambda3");
  const double shift = em2 + ej2 - g2;
  c.lambda1 = checked_sqrt(c.lambda3 + shift, "lambda1");
  c.lambda2 = checked_sqrt(c.lambda3 - shift, "lambda2");
  c.mu_plus_sol = c.lambda3 + (g2 + em2 - ej2);
  c.mu_minus_sol = c.lambda3 - (g2 + em2 - ej2);

  const double s2 = std::sqrt(2.0);
  const double arg1 = s2 * c.lambda1 * t;
  const double arg2 = s2 * c.lambda2 * t;
  c.r1_plus = s2 * g * std::sin(arg1) + c.lambda2 * std::cos(arg1);
  c.r1_minus = s2 * g * std::sin(arg1) - c.lambda2 * std::cos(arg1);
  c.r2_plus = s2 * g * std::sinh(arg2) + c.lambda2 * std::cosh(arg2);
  c.r2_minus = s2 * g * std::sinh(arg2) - c.lambda2 * std::cosh(arg2);

  const double l123 = c.lambda1 * c.lambda2 * c.lambda3;
  if (l123 == 0.0) {
    throw DomainError("closed form: lambda1*lambda2*lambda3 vanishes");
  }
  c.upsilon1 = std::exp(-2.0 * g * t) / (8.0 * l123);
  c.upsilon2 = ej * std::exp(-2.0 * g * t) / (8.0 * c.lambda3);
  return c;
}

DensityMatrix analytic_state(const SystemParams& p, double t) {
  const AnalyticCoefficients c = analytic_coefficients(p, t);
  const double g = p.gamma;
  const double em = p.e_m;
  const double l123 = c.lambda1 * c.lambda2 * c.lambda3;
  const double grow = std::exp(2.0 * g * t);
  const double decay = std::exp(-2.0 * g * t);
  const double mix_plus =
      c.lambda2 * c.mu_minus_sol * c.r1_plus + c.lambda1 * c.mu_plus_sol * c.r2_plus;
  const double mix_minus = c.lambda2 * c.mu_minus_sol * c.r1_minus +
                           c.lambda1 * c.mu_plus_sol * c.r2_minus;

  const double rho11 = c.upsilon1 * (2.0 * l123 * grow - mix_plus);
  const double rho22 = c.upsilon1 * (2.0 * l123 * grow + mix_plus);
  const double rho14 = c.upsilon1 * (2.0 * l123 * decay + mix_minus);
  const double rho23 = c.upsilon1 * (2.0 * l123 * decay - mix_minus);

  const double s2 = std::sqrt(2.0);
  const double arg1 = s2 * c.lambda1 * t;
  const double arg2 = s2 * c.lambda2 * t;
  const Complex rho12 =
      c.upsilon2 *
      Complex(2.0 * em * (std::cosh(arg2) - std::cos(arg1)),
              s2 * (c.lambda2 * std::sinh(arg2) + c.lambda1 * std::sin(arg1)));

  ComplexMatrix4 m;
  m(0, 0) = rho11;
  m(3, 3) = rho11;
  m(1, 1) = rho22;
  m(2, 2) = rho22;
  m(0, 3) = rho14;
  m(3, 0) = rho14;
  m(1, 2) = rho23;
  m(2, 1) = rho23;
  m(0, 1) = rho12;
  m(0, 2) = rho12;
  m(3, 1) = rho12;
  m(3, 2) = rho12;
  m(1, 0) = std::conj(rho12);
  m(2, 0) = std::conj(rho12);
  m(1, 3) = std::conj(rho12);
  m(2, 3) = std::conj(rho12);
  return DensityMatrix::unchecked(m);
}

const char* to_string(Verdict v) {
  return v == Verdict::kConsistent ? "consistent" : "inconsistent";
}

AuditReport audit_analytic(const SystemParams& p,
                           const std::vector<double>& t_grid, double tol) {
  if (!p.degenerate_identical()) {
    throw PreconditionError(
        "audit_analytic needs identical qubits at the degeneracy point");
  }
  AuditReport report;
  report.params = p;
  report.tolerance = tol;
  report.grid = t_grid;

  const Liouvillian l(p);
  const DensityMatrix rho0 = bell_state_psi_plus();
  for (double t : t_grid) {
    const ComplexMatrix4 oracle = propagate_expm(rho0, l, t).matrix();
    ComplexMatrix4 closed;
    try {
      closed = analytic_state(p, t).matrix();
    } catch (const DomainError& e) {
      report.failures.push_back({t, e.what()});
      report.max_abs_deviation = std::numeric_limits<double>::infinity();
      report.worst_t = t;
      continue;
    }
    for (int r = 0; r < 4; ++r) {
      for (int col = 0; col < 4; ++col) {
        AuditEntry entry{t, r, col, closed(r, col), oracle(r, col)};
        const double dev = entry.deviation();
        if (!(dev <= report.max_abs_deviation)) {
          report.max_abs_deviation = dev;
          report.worst_t = t;
        }
        if (!(dev <= tol)) report.deviating_entries.push_back(entry);
      }
    }
  }
  report.verdict = report.max_abs_deviation <= tol ? Verdict::kConsistent
                                                   : Verdict::kInconsistent;
  return report;
}

}  // namespace chargeqfi
