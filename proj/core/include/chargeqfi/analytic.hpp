#pragma once

#include <string>
#include <vector>

#include "chargeqfi/model.hpp"

namespace chargeqfi {

// Coefficients of the closed-form solution, evaluated verbatim.
// mu_plus_sol / mu_minus_sol are the solution-block mu's; the eigenvector
// block defines a different pair (see EigStructureParams) and the two are
// never mixed.
struct AnalyticCoefficients {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double mu_plus_sol = 0.0;
  double mu_minus_sol = 0.0;
  // Time dependent.
  double r1_plus = 0.0;
  double r1_minus = 0.0;
  double r2_plus = 0.0;
  double r2_minus = 0.0;
  double upsilon1 = 0.0;
  double upsilon2 = 0.0;
};

// Throws PreconditionError off the degeneracy point or for t < 0, and
// DomainError when a radicand is negative or a denominator vanishes.
AnalyticCoefficients analytic_coefficients(const SystemParams& p, double t);

// Entries exactly as given by the closed form. No typo correction; the result is not
// guaranteed to be a valid density matrix.
DensityMatrix analytic_state(const SystemParams& p, double t);

struct AuditEntry {
  double t = 0.0;
  int row = 0;
  int col = 0;
  Complex analytic;
  Complex oracle;
  double deviation() const { return std::abs(analytic - oracle); }
};

struct AuditFailure {
  double t = 0.0;
  std::string message;
};

enum class Verdict { kConsistent, kInconsistent };

const char* to_string(Verdict v);

struct AuditReport {
  SystemParams params;
  double tolerance = 0.0;
  std::vector<double> grid;
  double max_abs_deviation = 0.0;
  double worst_t = 0.0;
  std::vector<AuditEntry> deviating_entries;
  std::vector<AuditFailure> failures;
  Verdict verdict = Verdict::kConsistent;
};

// Compares analytic_state against propagate_expm on every grid point.
// Closed-form domain errors become failures with infinite deviation.
AuditReport audit_analytic(const SystemParams& p,
                           const std::vector<double>& t_grid, double tol);

}  // namespace chargeqfi
