#pragma once

#include <string>
#include <vector>

#include "chargeqfi/analytic.hpp"
#include "chargeqfi/model.hpp"
#include "chargeqfi/qfi.hpp"
#include "chargeqfi/sweep.hpp"

namespace chargeqfi {

// 17 significant digits, lowercase scientific ("%.16e"); "inf"/"-inf"/"nan"
// for non-finite values.
std::string format_number(double x);

inline constexpr const char* kSweepCsvHeader = "axis,f_total,f_c,f_p,f_m,crb";

std::string sweep_csv(const SweepResult& r);
std::string sweep_json(const SweepResult& r);

std::string qfi_json(const SystemParams& p, double t, Estimand eta,
                     const QfiBreakdown& q, double sld);

std::string audit_json(const AuditReport& r);
// One document holding several reports (e.g. a whole parameter grid).
std::string audit_grid_json(const std::vector<AuditReport>& reports);

struct TrajectoryPoint {
  double t = 0.0;
  ComplexMatrix4 rho;
};

// Header: t,rho_re_11,rho_im_11,rho_re_12,... (row-major, 1-based indices).
std::string trajectory_header();
std::string trajectory_csv(const std::vector<TrajectoryPoint>& points);

}  // namespace chargeqfi
