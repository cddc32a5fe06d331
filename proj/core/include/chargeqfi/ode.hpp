#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "chargeqfi/errors.hpp"

namespace chargeqfi {

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t max_steps = 10'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// Dormand-Prince 5(4) with embedded error estimate and FSAL. State must be an
// Eigen dense expression type (cwiseAbs/maxCoeff are used for the error norm).
template <typename State, typename Rhs>
State integrate_dopri5(Rhs&& rhs, State y, double t0, double t1,
                       const OdeOptions& opt, OdeStats* stats = nullptr) {
  if (t1 < t0) throw PreconditionError("integrate_dopri5: t1 < t0");
  if (t1 == t0) return y;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto err_norm = [&](const State& err, const State& y0, const State& y1) {
    const auto scale =
        (opt.abs_tol +
         opt.rel_tol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array())
            .eval();
    return (err.cwiseAbs().array() / scale).maxCoeff();
  };

  double t = t0;
  State k1 = rhs(t, y);

  // Initial step guess (Hairer, Norsett & Wanner, II.4).
  double h;
  {
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = k1.cwiseAbs().maxCoeff();
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t1 - t0);
    const State y1 = y + h0 * k1;
    const State f1 = rhs(t + h0, y1);
    const double d2 = (f1 - k1).cwiseAbs().maxCoeff() / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                    : std::pow(0.01 / dmax, 1.0 / 5.0);
    h = std::min({100.0 * h0, h1, t1 - t0});
  }

  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) {
      throw NumericalError("integrate_dopri5: step budget exhausted");
    }
    const double min_step = 1e-14 * std::max(1.0, std::abs(t));
    if (h < min_step) {
      throw NumericalError("integrate_dopri5: step size underflow at t = " +
                           std::to_string(t));
    }
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }

    const State k2 = rhs(t + c2 * h, (y + h * a21 * k1).eval());
    const State k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
    const State k4 =
        rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const State k5 = rhs(
        t + c5 * h,
        (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const State k6 = rhs(
        t + h,
        (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5))
            .eval());
    const State y_new =
        y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State k7 = rhs(t + h, y_new);
    const State err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = err_norm(err, y, y_new);
    if (!std::isfinite(en)) {
      throw NumericalError("integrate_dopri5: non-finite error estimate");
    }
    const double factor =
        en == 0.0 ? 5.0
                  : std::clamp(0.9 * std::pow(en, -1.0 / 5.0), 0.2, 5.0);
    if (en <= 1.0) {
      t = last ? t1 : t + h;
      y = y_new;
      k1 = k7;
      if (stats) ++stats->accepted;
      h *= factor;
    } else {
      if (stats) ++stats->rejected;
      h *= std::min(1.0, factor);
    }
  }
  return y;
}

}  // namespace chargeqfi
