#include "chargeqfi/dynamics.hpp"

#include <cmath>
#include <string>

#include "chargeqfi/errors.hpp"
#include "chargeqfi/matrix_exp.hpp"
#include "chargeqfi/ode.hpp"

namespace chargeqfi {

namespace {

using Complex16 = Superoperator;

// vec(A X B) = (B^T (x) A) vec(X)
Complex16 kron4(const ComplexMatrix4& a, const ComplexMatrix4& b) {
  Complex16 out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    }
  }
  return out;
}

void check_state(const ComplexMatrix4& m, const char* who) {
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const Complex tr = m.trace();
  const double trace_err = std::abs(tr - Complex(1.0, 0.0));
  if (!m.allFinite() || herm > kPropagationContractTol ||
      trace_err > kPropagationContractTol) {
    throw NumericalError(std::string(who) +
                         ": propagated state broke trace/Hermiticity "
                         "(hermiticity defect " +
                         std::to_string(herm) + ", trace error " +
                         std::to_string(trace_err) + ")");
  }
}

}  // namespace

VecState vectorize(const ComplexMatrix4& m) {
  VecState v;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      v(i + 4 * j) = m(i, j);
    }
  }
  return v;
}

ComplexMatrix4 unvectorize(const VecState& v) {
  ComplexMatrix4 m;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      m(i, j) = v(i + 4 * j);
    }
  }
  return m;
}

ComplexMatrix4 lindblad_rhs(const ComplexMatrix4& rho, const SystemParams& p) {
  const ComplexMatrix4 h = build_hamiltonian(p);
  const Complex i_unit(0.0, 1.0);
  ComplexMatrix4 out = -i_unit * (h * rho - rho * h);
  if (p.gamma != 0.0) {
    const Eigen::Matrix2cd z = pauli_z();
    for (const ComplexMatrix4& zj : {on_qubit1(z), on_qubit2(z)}) {
      const ComplexMatrix4 zz = zj * zj;
      out += (p.gamma / 8.0) * (2.0 * zj * rho * zj - zz * rho - rho * zz);
    }
  }
  return out;
}

Liouvillian::Liouvillian(const SystemParams& p) : params_(p) {
  p.validate();
  const ComplexMatrix4 id = ComplexMatrix4::Identity();
  const ComplexMatrix4 h = build_hamiltonian(p);
  const Complex i_unit(0.0, 1.0);
  op_ = -i_unit * (kron4(id, h) - kron4(h.transpose(), id));
  const Eigen::Matrix2cd z = pauli_z();
  for (const ComplexMatrix4& zj : {on_qubit1(z), on_qubit2(z)}) {
    const ComplexMatrix4 zz = zj * zj;
    op_ += (p.gamma / 8.0) * (2.0 * kron4(zj.transpose(), zj) -
                              kron4(id, zz) - kron4(zz.transpose(), id));
  }
}

ComplexMatrix4 Liouvillian::apply(const ComplexMatrix4& rho) const {
  return unvectorize(op_ * vectorize(rho));
}

Superoperator Liouvillian::propagator(double t) const {
  const Eigen::MatrixXcd generator = op_ * t;
  return matrix_exp(generator);
}

double Liouvillian::trace_defect() const {
  double worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    ComplexMatrix4 unit = ComplexMatrix4::Zero();
    unit(k % 4, k / 4) = 1.0;
    worst = std::max(worst, std::abs(apply(unit).trace()));
  }
  return worst;
}

DensityMatrix propagate_expm(const DensityMatrix& rho0, const Liouvillian& l,
                             double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw PreconditionError("propagate_expm: t must be finite and >= 0");
  }
  if (t == 0.0) return rho0;
  const ComplexMatrix4 out =
      unvectorize(l.propagator(t) * vectorize(rho0.matrix()));
  check_state(out, "propagate_expm");
  return DensityMatrix::unchecked(out);
}

DensityMatrix propagate_expm(const DensityMatrix& rho0, const SystemParams& p,
                             double t) {
  return propagate_expm(rho0, Liouvillian(p), t);
}

DensityMatrix propagate_rk(const DensityMatrix& rho0, const SystemParams& p,
                           double t, double rel_tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw PreconditionError("propagate_rk: t must be finite and >= 0");
  }
  if (!(rel_tol >= 1e-12 && rel_tol <= 1e-4)) {
    throw PreconditionError("propagate_rk: rel_tol must lie in [1e-12, 1e-4]");
  }
  p.validate();
  OdeOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-12;
  auto rhs = [&p](double, const ComplexMatrix4& rho) {
    return lindblad_rhs(rho, p);
  };
  const ComplexMatrix4 out =
      integrate_dopri5(rhs, rho0.matrix(), 0.0, t, opt);
  check_state(out, "propagate_rk");
  return DensityMatrix::unchecked(out);
}

}  // namespace chargeqfi
