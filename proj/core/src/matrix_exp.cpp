#include "chargeqfi/matrix_exp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "chargeqfi/errors.hpp"

namespace chargeqfi {

double norm1(const Eigen::MatrixXcd& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

Eigen::MatrixXcd matrix_exp(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) {
    throw PreconditionError("matrix_exp needs a square matrix");
  }
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  if (!a.allFinite()) {
    throw NumericalError("matrix_exp: non-finite input");
  }

  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm = norm1(a);
  if (norm == 0.0) return Eigen::MatrixXcd::Identity(n, n);
  int squarings = 0;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  }
  const Eigen::MatrixXcd as = a / std::ldexp(1.0, squarings);

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd a2 = as * as;
  const Eigen::MatrixXcd a4 = a2 * a2;
  const Eigen::MatrixXcd a6 = a4 * a2;

  const Eigen::MatrixXcd u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Eigen::MatrixXcd u =
      as * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Eigen::MatrixXcd v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const Eigen::MatrixXcd v =
      a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Eigen::MatrixXcd r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) {
    r = r * r;
  }
  return r;
}

}  // namespace chargeqfi
