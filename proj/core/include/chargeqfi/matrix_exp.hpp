#pragma once

#include <Eigen/Dense>

namespace chargeqfi {

// Matrix exponential by scaling and squaring with a degree-13 diagonal Pade
// approximant (Higham, "The scaling and squaring method for the matrix
// exponential revisited", 2005). Accurate to roughly unit roundoff times the
// condition of the problem.
Eigen::MatrixXcd matrix_exp(const Eigen::MatrixXcd& a);

// Induced 1-norm (max column sum).
double norm1(const Eigen::MatrixXcd& a);

}  // namespace chargeqfi
