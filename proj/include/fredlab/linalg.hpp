#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fredlab::linalg {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Singular values in nonincreasing order.  Uses a bidiagonalization SVD so
// that values far below sigma_max (down to ~1e-15 * sigma_max) stay resolved;
// the cheaper sqrt-of-eigenvalues route would floor them near 1e-8.
RealVector singular_values(const Matrix& a);

double operator_norm(const Matrix& a);

// k-th singular value, 1-indexed; zero when k exceeds min(rows, cols).
double sigma_k(const Matrix& a, int k);

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;
};
HermitianEig hermitian_eig(const Matrix& a);

Matrix submatrix(const Matrix& a, const std::vector<int>& rows,
                 const std::vector<int>& cols);

double hermiticity_defect(const Matrix& a);  // ||A - A*||

}  // namespace fredlab::linalg
