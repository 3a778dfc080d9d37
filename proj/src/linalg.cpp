#include "fredlab/linalg.hpp"

#include <algorithm>

namespace fredlab::linalg {

RealVector singular_values(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return RealVector(0);
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

double operator_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return singular_values(a)(0);
}

double sigma_k(const Matrix& a, int k) {
  RealVector s = singular_values(a);
  if (k < 1 || k > s.size()) return 0.0;
  return s(k - 1);
}

HermitianEig hermitian_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigensolve failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix submatrix(const Matrix& a, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

double hermiticity_defect(const Matrix& a) {
  return operator_norm(a - a.adjoint());
}

}  // namespace fredlab::linalg
