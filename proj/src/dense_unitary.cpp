#include "qrec/dense_unitary.hpp"

#include <Eigen/Eigenvalues>

namespace qrec {

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  // Largest eigenvalue of the Gram matrix is cheaper than a full SVD.
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double unitarity_defect(const Matrix& u) {
  const Matrix g = u.adjoint() * u - Matrix::Identity(u.cols(), u.cols());
  const double frob = g.norm();
  if (frob <= 1e-12) return frob;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

DenseUnitary::DenseUnitary(Matrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("unitary must be square");
  if (!is_power_of_two(static_cast<std::uint64_t>(m_.rows()))) {
    throw DimensionError("unitary dimension " + std::to_string(m_.rows()) + " is not a power of two");
  }
  const double defect = unitarity_defect(m_);
  if (!(defect <= tol)) {
    throw NotUnitaryError("matrix is not unitary (||U'U - I|| = " + std::to_string(defect) + ")");
  }
}

DenseUnitary DenseUnitary::adjoint() const { return DenseUnitary(m_.adjoint()); }

DenseUnitary DenseUnitary::operator*(const DenseUnitary& other) const {
  if (dim() != other.dim()) throw DimensionError("unitary product dimension mismatch");
  return DenseUnitary(m_ * other.m_);
}

}  // namespace qrec
