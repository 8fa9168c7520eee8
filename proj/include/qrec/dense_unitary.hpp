#pragma once

#include "qrec/types.hpp"

namespace qrec {

/// Operator norm of a square matrix (largest singular value).
double operator_norm(const Matrix& m);

/// Operator-norm distance of U from unitarity, ||U^dagger U - I||.
double unitarity_defect(const Matrix& u);

class DenseUnitary {
 public:
  static constexpr double kTolerance = 1e-8;

  DenseUnitary() : m_(Matrix::Identity(1, 1)) {}
  explicit DenseUnitary(Matrix m, double tol = kTolerance);

  static DenseUnitary identity(Eigen::Index dim) { return DenseUnitary(Matrix::Identity(dim, dim)); }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  int qubits() const { return log2_exact(static_cast<std::uint64_t>(m_.rows())); }

  DenseUnitary adjoint() const;
  DenseUnitary operator*(const DenseUnitary& other) const;

 private:
  Matrix m_;
};

}  // namespace qrec
