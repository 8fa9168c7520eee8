#include "qrec/rng.hpp"

namespace qrec {

Vector haar_vector(Rng& rng, Eigen::Index dim) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.complex_normal();
  return v / v.norm();
}

Matrix haar_unitary(Rng& rng, Eigen::Index dim) {
  Matrix z(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) z(r, c) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    const double a = std::abs(d);
    if (a > 0) q.col(c) *= d / a;
  }
  return q;
}

Vector haar_vector_in_span(Rng& rng, const Matrix& basis) {
  Vector coeffs = haar_vector(rng, basis.cols());
  return basis * coeffs;
}

}  // namespace qrec
