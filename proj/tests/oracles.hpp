#pragma once

// Independent reference computations used by the tests. They are written
// directly from definitions and never call the library kernels under test.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Full operator acting with u on a contiguous block of qubits [offset, offset+k)
/// inside `width` qubits (qubit 0 least significant).
inline Mat embed(const Mat& u, int offset, int width) {
  const int k = static_cast<int>(std::lround(std::log2(static_cast<double>(u.rows()))));
  const Mat lo = Mat::Identity(Eigen::Index{1} << offset, Eigen::Index{1} << offset);
  const Mat hi = Mat::Identity(Eigen::Index{1} << (width - offset - k), Eigen::Index{1} << (width - offset - k));
  return kron(hi, kron(u, lo));
}

inline Vec kvec(const Vec& hi, const Vec& lo) {
  Vec out(hi.size() * lo.size());
  for (Eigen::Index i = 0; i < hi.size(); ++i) out.segment(i * lo.size(), lo.size()) = hi[i] * lo;
  return out;
}

/// |sum_{a<L} e^{2 pi i a (w - l/L)} / L|^2
inline double fejer(double w, int l, int L) {
  C s = 0.0;
  for (int a = 0; a < L; ++a) s += std::polar(1.0, 2.0 * M_PI * a * (w - static_cast<double>(l) / L));
  return std::norm(s / static_cast<double>(L));
}

inline Mat dft(int L) {
  Mat f(L, L);
  for (int r = 0; r < L; ++r)
    for (int c = 0; c < L; ++c) f(r, c) = std::polar(1.0 / std::sqrt(L), -2.0 * M_PI * r * c / L);
  return f;
}



}  // namespace oracle
