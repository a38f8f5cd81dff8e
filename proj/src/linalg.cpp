#include "lwdhr/linalg.hpp"

namespace lwdhr::la {

Mat null_space(const Mat& A, double tol) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) return Mat::Identity(n, n);
  Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Mat orthonormalize(const Mat& B, const Mat& G, double tol) {
  Mat out(B.rows(), 0);
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    Vec v = B.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < out.cols(); ++k) {
        cplx c = out.col(k).dot(G * v);
        v -= c * out.col(k);
      }
    double nrm2 = std::real(v.dot(G * v));
    if (nrm2 <= tol * tol) continue;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v / std::sqrt(nrm2);
  }
  return out;
}

Mat polar_unitary(const Mat& A) {
  if (A.size() == 0) return A;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double max_abs(const Mat& A) {
  return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

double unitarity_defect(const Mat& A) {
  if (A.size() == 0) return 0.0;
  return max_abs(A.adjoint() * A - Mat::Identity(A.cols(), A.cols()));
}

}  // namespace lwdhr::la
