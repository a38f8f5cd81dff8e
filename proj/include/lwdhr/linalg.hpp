#pragma once

#include <Eigen/Dense>
#include <complex>

namespace lwdhr {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

namespace la {

// Orthonormal basis (columns) of the null space of A; singular values below tol count as zero.
Mat null_space(const Mat& A, double tol = 1e-9);

// Columns of B made orthonormal under the Gram form G (positive definite); drops dependent columns.
Mat orthonormalize(const Mat& B, const Mat& G, double tol = 1e-10);

// Unitary factor U of the polar decomposition A = U P.
Mat polar_unitary(const Mat& A);

double max_abs(const Mat& A);

// Max |A^dagger A - 1| entry.
double unitarity_defect(const Mat& A);

}  // namespace la
}  // namespace lwdhr
