#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace fockrg {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using cplx = std::complex<double>;

double max_abs(const Mat& a);
bool is_hermitian(const Mat& a, double rel_tol = 1e-12);

/// Operator (spectral) norm. Hermitian fast path uses eigenvalues,
/// otherwise the largest singular value via a^* a.
double op_norm(const Mat& a);
double op_norm_hermitian(const Mat& a);

/// Ratio of extreme |eigenvalues| of a Hermitian matrix (inf if singular
/// to working precision).
double condition_hermitian(const Mat& a);

struct NullSpace {
  Mat basis;                           // orthonormal columns spanning the near-kernel
  std::vector<double> singular_values; // all, ascending
};
/// Near-kernel of a: singular vectors with sigma < abs_tol.
NullSpace null_space(const Mat& a, double abs_tol);

struct SolveResult {
  Mat x;
  double residual_max = 0.0;  // max |a x - b| after refinement
  double rcond = 0.0;         // reciprocal condition estimate of a
};
/// LU solve with one step of iterative refinement.
SolveResult solve_refined(const Mat& a, const Mat& b);

/// Principal angles (radians, ascending) between the column spans of two
/// orthonormal bases.
std::vector<double> principal_angles(const Mat& u, const Mat& v);

/// Gather rows/cols of a at the given index set.
Mat restrict_to(const Mat& a, const std::vector<int>& idx);

/// Orthonormalize columns (thin QR), discarding near-dependent ones.
Mat orthonormalize(const Mat& a, double tol = 1e-12);

}  // namespace fockrg
