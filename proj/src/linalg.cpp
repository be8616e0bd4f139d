#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fockrg {

double max_abs(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1e-300, max_abs(a));
  return max_abs(a - a.adjoint()) <= rel_tol * scale;
}

double op_norm_hermitian(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == a.cols() && is_hermitian(a)) return op_norm_hermitian(a);
  const Mat g = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double condition_hermitian(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  const auto lam = es.eigenvalues().cwiseAbs();
  const double hi = lam.maxCoeff();
  const double lo = lam.minCoeff();
  if (lo <= hi * std::numeric_limits<double>::epsilon())
    return std::numeric_limits<double>::infinity();
  return hi / lo;
}

NullSpace null_space(const Mat& a, double abs_tol) {
  NullSpace out;
  const Eigen::Index n = a.cols();
  if (a.size() == 0) return out;
  if (a.rows() == a.cols() && is_hermitian(a)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    std::vector<int> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    const RVec lam = es.eigenvalues();
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return std::abs(lam[i]) < std::abs(lam[j]); });
    out.singular_values.reserve(n);
    std::vector<int> keep;
    for (int i : order) {
      out.singular_values.push_back(std::abs(lam[i]));
      if (std::abs(lam[i]) < abs_tol) keep.push_back(i);
    }
    out.basis.resize(a.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
      out.basis.col(c) = es.eigenvectors().col(keep[c]);
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const RVec s = svd.singularValues();
  int k = 0;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double sv = (i < s.size()) ? s[i] : 0.0;
    if (sv < abs_tol) ++k;
  }
  out.basis = svd.matrixV().rightCols(k);
  out.singular_values.assign(s.data(), s.data() + s.size());
  std::sort(out.singular_values.begin(), out.singular_values.end());
  // rows of a fewer than cols: trailing exact-zero singular values
  for (Eigen::Index i = s.size(); i < n; ++i)
    out.singular_values.insert(out.singular_values.begin(), 0.0);
  return out;
}

SolveResult solve_refined(const Mat& a, const Mat& b) {
  SolveResult r;
  Eigen::PartialPivLU<Mat> lu(a);
  r.rcond = lu.rcond();
  r.x = lu.solve(b);
  Mat resid = b - a * r.x;
  r.x += lu.solve(resid);
  resid = b - a * r.x;
  r.residual_max = max_abs(resid);
  return r;
}

std::vector<double> principal_angles(const Mat& u, const Mat& v) {
  std::vector<double> angles;
  if (u.cols() == 0 || v.cols() == 0) return angles;
  const Mat m = u.adjoint() * v;
  Eigen::JacobiSVD<Mat> svd(m);
  const RVec s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    angles.push_back(std::acos(std::clamp(s[i], -1.0, 1.0)));
  std::sort(angles.begin(), angles.end());
  return angles;
}

Mat restrict_to(const Mat& a, const std::vector<int>& idx) {
  Mat out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      out(i, j) = a(idx[i], idx[j]);
  return out;
}

Mat orthonormalize(const Mat& a, double tol) {
  if (a.cols() == 0) return a;
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(a.rows(), a.cols());
  const Mat r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  const double scale = std::max(1e-300, r.cwiseAbs().maxCoeff());
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    if (std::abs(r(i, i)) > tol * scale) keep.push_back(static_cast<int>(i));
  Mat out(a.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(c) = q.col(keep[c]);
  return out;
}

}  // namespace fockrg
