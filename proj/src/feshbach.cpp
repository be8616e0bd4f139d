#include "feshbach.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace fockrg {

FeshbachResult smooth_feshbach(const RVec& t_diag, const Mat& w,
                               const Cutoff& pair, double rho,
                               const std::vector<double>& energies,
                               double cond_limit) {
  const int n = static_cast<int>(energies.size());
  if (t_diag.size() != n || w.rows() != n || w.cols() != n)
    throw ConfigError("smooth_feshbach: dimension mismatch");
  if (!(rho > 0.0)) throw ConfigError("smooth_feshbach: rho must be positive");

  RVec chi(n), chib(n);
  for (int i = 0; i < n; ++i) {
    chi[i] = pair.chi_at(energies[i], rho);
    chib[i] = pair.chibar_at(energies[i], rho);
  }

  FeshbachResult res;
  res.F = t_diag.cast<cplx>().asDiagonal();
  const double w_scale = max_abs(w);
  if (w_scale == 0.0) return res;  // F = T exactly

  // chi W chi term
  Mat chiW = chi.cast<cplx>().asDiagonal() * w;
  res.F += chiW * chi.cast<cplx>().asDiagonal();

  // complement block on S = { chibar > 0 }
  std::vector<int> S;
  for (int i = 0; i < n; ++i)
    if (chib[i] > 0.0) S.push_back(i);
  res.complement = S;
  if (S.empty()) return res;

  const int ns = static_cast<int>(S.size());
  Mat hbar(ns, ns);
  for (int a = 0; a < ns; ++a)
    for (int b = 0; b < ns; ++b)
      hbar(a, b) = (a == b ? cplx(t_diag[S[a]], 0.0) : cplx(0.0, 0.0)) +
                   chib[S[a]] * w(S[a], S[b]) * chib[S[b]];

  // rhs = (chibar W chi) rows on S
  Mat rhs(ns, n);
  for (int a = 0; a < ns; ++a)
    for (int j = 0; j < n; ++j) rhs(a, j) = chib[S[a]] * w(S[a], j) * chi[j];

  SolveResult solve = solve_refined(hbar, rhs);
  res.hbar_condition =
      solve.rcond > 0.0 ? 1.0 / solve.rcond
                        : std::numeric_limits<double>::infinity();
  res.solve_residual = solve.residual_max;
  res.reliable = solve.residual_max <= 1e-10 * w_scale;
  if (!(res.hbar_condition < cond_limit))
    throw NotInvertibleError(
        "smooth_feshbach: complement block numerically singular "
        "(condition estimate " +
        std::to_string(res.hbar_condition) + ")");

  // chi W chibar columns on S
  Mat lhs(n, ns);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < ns; ++a) lhs(i, a) = chi[i] * w(i, S[a]) * chib[S[a]];

  res.F -= lhs * solve.x;
  return res;
}

FeshbachResult sharp_feshbach(const Mat& h, const std::vector<int>& p_idx,
                              double z, double cond_limit) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != n) throw ConfigError("sharp_feshbach: matrix must be square");
  std::vector<char> in_p(n, 0);
  for (int i : p_idx) {
    if (i < 0 || i >= n) throw ConfigError("sharp_feshbach: index out of range");
    in_p[i] = 1;
  }
  std::vector<int> c_idx;
  for (int i = 0; i < n; ++i)
    if (!in_p[i]) c_idx.push_back(i);

  const int np = static_cast<int>(p_idx.size());
  const int nc = static_cast<int>(c_idx.size());

  FeshbachResult res;
  res.complement = c_idx;
  res.F.resize(np, np);
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < np; ++b)
      res.F(a, b) = h(p_idx[a], p_idx[b]) - (a == b ? cplx(z, 0.0) : cplx(0.0, 0.0));
  if (nc == 0) return res;

  Mat hcc(nc, nc), hcp(nc, np), hpc(np, nc);
  for (int a = 0; a < nc; ++a) {
    for (int b = 0; b < nc; ++b)
      hcc(a, b) = h(c_idx[a], c_idx[b]) - (a == b ? cplx(z, 0.0) : cplx(0.0, 0.0));
    for (int b = 0; b < np; ++b) hcp(a, b) = h(c_idx[a], p_idx[b]);
  }
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < nc; ++b) hpc(a, b) = h(p_idx[a], c_idx[b]);

  const double w_scale = std::max(max_abs(hcp), max_abs(hpc));
  if (w_scale == 0.0) return res;  // decoupled blocks

  SolveResult solve = solve_refined(hcc, hcp);
  res.hbar_condition =
      solve.rcond > 0.0 ? 1.0 / solve.rcond
                        : std::numeric_limits<double>::infinity();
  res.solve_residual = solve.residual_max;
  res.reliable = solve.residual_max <= 1e-10 * w_scale;
  if (!(res.hbar_condition < cond_limit))
    throw NotInvertibleError(
        "sharp_feshbach: complement block numerically singular at z = " +
        std::to_string(z));

  res.F -= hpc * solve.x;
  return res;
}

CorrespondenceReport kernel_correspondence(const Mat& h, const Mat& f,
                                           const RVec& chi_rho_diag,
                                           double tol) {
  CorrespondenceReport rep;
  rep.tol_used = tol;
  const NullSpace kh = null_space(h, tol);
  const NullSpace kf = null_space(f, tol);
  rep.dim_ker_h = static_cast<int>(kh.basis.cols());
  rep.dim_ker_f = static_cast<int>(kf.basis.cols());
  if (rep.dim_ker_h == 0) return rep;

  Mat chi_kh = chi_rho_diag.cast<cplx>().asDiagonal() * kh.basis;
  Eigen::JacobiSVD<Mat> svd(chi_kh);
  rep.injectivity_margin = svd.singularValues().minCoeff();
  if (rep.dim_ker_f > 0) {
    const Mat q = orthonormalize(chi_kh);
    rep.principal_angles_rad = principal_angles(q, kf.basis);
  }
  return rep;
}

}  // namespace fockrg
