#pragma once

#include <limits>
#include <vector>

#include "cutoff.hpp"
#include "linalg.hpp"

namespace fockrg {

struct FeshbachResult {
  Mat F;                        // effective operator on the kept space
  double hbar_condition = 1.0;  // condition estimate of the complement block
  double solve_residual = 0.0;  // max |A x - b| over the Schur solves
  bool reliable = true;         // residual <= 1e-10 * max|W|
  std::vector<int> complement;  // indices of the inverted block
};

/// Smooth Feshbach-Schur map on a space where T is a function of H_f:
///   F = T + chi_rho W chi_rho
///       - chi_rho W chibar_rho (T + chibar_rho W chibar_rho)^{-1}|_S
///         chibar_rho W chi_rho
/// with S = Ran chibar_rho within the given space, chi/chibar evaluated at
/// energy/rho. The complement block is solved, never inverted explicitly.
FeshbachResult smooth_feshbach(const RVec& t_diag, const Mat& w,
                               const Cutoff& pair, double rho,
                               const std::vector<double>& energies,
                               double cond_limit = 1e12);

/// Sharp Feshbach map F_P(H - z) = P(H-z)P - P H Pbar (Pbar(H-z)Pbar)^{-1}
/// Pbar H P restricted to Ran P, with P the coordinate projection onto
/// p_idx.
FeshbachResult sharp_feshbach(const Mat& h, const std::vector<int>& p_idx,
                              double z, double cond_limit = 1e12);

struct CorrespondenceReport {
  int dim_ker_h = 0;
  int dim_ker_f = 0;
  // smallest singular value of chi_rho restricted to ker H; +inf when the
  // kernel is trivial
  double injectivity_margin = std::numeric_limits<double>::infinity();
  std::vector<double> principal_angles_rad;  // chi_rho(ker H) vs ker F
  double tol_used = 0.0;
};

/// Numerical check that chi_rho maps ker H into ker F injectively.
CorrespondenceReport kernel_correspondence(const Mat& h, const Mat& f,
                                           const RVec& chi_rho_diag,
                                           double tol);

}  // namespace fockrg
