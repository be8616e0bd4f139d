#pragma once

#include <string>
#include <vector>

#include "cutoff.hpp"
#include "flow.hpp"
#include "linalg.hpp"

namespace fockrg {

struct TelescopingReport {
  std::size_t points = 0;
  int violations = 0;
  double min_margin = 0.0;
  double worst_x = 0.0;
};

/// Scalar check of the partition bound
///   1_{x=0} + sum_{j>=n} (1_{[a rho^{j+1}, inf)}(x) chi_{rho^j}(x))^2
///     >= chi_{rho^n}(x)^2
/// on {0} plus a log-uniform grid of [x_lo, x_hi]. Terms vanish once
/// x >= rho^j, so the sum is exact; n_terms only caps pathology.
TelescopingReport telescoping_check(const Cutoff& pair, double rho, double a,
                                    int n, int n_terms,
                                    std::size_t grid_points,
                                    double x_lo = 1e-8, double x_hi = 1.0);

struct HypothesisReport {
  double delta0 = 0.0;                  // 1 - max_n eps_n
  std::vector<double> eps;              // sup_r |T_n'(r) - 1|
  std::vector<double> beta;             // |T_n(0) + z_n|
  std::vector<double> a_T;              // 2 beta_n, raised if the scalar check fails
  std::vector<bool> scalar_ok;          // |T_n(E)| >= (1-eps_n)E - 2beta_n per eigenvalue
  std::vector<double> scalar_margin;    // min over eigenvalues
  bool inconclusive = false;            // delta0 <= 0
};

/// Slope/offset extraction for hypothesis (a) from a finalized flow run,
/// with the per-eigenvalue scalar inequality verified exactly.
HypothesisReport hypothesis_a(const std::vector<FlowState>& states);

struct UniquenessCertificate {
  double delta0 = 0.0;
  std::vector<double> a_seq;  // a_seq[i] = a_{i+1} (levels from 1)
  std::vector<double> d_seq;  // d_seq[i] = d_{i+1}
  double threshold = 0.0;     // (a rho)^2
  int n_star = -1;            // level index, -1 if none
  std::string verdict;        // CERTIFIED | INCONCLUSIVE
  double fit_ratio = 0.0;
  double tail_sum = 0.0;      // extrapolated sum of a_j^2 beyond the data
  std::string provenance;
};

/// d_n = (2/delta0)^2 sum_{j>=n} a_{j+1}^2 with a geometric tail fitted to
/// the last four measured terms; CERTIFIED iff some d_n < (a rho)^2.
UniquenessCertificate build_certificate(double delta0,
                                        const std::vector<double>& a_seq,
                                        double rho, double a = 0.75,
                                        double ratio_limit = 0.95);

struct ProbeResult {
  int kernel_dim = 0;
  double gap = 0.0;    // smallest singular value above the kernel cluster
  double h_norm = 0.0;
  std::vector<double> smallest;  // few smallest singular values
};
/// Count singular values below rel_tol * ||H|| and the gap to the next.
ProbeResult degeneracy_probe(const Mat& h, double rel_tol = 1e-10);

/// a_n = max(||W_n||, a_n^T): the sequence Theorem-style hypotheses need.
std::vector<double> a_sequence(const std::vector<FlowState>& states,
                               const HypothesisReport& hyp);

}  // namespace fockrg
