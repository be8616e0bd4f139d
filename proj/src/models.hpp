#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "feshbach.hpp"
#include "fock.hpp"
#include "kernels.hpp"
#include "linalg.hpp"

namespace fockrg {

struct SpinBosonParams {
  double g = 0.05;
  FrequencyLadder ladder{0.5, 10};
  int max_total = 3;
  int max_per_mode = 2;
  /// radial form factor f(|k|) on the unit ball; empty means f == 1
  std::function<double(double)> f_profile;
  double g_max = 0.2;
  std::size_t dim_cap = 20000;
};

/// Per-shell coupling g_j = (int_{shell j} |f|^2 / |k| d^3k)^{1/2};
/// closed form 2 pi omega0^2 rho^{2j} (1 - rho^2) for f == 1.
std::vector<double> mode_coupling_weights(const SpinBosonParams& p);

/// (sigma_z + 1) (x) 1 + 1 (x) H_f + g sigma_x (x) sum_j g_j (a_j + a_j^+).
/// Spin-major layout: indices [0, N) spin-up, [N, 2N) spin-down.
Mat build_spin_boson(const SpinBosonParams& p, const FockBasis& basis);

struct OracleResult {
  std::vector<double> lowest;  // ascending
  double ground_energy = 0.0;
  int ground_multiplicity = 1;
  double gap = 0.0;  // first eigenvalue above the ground cluster minus E0
};
/// Dense Hermitian eigensolve; ground multiplicity by clustering within
/// cluster_rel_tol * ||H||.
OracleResult exact_diag_oracle(const Mat& h, int k, std::size_t dense_cap = 4096,
                               double cluster_rel_tol = 1e-10);

struct InitialReduction {
  Mat h1;             // on the reduced space (spin factor dropped)
  FeshbachResult fesh;
  double z = 0.0;
};
/// One sharp Feshbach step with P = P_down (x) 1_{[0,1]}(H_f): H_1(z) on
/// H_red; z is an eigenvalue of the model iff 0 is an eigenvalue of h1.
InitialReduction initial_reduction(const Mat& h_spin_boson,
                                   const Subspace& red, double z,
                                   double cond_limit = 1e12);

/// Leading-order kernel family of the reduced operator at spectral
/// parameter z (complement resolvent expanded at the spin gap; exact
/// through O(g^2), remainder O(g^4)). f == 1 only.
KernelFamily initial_kernel_family(const SpinBosonParams& p, double z,
                                   double mu = 0.5, double xi = 0.5,
                                   int r_nodes = 33);

}  // namespace fockrg
