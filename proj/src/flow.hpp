#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cutoff.hpp"
#include "feshbach.hpp"
#include "fock.hpp"
#include "models.hpp"
#include "pchip.hpp"

namespace fockrg {

/// T as a real function of H_f: values on the clustered eigenvalue grid
/// plus a monotone piecewise-cubic interpolant on [0, 1].
struct TFunction {
  std::vector<double> x;  // cluster energies, ascending, x[0] == 0
  std::vector<double> y;
  Pchip itp;

  double eval(double r) const { return itp.eval(r); }
  double deriv(double r) const { return itp.deriv(r); }
  double at_cluster(int c) const { return y[c]; }
  double vacuum() const { return y.front(); }
  /// sup over [0,1] of |T' - 1| (dense sampling plus nodes)
  double slope_deviation(int samples = 2001) const;
  static TFunction from_values(std::vector<double> x, std::vector<double> y);
};

/// Conditional-expectation splitting H = T(H_f) + W: T(E) is the averaged
/// diagonal over each H_f eigenspace, W the remainder.
struct SplitResult {
  TFunction T;
  Mat W;
};
SplitResult split_T_W(const Mat& h, const Subspace& red);

struct FlowObservables {
  double w_norm = -1.0;  // negative until finalized
  double t0_plus_z = 0.0;
  double slope_dev = 0.0;
  double leak = 0.0;
  double hbar_condition = 1.0;
  double solve_residual = 0.0;
};

struct FlowState {
  int level = 0;  // 0 = initially reduced operator
  Mat H;          // on the reduced space
  TFunction T;
  Mat W;
  double z = 0.0;  // chart-level spectral parameter this state was built at
  FlowObservables obs;
};

struct FlowConfig {
  double rho = 0.5;
  int n_max = 8;
  double root_tol = 1e-9;
  double z_min = -0.5, z_max = 0.5;
  double leak_budget = 1e-6;
  bool minus_convention = true;
  bool strict_depth_guard = true;  // enforce n_max <= modes - 2
  double cond_limit = 1e12;
};

/// Immutable context one flow run operates in.
struct FlowContext {
  Subspace red;
  Cutoff cutoff;
  SubDilation dilation;
  FlowConfig cfg;
};

/// One renormalization step: smooth Feshbach, conjugate by the dilation,
/// scale by 1/rho, re-split. cumulative_leak is updated and checked against
/// the budget.
FlowState rg_step(const FlowState& state, const FlowContext& ctx,
                  double* cumulative_leak);

/// Spectral-parameter map value -rho^{-1} T_n(0) (sign per convention).
/// Throws OutOfPolydisc if |T_n(0)| > rho/2.
double e_map(const FlowState& state, const FlowConfig& cfg);

struct RootStats {
  int evaluations = 0;
  bool monotone = true;
};

struct ELimitResult {
  bool converged = false;
  std::vector<double> z_tower;             // chart labels of the final run
  std::vector<double> roots;               // root of label_l == 0 per depth l
  std::vector<double> cauchy;              // |roots[l] - roots[l-1]|
  std::vector<std::vector<double>> e_table;  // e_table[l][n] = label_n at roots[l]
  int total_evaluations = 0;
  double cumulative_leak = 0.0;
};

/// Owns the model, the reduced space and the trajectory cache; runs the
/// dilation-rescaled flow and the spectral-parameter tower.
class FlowEngine {
 public:
  FlowEngine(const SpinBosonParams& params, const FlowConfig& cfg,
             double tie_tol = 1e-12, bool allow_boundary_ties = false);

  const Subspace& red() const { return ctx_.red; }
  const FockBasis& basis() const { return *basis_; }
  const FlowContext& context() const { return ctx_; }
  const Mat& model_matrix() const { return h3_; }
  const SpinBosonParams& params() const { return params_; }

  /// Initially reduced state at physical spectral parameter z.
  FlowState initial_state(double z) const;

  struct Trajectory {
    std::vector<FlowState> states;  // depth 0..D-1
    std::vector<double> labels;     // chart values, labels[0] = z0, size D+1
    double cumulative_leak = 0.0;
  };

  /// Memoized forward run from chart-0 parameter z0, extended to `depth`
  /// states (labels up to depth).
  std::shared_ptr<const Trajectory> trajectory(double z0, int depth);

  /// Chart-n label of the forward run (the spectral-parameter composition).
  double label(double z0, int n);

  /// Root-find z in chart `level` with J_level(z) = zeta, via forward
  /// threading; monotonicity of the sampled map is verified first.
  double j_inverse(int level, double zeta, RootStats* stats = nullptr);

  ELimitResult e_limit();

  /// Fill the expensive observables (||W||, exact slope sup) on a run.
  void finalize(Trajectory& t) const;

  int flow_evaluations() const { return evals_; }

 private:
  SpinBosonParams params_;
  std::shared_ptr<const FockBasis> basis_;
  Mat h3_;
  FlowContext ctx_;
  std::map<long long, std::shared_ptr<Trajectory>> cache_;
  int evals_ = 0;

  long long cache_key(double z0) const;
  void extend(Trajectory& t, int depth) const;
  double solve_label_root(int depth, double center, double halfwidth,
                          double target, RootStats* stats);
};

}  // namespace fockrg
