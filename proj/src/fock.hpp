#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "cutoff.hpp"
#include "linalg.hpp"

namespace fockrg {

/// Geometric frequency ladder: mode j carries omega_j = omega0 * rho^j and
/// stands for the momentum shell |k| in (omega0 rho^{j+1}, omega0 rho^j].
struct FrequencyLadder {
  double rho;
  int modes;
  double omega0;

  FrequencyLadder(double rho_, int modes_, double omega0_ = 1.0);

  double omega(int j) const;
  double shell_outer(int j) const { return omega(j); }
  double shell_inner(int j) const { return omega(j + 1); }
};

using Occupation = std::vector<int>;

/// Occupation-number basis over a ladder, graded-lexicographically ordered
/// (total boson number first), vacuum at index 0.
class FockBasis {
 public:
  static FockBasis build(const FrequencyLadder& ladder, int max_total,
                         int max_per_mode, std::size_t dim_cap = 20000);

  const FrequencyLadder& ladder() const { return ladder_; }
  int max_total() const { return max_total_; }
  int max_per_mode() const { return max_per_mode_; }
  int dim() const { return static_cast<int>(states_.size()); }
  const std::vector<Occupation>& states() const { return states_; }
  const Occupation& state(int i) const { return states_[i]; }
  const std::vector<double>& hf_eigs() const { return hf_; }
  double hf_eig(int i) const { return hf_[i]; }
  /// -1 when the occupation vector is not in the truncated basis.
  int index_of(const Occupation& occ) const;

 private:
  FockBasis(FrequencyLadder l, int mt, int mpm)
      : ladder_(l), max_total_(mt), max_per_mode_(mpm) {}
  FrequencyLadder ladder_;
  int max_total_, max_per_mode_;
  std::vector<Occupation> states_;
  std::vector<double> hf_;
  std::vector<std::pair<Occupation, int>> lookup_;  // sorted for binary search
};

enum class Domain { Full, Red, ChiBarRed };

struct Operator {
  Mat mat;
  Domain dom = Domain::Full;
};

Operator creation_op(const FockBasis& basis, int mode);
Operator annihilation_op(const FockBasis& basis, int mode);

/// Diagonal of H_f (the free field) in basis order.
RVec free_field_diag(const FockBasis& basis);
Operator free_field(const FockBasis& basis);

struct ProjectionReport {
  std::vector<int> selected;     // indices with hf in [lo, hi] (tolerance-closed)
  std::vector<int> exact_hits;   // bit-exact boundary energies (by design, kept)
  std::vector<int> inexact_ties; // within tie_tol of a boundary but not equal
};
/// 0/1 projection onto hf eigenvalues in [lo, hi]; boundary handling per
/// report. Inexact ties make the projection ill-posed for the caller to
/// reject or override.
ProjectionReport spectral_projection(const FockBasis& basis, double lo,
                                     double hi, double tie_tol = 1e-12);
Operator projection_matrix(const FockBasis& basis, const ProjectionReport& rep);

/// chi_t(H_f) and chibar_t(H_f) as diagonal operators on the full basis.
std::pair<Operator, Operator> cutoff_op(const FockBasis& basis,
                                        const Cutoff& pair, double t);

/// Mode-index shift realizing the dilation on the geometric ladder.
/// `shift` maps occupation of mode j to mode j+1 (omega -> rho*omega) and
/// annihilates states occupying the deepest mode; `leak` projects onto the
/// annihilated subspace. Exact identities, both tested:
///   shift^† shift           == 1 - leak
///   shift^† H_f shift       == rho * H_f * (1 - leak)
/// so the energy-raising dilation used by the flow is shift^†.
struct Dilation {
  Mat shift;
  Mat leak;
  std::vector<int> target;  // full-basis image index per state, -1 if leaked
};
Dilation make_dilation(const FockBasis& basis, double scale);

/// Spectral subspace 1_{[lo,hi]}(H_f) with clustered distinct eigenvalues.
struct Subspace {
  std::shared_ptr<const FockBasis> basis;
  std::vector<int> idx;                // into the full basis
  std::vector<double> energy;          // per member
  std::vector<int> cluster;            // member -> cluster id
  std::vector<double> cluster_value;   // ascending distinct eigenvalues
  ProjectionReport report;

  int dim() const { return static_cast<int>(idx.size()); }
  int pos_of_full(int full_index) const;   // -1 if absent
  Mat restricted(const Mat& full_op) const;
  RVec chi_diag(const Cutoff& pair, double t) const;
  RVec chibar_diag(const Cutoff& pair, double t) const;
};

Subspace reduced_space(std::shared_ptr<const FockBasis> basis, double lo,
                       double hi, double tie_tol = 1e-12,
                       bool allow_inexact_ties = false);

/// Dilation restricted to a [0,*] subspace (the shift never raises energy).
struct SubDilation {
  std::vector<int> target;   // member -> member image, -1 if leaked
  std::vector<char> leaked;  // member flags
  Mat shift;                 // on the subspace
};
SubDilation restrict_dilation(const Dilation& d, const Subspace& s);

}  // namespace fockrg
