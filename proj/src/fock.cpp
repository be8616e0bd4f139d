#include "fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace fockrg {

FrequencyLadder::FrequencyLadder(double rho_, int modes_, double omega0_)
    : rho(rho_), modes(modes_), omega0(omega0_) {
  if (!(rho > 0.0 && rho < 0.75))
    throw ConfigError("FrequencyLadder: rho must lie in (0, 3/4), got " +
                      std::to_string(rho));
  if (modes < 1) throw ConfigError("FrequencyLadder: need at least one mode");
  if (!(omega0 > 0.0 && omega0 <= 1.0))
    throw ConfigError("FrequencyLadder: omega0 must lie in (0, 1]");
}

double FrequencyLadder::omega(int j) const { return omega0 * std::pow(rho, j); }

FockBasis FockBasis::build(const FrequencyLadder& ladder, int max_total,
                           int max_per_mode, std::size_t dim_cap) {
  if (max_total < 1) throw ConfigError("FockBasis: max_total must be >= 1");
  if (max_per_mode < 1) throw ConfigError("FockBasis: max_per_mode must be >= 1");

  FockBasis b(ladder, max_total, max_per_mode);
  const int J = ladder.modes;
  Occupation occ(J, 0);
  // depth-first enumeration, then graded-lex sort for the spec'd order
  std::vector<Occupation> all;
  auto rec = [&](auto&& self, int mode, int used) -> void {
    if (mode == J) {
      all.push_back(occ);
      if (all.size() > dim_cap)
        throw ConfigError("FockBasis: dimension exceeds cap " +
                          std::to_string(dim_cap));
      return;
    }
    const int top = std::min(max_per_mode, max_total - used);
    for (int n = 0; n <= top; ++n) {
      occ[mode] = n;
      self(self, mode + 1, used + n);
    }
    occ[mode] = 0;
  };
  rec(rec, 0, 0);

  auto total = [](const Occupation& o) {
    int t = 0;
    for (int n : o) t += n;
    return t;
  };
  std::sort(all.begin(), all.end(), [&](const Occupation& a, const Occupation& c) {
    const int ta = total(a), tc = total(c);
    if (ta != tc) return ta < tc;
    return a < c;
  });

  b.states_ = std::move(all);
  b.hf_.resize(b.states_.size());
  std::vector<double> om(J);
  for (int j = 0; j < J; ++j) om[j] = ladder.omega(j);
  for (std::size_t i = 0; i < b.states_.size(); ++i) {
    double e = 0.0;
    for (int j = 0; j < J; ++j) e += b.states_[i][j] * om[j];
    b.hf_[i] = e;
  }
  b.lookup_.reserve(b.states_.size());
  for (std::size_t i = 0; i < b.states_.size(); ++i)
    b.lookup_.emplace_back(b.states_[i], static_cast<int>(i));
  std::sort(b.lookup_.begin(), b.lookup_.end());
  return b;
}

int FockBasis::index_of(const Occupation& occ) const {
  auto it = std::lower_bound(
      lookup_.begin(), lookup_.end(), occ,
      [](const std::pair<Occupation, int>& p, const Occupation& o) {
        return p.first < o;
      });
  if (it == lookup_.end() || it->first != occ) return -1;
  return it->second;
}

Operator creation_op(const FockBasis& basis, int mode) {
  const int J = basis.ladder().modes;
  if (mode < 0 || mode >= J)
    throw ConfigError("creation_op: mode index " + std::to_string(mode) +
                      " out of range");
  Mat m = Mat::Zero(basis.dim(), basis.dim());
  for (int t = 0; t < basis.dim(); ++t) {
    Occupation occ = basis.state(t);
    if (occ[mode] + 1 > basis.max_per_mode()) continue;
    occ[mode] += 1;
    const int s = basis.index_of(occ);
    if (s < 0) continue;  // total cap: transition dropped by truncation
    m(s, t) = std::sqrt(static_cast<double>(occ[mode]));
  }
  return {std::move(m), Domain::Full};
}

Operator annihilation_op(const FockBasis& basis, int mode) {
  Operator c = creation_op(basis, mode);
  return {c.mat.adjoint(), Domain::Full};
}

RVec free_field_diag(const FockBasis& basis) {
  RVec d(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) d[i] = basis.hf_eig(i);
  return d;
}

Operator free_field(const FockBasis& basis) {
  Mat m = free_field_diag(basis).cast<cplx>().asDiagonal();
  return {std::move(m), Domain::Full};
}

ProjectionReport spectral_projection(const FockBasis& basis, double lo,
                                     double hi, double tie_tol) {
  if (lo > hi) throw ConfigError("spectral_projection: lo > hi");
  ProjectionReport rep;
  for (int i = 0; i < basis.dim(); ++i) {
    const double e = basis.hf_eig(i);
    const bool exact = (e == lo) || (e == hi);
    const bool near = !exact && (std::abs(e - lo) <= tie_tol ||
                                 std::abs(e - hi) <= tie_tol);
    if (exact) rep.exact_hits.push_back(i);
    if (near) rep.inexact_ties.push_back(i);
    if (e >= lo - tie_tol && e <= hi + tie_tol) rep.selected.push_back(i);
  }
  return rep;
}

Operator projection_matrix(const FockBasis& basis, const ProjectionReport& rep) {
  Mat m = Mat::Zero(basis.dim(), basis.dim());
  for (int i : rep.selected) m(i, i) = 1.0;
  return {std::move(m), Domain::Full};
}

std::pair<Operator, Operator> cutoff_op(const FockBasis& basis,
                                        const Cutoff& pair, double t) {
  if (!(t > 0.0)) throw ConfigError("cutoff_op: scale must be positive");
  Mat a = Mat::Zero(basis.dim(), basis.dim());
  Mat b = Mat::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    a(i, i) = pair.chi_at(basis.hf_eig(i), t);
    b(i, i) = pair.chibar_at(basis.hf_eig(i), t);
  }
  return {Operator{std::move(a), Domain::Full}, Operator{std::move(b), Domain::Full}};
}

Dilation make_dilation(const FockBasis& basis, double scale) {
  if (scale != basis.ladder().rho)
    throw ConfigError("make_dilation: scale does not match the ladder rho");
  const int J = basis.ladder().modes;
  Dilation d;
  d.target.assign(basis.dim(), -1);
  d.shift = Mat::Zero(basis.dim(), basis.dim());
  d.leak = Mat::Zero(basis.dim(), basis.dim());
  for (int t = 0; t < basis.dim(); ++t) {
    const Occupation& occ = basis.state(t);
    if (occ[J - 1] > 0) {
      d.leak(t, t) = 1.0;
      continue;
    }
    Occupation shifted(J, 0);
    for (int j = 0; j + 1 < J; ++j) shifted[j + 1] = occ[j];
    const int s = basis.index_of(shifted);
    // the shift preserves total and per-mode occupation, so s always exists
    d.target[t] = s;
    d.shift(s, t) = 1.0;
  }
  return d;
}

int Subspace::pos_of_full(int full_index) const {
  auto it = std::lower_bound(idx.begin(), idx.end(), full_index);
  if (it == idx.end() || *it != full_index) return -1;
  return static_cast<int>(it - idx.begin());
}

Mat Subspace::restricted(const Mat& full_op) const {
  return restrict_to(full_op, idx);
}

RVec Subspace::chi_diag(const Cutoff& pair, double t) const {
  RVec d(dim());
  for (int i = 0; i < dim(); ++i) d[i] = pair.chi_at(energy[i], t);
  return d;
}

RVec Subspace::chibar_diag(const Cutoff& pair, double t) const {
  RVec d(dim());
  for (int i = 0; i < dim(); ++i) d[i] = pair.chibar_at(energy[i], t);
  return d;
}

Subspace reduced_space(std::shared_ptr<const FockBasis> basis, double lo,
                       double hi, double tie_tol, bool allow_inexact_ties) {
  Subspace s;
  s.basis = basis;
  s.report = spectral_projection(*basis, lo, hi, tie_tol);
  if (!s.report.inexact_ties.empty() && !allow_inexact_ties)
    throw BoundaryTieError(
        "reduced_space: " + std::to_string(s.report.inexact_ties.size()) +
        " eigenvalue(s) within " + std::to_string(tie_tol) +
        " of a projection boundary; the projection is ill-posed "
        "(set model.allow_boundary_ties to override)");
  s.idx = s.report.selected;
  s.energy.reserve(s.idx.size());
  for (int i : s.idx) s.energy.push_back(basis->hf_eig(i));

  // cluster eigenvalues that agree to tie_tol into one T-grid node
  std::vector<int> order(s.idx.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return s.energy[a] < s.energy[b]; });
  s.cluster.assign(s.idx.size(), -1);
  for (int p : order) {
    const double e = s.energy[p];
    if (s.cluster_value.empty() ||
        e - s.cluster_value.back() > tie_tol * std::max(1.0, std::abs(e))) {
      s.cluster_value.push_back(e);
    }
    s.cluster[p] = static_cast<int>(s.cluster_value.size()) - 1;
  }
  return s;
}

SubDilation restrict_dilation(const Dilation& d, const Subspace& s) {
  SubDilation sd;
  const int n = s.dim();
  sd.target.assign(n, -1);
  sd.leaked.assign(n, 0);
  sd.shift = Mat::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    const int full = s.idx[p];
    const int img = d.target[full];
    if (img < 0) {
      sd.leaked[p] = 1;
      continue;
    }
    const int q = s.pos_of_full(img);
    if (q < 0) {
      // image left the subspace; only possible when lo > 0
      sd.leaked[p] = 1;
      continue;
    }
    sd.target[p] = q;
    sd.shift(q, p) = 1.0;
  }
  return sd;
}

}  // namespace fockrg
