#include "verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "feshbach.hpp"
#include "uniqueness.hpp"

namespace fockrg {

namespace {
using nlohmann::ordered_json;
}

SuiteResult suite_feshbach(std::uint64_t seed, int instances, int max_dim) {
  SuiteResult res;
  res.name = "feshbach";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(8, max_dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Cutoff pair;
  const double rho = 0.5;

  int kernel_matches = 0, nontrivial = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int inst = 0; inst < instances; ++inst) {
    const int n = dim_dist(rng);
    std::vector<double> e(n);
    for (double& v : e) v = unit(rng);
    std::sort(e.begin(), e.end());
    RVec t(n);
    for (int i = 0; i < n; ++i) t[i] = e[i] * (1.0 + 0.05 * (unit(rng) - 0.5));

    Mat w(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        const cplx v(unit(rng) - 0.5, i == j ? 0.0 : unit(rng) - 0.5);
        w(i, j) = v;
        w(j, i) = std::conj(v);
      }
    const double target = 0.002 + 0.03 * unit(rng);
    w *= target / op_norm_hermitian(w);

    Mat h = t.cast<cplx>().asDiagonal();
    h += w;
    if (inst % 2 == 0) {
      // shift the scalar part so that H becomes exactly singular
      Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
      const double lam0 = es.eigenvalues()[0];
      for (int i = 0; i < n; ++i) {
        t[i] -= lam0;
        h(i, i) -= lam0;
      }
    }

    std::vector<double> energies(e.begin(), e.end());
    FeshbachResult f = smooth_feshbach(t, w, pair, rho, energies);
    const double tol = 1e-10 * op_norm_hermitian(h);
    RVec chi(n);
    for (int i = 0; i < n; ++i) chi[i] = pair.chi_at(energies[i], rho);
    CorrespondenceReport rep = kernel_correspondence(h, f.F, chi, tol);
    ++res.total;
    bool ok = rep.dim_ker_h == rep.dim_ker_f;
    if (rep.dim_ker_h > 0) {
      ++nontrivial;
      ok = ok && rep.injectivity_margin > 0.0;
      worst = std::min(worst, rep.injectivity_margin);
    }
    ok = ok && f.reliable;
    if (ok)
      ++kernel_matches;
    else
      ++res.failed;
  }
  res.worst_margin = nontrivial ? worst : 0.0;
  res.details = ordered_json{{"instances", res.total},
                             {"kernel_dim_matches", kernel_matches},
                             {"nontrivial_kernels", nontrivial},
                             {"min_injectivity_margin", res.worst_margin}};
  return res;
}

SuiteResult suite_telescoping(const std::vector<double>& rhos, int n_max,
                              std::size_t grid_points) {
  SuiteResult res;
  res.name = "telescoping";
  const Cutoff pair;
  double min_margin = std::numeric_limits<double>::infinity();
  int violations = 0;
  for (double rho : rhos)
    for (int n = 0; n <= n_max; ++n) {
      TelescopingReport rep =
          telescoping_check(pair, rho, pair.plateau, n, 64, grid_points);
      ++res.total;
      violations += rep.violations;
      min_margin = std::min(min_margin, rep.min_margin);
      if (rep.violations > 0) ++res.failed;
    }
  res.worst_margin = min_margin;
  res.details = ordered_json{{"configurations", res.total},
                             {"violations", violations},
                             {"min_margin", min_margin}};
  return res;
}

KernelFamily random_family(std::uint64_t seed, const FrequencyLadder& ladder,
                           double mu, double xi, int r_nodes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ShellGrid shells = ShellGrid::from_ladder(ladder);
  std::vector<double> rg(r_nodes);
  for (int i = 0; i < r_nodes; ++i)
    rg[i] = static_cast<double>(i) / (r_nodes - 1);

  KernelFamily fam;
  fam.mu = mu;
  fam.xi = xi;
  fam.w00.rgrid = rg;
  const double c0 = 2.0 * (unit(rng) - 0.5);
  const double c1 = 1.0 + 0.2 * (unit(rng) - 0.5);
  const double c2 = 0.5 * (unit(rng) - 0.5);
  for (double r : rg) {
    fam.w00.val.push_back(c0 + c1 * r + c2 * r * r);
    fam.w00.dval.push_back(c1 + 2.0 * c2 * r);
  }

  const int degrees[5][2] = {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (const auto& d : degrees) {
    Kernel k = Kernel::zeros(d[0], d[1], shells, rg, mu);
    const double scale = std::pow(10.0, -3.0 * unit(rng));
    const int S = shells.count();
    const std::size_t T = k.tuples();
    for (std::size_t t = 0; t < T; ++t) {
      const cplx a(unit(rng) - 0.5, unit(rng) - 0.5);
      const cplx b(unit(rng) - 0.5, unit(rng) - 0.5);
      const cplx c(unit(rng) - 0.5, unit(rng) - 0.5);
      for (int ri = 0; ri < r_nodes; ++ri) {
        const double r = rg[ri];
        k.values[ri * T + t] = scale * (a + b * r + c * r * r);
        k.dvalues[ri * T + t] = scale * (b + 2.0 * c * r);
      }
    }
    (void)S;
    k = symmetrized(k);
    fam.entries.push_back(std::move(k));
  }
  return fam;
}

SuiteResult suite_norms(std::uint64_t seed, int families, double mu,
                        double xi) {
  SuiteResult res;
  res.name = "norms";
  const FrequencyLadder ladder(0.5, 6);
  const FockBasis basis = FockBasis::build(ladder, 3, 2);
  const ProjectionReport red = spectral_projection(basis, 0.0, 1.0);

  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < families; ++i) {
    const KernelFamily fam = random_family(seed + 977 * i, ladder, mu, xi);
    const Mat h = assemble(fam, 0.0, basis, red.selected);
    const double lhs = op_norm(h);
    const double rhs = family_norm(fam) + fam.w00.sup_abs();
    const double margin = rhs * (1.0 + 1e-12) - lhs;
    ++res.total;
    worst = std::min(worst, margin);
    if (margin < 0.0) ++res.failed;
  }
  res.worst_margin = worst;
  res.details = ordered_json{{"families", res.total},
                             {"min_margin", worst},
                             {"basis_dim", basis.dim()},
                             {"red_dim", red.selected.size()}};
  return res;
}

SuiteResult suite_dilation(const FrequencyLadder& ladder, int max_total,
                           int max_per_mode) {
  SuiteResult res;
  res.name = "dilation";
  const FockBasis basis = FockBasis::build(ladder, max_total, max_per_mode);
  const Dilation dil = make_dilation(basis, ladder.rho);
  const Cutoff pair;
  const int n = basis.dim();
  const Mat hf = free_field(basis).mat;
  const double hf_norm = free_field_diag(basis).maxCoeff();
  double worst = std::numeric_limits<double>::infinity();

  auto check = [&](const std::string& what, double err, double tol) {
    ++res.total;
    const double margin = tol - err;
    worst = std::min(worst, margin);
    if (margin < 0.0) {
      ++res.failed;
      res.details["failed"].push_back(what);
    }
    res.details[what] = err;
  };

  // isometry off the leaked subspace
  const Mat iso = dil.shift.adjoint() * dil.shift + dil.leak -
                  Mat::Identity(n, n);
  check("isometry_error", max_abs(iso), 1e-14);

  // exact scaling: shift^† H_f shift == rho H_f (1 - leak)
  const Mat scal = dil.shift.adjoint() * hf * dil.shift -
                   ladder.rho * hf * (Mat::Identity(n, n) - dil.leak);
  check("scaling_error", max_abs(scal), 1e-14 * hf_norm);

  // vacuum invariance
  Vec vac = Vec::Zero(n);
  vac[0] = 1.0;
  check("vacuum_error", (dil.shift * vac - vac).cwiseAbs().maxCoeff(), 0.0);

  // (Gamma chi_rho)^k == Gamma_{rho^k} chi_{rho^k} with Gamma = shift^†
  const Mat gamma = dil.shift.adjoint();
  Mat lhs = Mat::Identity(n, n);
  Mat gpow = Mat::Identity(n, n);
  Mat chirho = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    chirho(i, i) = pair.chi_at(basis.hf_eig(i), ladder.rho);
  double comp_err = 0.0;
  for (int k = 1; k <= ladder.modes - 2; ++k) {
    lhs = gamma * chirho * lhs;
    gpow = gamma * gpow;
    Mat rhs = gpow;
    for (int i = 0; i < n; ++i)
      rhs.col(i) *= pair.chi_at(basis.hf_eig(i), std::pow(ladder.rho, k));
    comp_err = std::max(comp_err, max_abs(lhs - rhs));
  }
  check("composition_error", comp_err, 1e-13);

  // chi^2 + chibar^2 == 1 along the rescaled ladder
  double part_err = 0.0;
  for (double t : {1.0, ladder.rho, ladder.rho * ladder.rho,
                   ladder.rho * ladder.rho * ladder.rho})
    for (int i = 0; i < n; ++i) {
      const double c = pair.chi_at(basis.hf_eig(i), t);
      const double cb = pair.chibar_at(basis.hf_eig(i), t);
      part_err = std::max(part_err, std::abs(c * c + cb * cb - 1.0));
    }
  check("partition_error", part_err, 1e-14);

  // chi_rho chi == chi_rho exactly (rho < plateau)
  double prod_err = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cr = pair.chi_at(basis.hf_eig(i), ladder.rho);
    prod_err = std::max(prod_err, std::abs(cr * pair.chi(basis.hf_eig(i)) - cr));
  }
  check("plateau_product_error", prod_err, 0.0);

  res.worst_margin = worst;
  return res;
}

}  // namespace fockrg
