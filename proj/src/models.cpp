#include "models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace fockrg {

namespace {
constexpr double kPi = std::numbers::pi;

// 32-point Gauss-Legendre on [-1, 1], positive half (symmetric)
void gauss32(std::vector<double>& x, std::vector<double>& w) {
  static const double xs[16] = {
      0.0483076656877383, 0.1444719615827965, 0.2392873622521371,
      0.3318686022821277, 0.4213512761306353, 0.5068999089322294,
      0.5877157572407623, 0.6630442669302152, 0.7321821187402897,
      0.7944837959679424, 0.8493676137325700, 0.8963211557660521,
      0.9349060759377397, 0.9647622555875064, 0.9856115115452684,
      0.9972638618494816};
  static const double ws[16] = {
      0.0965400885147278, 0.0956387200792749, 0.0938443990808046,
      0.0911738786957639, 0.0876520930044038, 0.0833119242269467,
      0.0781938957870703, 0.0723457941088485, 0.0658222227763618,
      0.0586840934785355, 0.0509980592623762, 0.0428358980222267,
      0.0342738629130214, 0.0253920653092621, 0.0162743947309057,
      0.0070186100094701};
  x.clear();
  w.clear();
  for (int i = 15; i >= 0; --i) {
    x.push_back(-xs[i]);
    w.push_back(ws[i]);
  }
  for (int i = 0; i < 16; ++i) {
    x.push_back(xs[i]);
    w.push_back(ws[i]);
  }
}
}  // namespace

std::vector<double> mode_coupling_weights(const SpinBosonParams& p) {
  const int J = p.ladder.modes;
  std::vector<double> g(J);
  if (!p.f_profile) {
    const double w0 = p.ladder.omega0;
    const double r2 = p.ladder.rho * p.ladder.rho;
    for (int j = 0; j < J; ++j)
      g[j] = std::sqrt(2.0 * kPi * w0 * w0 * std::pow(r2, j) * (1.0 - r2));
    return g;
  }
  std::vector<double> gx, gw;
  gauss32(gx, gw);
  for (int j = 0; j < J; ++j) {
    const double a = p.ladder.shell_inner(j), b = p.ladder.shell_outer(j);
    double acc = 0.0;
    for (std::size_t q = 0; q < gx.size(); ++q) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
      const double f = p.f_profile(r);
      acc += gw[q] * 0.5 * (b - a) * 4.0 * kPi * r * f * f;
    }
    g[j] = std::sqrt(std::max(0.0, acc));
  }
  return g;
}

Mat build_spin_boson(const SpinBosonParams& p, const FockBasis& basis) {
  const int N = basis.dim();
  if (static_cast<std::size_t>(2 * N) > p.dim_cap * 2)
    throw ConfigError("build_spin_boson: dimension exceeds cap");
  const std::vector<double> g = mode_coupling_weights(p);

  Mat phi = Mat::Zero(N, N);
  for (int j = 0; j < p.ladder.modes; ++j) {
    const Mat adag = creation_op(basis, j).mat;
    phi += g[j] * (adag + adag.adjoint());
  }

  Mat h = Mat::Zero(2 * N, 2 * N);
  for (int i = 0; i < N; ++i) {
    h(i, i) = 2.0 + basis.hf_eig(i);  // spin-up block
    h(N + i, N + i) = basis.hf_eig(i);
  }
  h.block(0, N, N, N) = p.g * phi;
  h.block(N, 0, N, N) = p.g * phi;
  return h;
}

OracleResult exact_diag_oracle(const Mat& h, int k, std::size_t dense_cap,
                               double cluster_rel_tol) {
  if (static_cast<std::size_t>(h.rows()) > dense_cap)
    throw ConfigError("exact_diag_oracle: dimension " +
                      std::to_string(h.rows()) + " exceeds dense cap " +
                      std::to_string(dense_cap));
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  const RVec lam = es.eigenvalues();  // ascending
  OracleResult out;
  const int kk = std::min<int>(k, static_cast<int>(lam.size()));
  for (int i = 0; i < kk; ++i) out.lowest.push_back(lam[i]);
  out.ground_energy = lam[0];
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  int mult = 1;
  while (mult < lam.size() &&
         lam[mult] - lam[0] <= cluster_rel_tol * scale)
    ++mult;
  out.ground_multiplicity = mult;
  out.gap = (mult < lam.size()) ? lam[mult] - lam[0] : 0.0;
  return out;
}

InitialReduction initial_reduction(const Mat& h_spin_boson,
                                   const Subspace& red, double z,
                                   double cond_limit) {
  const int N = red.basis->dim();
  if (h_spin_boson.rows() != 2 * N)
    throw ConfigError("initial_reduction: operator/basis mismatch");
  std::vector<int> p_idx;
  p_idx.reserve(red.idx.size());
  for (int i : red.idx) p_idx.push_back(N + i);  // spin-down (x) H_red
  InitialReduction out;
  out.z = z;
  out.fesh = sharp_feshbach(h_spin_boson, p_idx, z, cond_limit);
  out.h1 = out.fesh.F;
  return out;
}

KernelFamily initial_kernel_family(const SpinBosonParams& p, double z,
                                   double mu, double xi, int r_nodes) {
  if (p.f_profile)
    throw ConfigError("initial_kernel_family: only f == 1 is supported");
  const int J = p.ladder.modes;
  const double g2 = p.g * p.g;
  const ShellGrid shells = ShellGrid::from_ladder(p.ladder);
  std::vector<double> rg(r_nodes);
  for (int i = 0; i < r_nodes; ++i)
    rg[i] = static_cast<double>(i) / (r_nodes - 1);
  std::vector<double> om(J), phi2(J);
  for (int j = 0; j < J; ++j) {
    om[j] = p.ladder.omega(j);
    const double lf = shells.leg_factor(j);
    phi2[j] = lf * lf;
  }

  KernelFamily fam;
  fam.mu = mu;
  fam.xi = xi;

  // w00[z;r] = r - z - g^2 sum_j phi_j^2 / (2 + r + omega_j - z)
  fam.w00.rgrid = rg;
  fam.w00.val.resize(r_nodes);
  fam.w00.dval.resize(r_nodes);
  for (int i = 0; i < r_nodes; ++i) {
    double v = rg[i] - z, dv = 1.0;
    for (int j = 0; j < J; ++j) {
      const double den = 2.0 + rg[i] + om[j] - z;
      v -= g2 * phi2[j] / den;
      dv += g2 * phi2[j] / (den * den);
    }
    fam.w00.val[i] = v;
    fam.w00.dval[i] = dv;
  }

  // degree (1,1): -g^2 [ (2+r-z)^{-1} + (2+r+om_i+om_j-z)^{-1} ]
  Kernel w11 = Kernel::zeros(1, 1, shells, rg, mu);
  for (int ri = 0; ri < r_nodes; ++ri) {
    const double r = rg[ri];
    for (int i = 0; i < J; ++i)
      for (int j = 0; j < J; ++j) {
        const double d1 = 2.0 + r - z;
        const double d2 = 2.0 + r + om[i] + om[j] - z;
        const std::size_t ix = w11.flat(ri, {i, j});
        w11.values[ix] = -g2 * (1.0 / d1 + 1.0 / d2);
        w11.dvalues[ix] = g2 * (1.0 / (d1 * d1) + 1.0 / (d2 * d2));
      }
  }

  // degrees (2,0)/(0,2): -g^2/2 [ (2+r+om_i-z)^{-1} + (2+r+om_j-z)^{-1} ]
  Kernel w20 = Kernel::zeros(2, 0, shells, rg, mu);
  Kernel w02 = Kernel::zeros(0, 2, shells, rg, mu);
  for (int ri = 0; ri < r_nodes; ++ri) {
    const double r = rg[ri];
    for (int i = 0; i < J; ++i)
      for (int j = 0; j < J; ++j) {
        const double d1 = 2.0 + r + om[i] - z;
        const double d2 = 2.0 + r + om[j] - z;
        const cplx v = -0.5 * g2 * (1.0 / d1 + 1.0 / d2);
        const cplx dv = 0.5 * g2 * (1.0 / (d1 * d1) + 1.0 / (d2 * d2));
        w20.values[w20.flat(ri, {i, j})] = v;
        w20.dvalues[w20.flat(ri, {i, j})] = dv;
        w02.values[w02.flat(ri, {i, j})] = v;
        w02.dvalues[w02.flat(ri, {i, j})] = dv;
      }
  }

  fam.entries.push_back(std::move(w11));
  fam.entries.push_back(std::move(w20));
  fam.entries.push_back(std::move(w02));
  return fam;
}

}  // namespace fockrg
