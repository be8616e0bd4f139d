#pragma once

#include <complex>
#include <map>
#include <vector>

#include "fock.hpp"
#include "linalg.hpp"

#include <nlohmann/json.hpp>

namespace fockrg {

/// Radial momentum shells, one quadrature node per ladder shell
/// (geometric midpoint of (inner, outer]).
struct ShellGrid {
  std::vector<double> inner, outer, node;
  static ShellGrid from_ladder(const FrequencyLadder& ladder);
  int count() const { return static_cast<int>(node.size()); }
  /// closed-form weight of |k|^{-(3+2mu)} d^3k over shell j
  double mu_weight(int j, double mu) const;
  /// per-leg factor (integral of |k|^{-1} d^3k over shell j)^{1/2}
  double leg_factor(int j) const;
};

/// Graded kernel w_{m,n}[r; k_1..k_m, kt_1..kt_n] sampled on an r-grid and
/// one radial node per shell and argument, with stored r-derivative.
struct Kernel {
  int m = 0, n = 0;
  ShellGrid shells;
  std::vector<double> rgrid;
  std::vector<cplx> values;   // flattened [r][cre shells][ann shells], r slowest
  std::vector<cplx> dvalues;  // d/dr samples, same layout
  double mu = 0.5;

  int legs() const { return m + n; }
  std::size_t tuples() const;
  std::size_t flat(int ri, const std::vector<int>& tuple) const;
  cplx value(int ri, const std::vector<int>& tuple) const;
  static Kernel zeros(int m, int n, const ShellGrid& shells,
                      const std::vector<double>& rgrid, double mu);
};

/// sup_r-weighted L^2 norm with the |k|^{-(3+2mu)} measure, shell weights
/// in closed form. For m = n = 0 this degenerates to sup_r |w|.
double norm_mu(const Kernel& k);
/// norm_mu of values plus norm_mu of the stored r-derivative.
double sharp_norm(const Kernel& k);

Kernel symmetrized(const Kernel& k);
bool is_symmetric(const Kernel& k, double tol = 1e-13);

/// Scalar kernel w00 at a fixed spectral parameter.
struct ScalarKernel {
  std::vector<double> rgrid;
  std::vector<double> val, dval;
  double sup_abs() const;
  double eval(double r) const;       // pchip interpolation
  double sup_slope_dev() const;      // sup_r |d/dr w00 - 1| from stored dval
};

struct KernelFamily {
  double mu = 0.5;
  double xi = 0.5;
  ScalarKernel w00;
  std::vector<Kernel> entries;  // degrees with m+n >= 1
};

/// sum over entries of xi^{-(m+n)} * sharp_norm.
double family_norm(const KernelFamily& f);

struct PolydiscReport {
  double eps = 0.0, delta = 0.0;
  double slope_dev = 0.0;   // sup over samples of sup_r |dw00/dr - 1|
  double vacuum_dev = 0.0;  // sup over samples of |w00[z;0] + z|
  double wnorm_sup = 0.0;   // sup over samples of the graded family norm
  bool inside = false;
  double margin_slope = 0.0, margin_vacuum = 0.0, margin_wnorm = 0.0;
};
PolydiscReport polydisc_check(
    const std::vector<std::pair<double, KernelFamily>>& samples, double eps,
    double delta);

/// Wick quantization 1_I(H_f) prod a^†(shell) w[H_f; shells] prod a(shell)
/// 1_I(H_f) on the span of red_idx, with per-leg shell factors and the H_f
/// argument evaluated on the intermediate state between the annihilation
/// and creation strings.
Mat wick_quantize(const Kernel& k, const FockBasis& basis,
                  const std::vector<int>& red_idx);

/// w00[H_f] plus the Wick quantization of every stored entry.
Mat assemble(const KernelFamily& f, double z, const FockBasis& basis,
             const std::vector<int>& red_idx);

nlohmann::ordered_json family_to_json(const KernelFamily& f);
KernelFamily family_from_json(const nlohmann::json& j);

}  // namespace fockrg
