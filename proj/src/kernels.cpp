#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "errors.hpp"
#include "pchip.hpp"

namespace fockrg {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> uniform_rgrid(int nodes) {
  std::vector<double> r(nodes);
  for (int i = 0; i < nodes; ++i) r[i] = static_cast<double>(i) / (nodes - 1);
  return r;
}

// iterate tuples in shells^legs, odometer order
bool advance(std::vector<int>& tuple, int base) {
  for (int i = static_cast<int>(tuple.size()) - 1; i >= 0; --i) {
    if (++tuple[i] < base) return true;
    tuple[i] = 0;
  }
  return false;
}
}  // namespace

ShellGrid ShellGrid::from_ladder(const FrequencyLadder& ladder) {
  ShellGrid g;
  for (int j = 0; j < ladder.modes; ++j) {
    g.inner.push_back(ladder.shell_inner(j));
    g.outer.push_back(ladder.shell_outer(j));
    g.node.push_back(std::sqrt(g.inner.back() * g.outer.back()));
  }
  return g;
}

double ShellGrid::mu_weight(int j, double mu) const {
  if (mu <= 0.0) throw ConfigError("ShellGrid::mu_weight: mu must be positive");
  const double a = inner[j], b = outer[j];
  return (4.0 * kPi / (2.0 * mu)) *
         (std::pow(a, -2.0 * mu) - std::pow(b, -2.0 * mu));
}

double ShellGrid::leg_factor(int j) const {
  const double a = inner[j], b = outer[j];
  return std::sqrt(2.0 * kPi * (b * b - a * a));
}

std::size_t Kernel::tuples() const {
  std::size_t t = 1;
  for (int i = 0; i < legs(); ++i) t *= shells.count();
  return t;
}

std::size_t Kernel::flat(int ri, const std::vector<int>& tuple) const {
  std::size_t off = ri;
  for (int v : tuple) off = off * shells.count() + v;
  return off;
}

cplx Kernel::value(int ri, const std::vector<int>& tuple) const {
  return values[flat(ri, tuple)];
}

Kernel Kernel::zeros(int m, int n, const ShellGrid& shells,
                     const std::vector<double>& rgrid, double mu) {
  Kernel k;
  k.m = m;
  k.n = n;
  k.shells = shells;
  k.rgrid = rgrid.empty() ? uniform_rgrid(33) : rgrid;
  k.mu = mu;
  k.values.assign(k.rgrid.size() * k.tuples(), cplx(0.0, 0.0));
  k.dvalues.assign(k.values.size(), cplx(0.0, 0.0));
  return k;
}

namespace {
double norm_mu_of(const std::vector<cplx>& grid, const Kernel& k) {
  if (k.mu <= 0.0) throw ConfigError("norm_mu: mu must be positive");
  const int R = static_cast<int>(k.rgrid.size());
  const std::size_t T = k.tuples();
  const int S = k.shells.count();
  std::vector<double> w(S);
  for (int j = 0; j < S; ++j) w[j] = k.shells.mu_weight(j, k.mu);

  double total = 0.0;
  std::vector<int> tuple(k.legs(), 0);
  std::size_t t = 0;
  do {
    double sup2 = 0.0;
    for (int ri = 0; ri < R; ++ri) {
      const double a = std::norm(grid[k.flat(ri, tuple)]);
      if (a > sup2) sup2 = a;
    }
    double weight = 1.0;
    for (int v : tuple) weight *= w[v];
    total += sup2 * weight;
    ++t;
  } while (k.legs() > 0 && advance(tuple, S));
  (void)T;
  return std::sqrt(total);
}
}  // namespace

double norm_mu(const Kernel& k) {
  if (k.legs() == 0) {
    double sup = 0.0;
    for (const cplx& v : k.values) sup = std::max(sup, std::abs(v));
    return sup;
  }
  return norm_mu_of(k.values, k);
}

double sharp_norm(const Kernel& k) {
  if (k.legs() == 0) {
    double sup = 0.0, dsup = 0.0;
    for (const cplx& v : k.values) sup = std::max(sup, std::abs(v));
    for (const cplx& v : k.dvalues) dsup = std::max(dsup, std::abs(v));
    return sup + dsup;
  }
  return norm_mu_of(k.values, k) + norm_mu_of(k.dvalues, k);
}

namespace {
void symmetrize_block(const Kernel& k, const std::vector<cplx>& in,
                      std::vector<cplx>& out) {
  const int R = static_cast<int>(k.rgrid.size());
  const int S = k.shells.count();
  std::vector<int> tuple(k.legs(), 0);
  out.assign(in.size(), cplx(0, 0));
  if (k.legs() == 0) {
    out = in;
    return;
  }
  do {
    std::vector<int> cre(tuple.begin(), tuple.begin() + k.m);
    std::vector<int> ann(tuple.begin() + k.m, tuple.end());
    std::sort(cre.begin(), cre.end());
    std::sort(ann.begin(), ann.end());
    // average over all permutations of each group
    double count = 0.0;
    std::vector<cplx> acc(R, cplx(0, 0));
    std::vector<int> pc = cre, pa = ann;
    do {
      do {
        std::vector<int> full = pc;
        full.insert(full.end(), pa.begin(), pa.end());
        for (int ri = 0; ri < R; ++ri) acc[ri] += in[k.flat(ri, full)];
        count += 1.0;
      } while (std::next_permutation(pa.begin(), pa.end()));
    } while (std::next_permutation(pc.begin(), pc.end()));
    for (int ri = 0; ri < R; ++ri)
      out[k.flat(ri, tuple)] = acc[ri] / count;
  } while (advance(tuple, S));
}
}  // namespace

Kernel symmetrized(const Kernel& k) {
  Kernel out = k;
  symmetrize_block(k, k.values, out.values);
  symmetrize_block(k, k.dvalues, out.dvalues);
  return out;
}

bool is_symmetric(const Kernel& k, double tol) {
  const Kernel s = symmetrized(k);
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < k.values.size(); ++i) {
    scale = std::max(scale, std::abs(k.values[i]));
    diff = std::max(diff, std::abs(k.values[i] - s.values[i]));
  }
  return diff <= tol * std::max(1.0, scale);
}

double ScalarKernel::sup_abs() const {
  double s = 0.0;
  for (double v : val) s = std::max(s, std::abs(v));
  return s;
}

double ScalarKernel::eval(double r) const {
  if (rgrid.size() == 1) return val[0];
  return Pchip::fit(rgrid, val).eval(r);
}

double ScalarKernel::sup_slope_dev() const {
  double s = 0.0;
  for (double v : dval) s = std::max(s, std::abs(v - 1.0));
  return s;
}

double family_norm(const KernelFamily& f) {
  double total = 0.0;
  for (const Kernel& k : f.entries)
    total += std::pow(f.xi, -static_cast<double>(k.legs())) * sharp_norm(k);
  return total;
}

PolydiscReport polydisc_check(
    const std::vector<std::pair<double, KernelFamily>>& samples, double eps,
    double delta) {
  PolydiscReport rep;
  rep.eps = eps;
  rep.delta = delta;
  for (const auto& [z, fam] : samples) {
    rep.slope_dev = std::max(rep.slope_dev, fam.w00.sup_slope_dev());
    double vac = std::abs(fam.w00.eval(0.0) + z);
    rep.vacuum_dev = std::max(rep.vacuum_dev, vac);
    rep.wnorm_sup = std::max(rep.wnorm_sup, family_norm(fam));
  }
  rep.margin_slope = eps - rep.slope_dev;
  rep.margin_vacuum = delta - rep.vacuum_dev;
  rep.margin_wnorm = delta - rep.wnorm_sup;
  rep.inside = rep.margin_slope >= 0 && rep.margin_vacuum >= 0 &&
               rep.margin_wnorm >= 0;
  return rep;
}

namespace {
struct TupleInterp {
  // per-tuple pchip on re/im of the kernel values
  std::vector<Pchip> re, im;
  int S = 0, legs = 0;
  std::size_t index(const std::vector<int>& tuple) const {
    std::size_t off = 0;
    for (int v : tuple) off = off * S + v;
    return off;
  }
};

TupleInterp build_interp(const Kernel& k) {
  TupleInterp ti;
  ti.S = k.shells.count();
  ti.legs = k.legs();
  const int R = static_cast<int>(k.rgrid.size());
  std::size_t T = k.tuples();
  ti.re.reserve(T);
  ti.im.reserve(T);
  std::vector<int> tuple(k.legs(), 0);
  std::vector<double> re(R), im(R);
  do {
    for (int ri = 0; ri < R; ++ri) {
      const cplx v = k.value(ri, tuple);
      re[ri] = v.real();
      im[ri] = v.imag();
    }
    ti.re.push_back(Pchip::fit(k.rgrid, re));
    ti.im.push_back(Pchip::fit(k.rgrid, im));
  } while (k.legs() > 0 && advance(tuple, ti.S));
  return ti;
}
}  // namespace

Mat wick_quantize(const Kernel& k, const FockBasis& basis,
                  const std::vector<int>& red_idx) {
  const int S = k.shells.count();
  if (S != basis.ladder().modes)
    throw ConfigError("wick_quantize: kernel shells do not align with the ladder");
  for (int j = 0; j < S; ++j)
    if (std::abs(k.shells.outer[j] - basis.ladder().shell_outer(j)) >
        1e-14 * std::max(1.0, basis.ladder().shell_outer(j)))
      throw ConfigError("wick_quantize: shell boundaries do not match the ladder");

  const int nred = static_cast<int>(red_idx.size());
  Mat out = Mat::Zero(nred, nred);
  if (k.values.empty()) return out;

  const TupleInterp interp = build_interp(k);
  std::vector<double> leg(S);
  for (int j = 0; j < S; ++j) leg[j] = k.shells.leg_factor(j);

  std::vector<int> pos_of_full(basis.dim(), -1);
  for (int p = 0; p < nred; ++p) pos_of_full[red_idx[p]] = p;

  std::vector<int> ann(k.n, 0), cre(k.m, 0);
  // column state t in the subspace; apply annihilation string, evaluate the
  // kernel at the intermediate energy, apply creation string
  for (int tp = 0; tp < nred; ++tp) {
    const int t = red_idx[tp];
    std::fill(ann.begin(), ann.end(), 0);
    do {
      Occupation mid = basis.state(t);
      double amp = 1.0;
      bool dead = false;
      for (int l : ann) {
        if (mid[l] == 0) {
          dead = true;
          break;
        }
        amp *= std::sqrt(static_cast<double>(mid[l]));
        mid[l] -= 1;
      }
      if (!dead) {
        double emid = 0.0;
        for (int j = 0; j < S; ++j)
          emid += mid[j] * basis.ladder().omega(j);
        double legs_ann = 1.0;
        for (int l : ann) legs_ann *= leg[l];

        std::fill(cre.begin(), cre.end(), 0);
        do {
          Occupation fin = mid;
          double camp = 1.0;
          bool cdead = false;
          int used = 0;
          for (int x : fin) used += x;
          for (int c : cre) {
            if (fin[c] + 1 > basis.max_per_mode() ||
                used + 1 > basis.max_total()) {
              cdead = true;
              break;
            }
            fin[c] += 1;
            ++used;
            camp *= std::sqrt(static_cast<double>(fin[c]));
          }
          if (!cdead) {
            const int sfull = basis.index_of(fin);
            const int sp = sfull >= 0 ? pos_of_full[sfull] : -1;
            if (sp >= 0) {
              std::vector<int> tuple = cre;
              tuple.insert(tuple.end(), ann.begin(), ann.end());
              const std::size_t ix = interp.index(tuple);
              const cplx w(interp.re[ix].eval(emid), interp.im[ix].eval(emid));
              double legs_cre = 1.0;
              for (int c : cre) legs_cre *= leg[c];
              out(sp, tp) += w * amp * camp * legs_ann * legs_cre;
            }
          }
        } while (k.m > 0 && advance(cre, S));
      }
    } while (k.n > 0 && advance(ann, S));
  }
  return out;
}

Mat assemble(const KernelFamily& f, double z, const FockBasis& basis,
             const std::vector<int>& red_idx) {
  (void)z;  // the family is already evaluated at its spectral parameter
  const int nred = static_cast<int>(red_idx.size());
  Mat h = Mat::Zero(nred, nred);
  if (!f.w00.rgrid.empty()) {
    const Pchip w00 = Pchip::fit(f.w00.rgrid, f.w00.val);
    for (int p = 0; p < nred; ++p)
      h(p, p) = w00.eval(basis.hf_eig(red_idx[p]));
  }
  for (const Kernel& k : f.entries) h += wick_quantize(k, basis, red_idx);
  return h;
}

nlohmann::ordered_json family_to_json(const KernelFamily& f) {
  nlohmann::ordered_json j;
  j["mu"] = f.mu;
  j["xi"] = f.xi;
  j["w00"] = {{"r", f.w00.rgrid}, {"val", f.w00.val}, {"dval", f.w00.dval}};
  j["entries"] = nlohmann::ordered_json::array();
  for (const Kernel& k : f.entries) {
    nlohmann::ordered_json e;
    e["m"] = k.m;
    e["n"] = k.n;
    e["mu"] = k.mu;
    e["shells"] = {{"inner", k.shells.inner},
                   {"outer", k.shells.outer},
                   {"node", k.shells.node}};
    e["r"] = k.rgrid;
    std::vector<double> vre, vim, dre, dim_;
    for (const cplx& v : k.values) {
      vre.push_back(v.real());
      vim.push_back(v.imag());
    }
    for (const cplx& v : k.dvalues) {
      dre.push_back(v.real());
      dim_.push_back(v.imag());
    }
    e["values_re"] = vre;
    e["values_im"] = vim;
    e["dvalues_re"] = dre;
    e["dvalues_im"] = dim_;
    j["entries"].push_back(std::move(e));
  }
  return j;
}

KernelFamily family_from_json(const nlohmann::json& j) {
  KernelFamily f;
  f.mu = j.at("mu").get<double>();
  f.xi = j.at("xi").get<double>();
  f.w00.rgrid = j.at("w00").at("r").get<std::vector<double>>();
  f.w00.val = j.at("w00").at("val").get<std::vector<double>>();
  f.w00.dval = j.at("w00").at("dval").get<std::vector<double>>();
  for (const auto& e : j.at("entries")) {
    Kernel k;
    k.m = e.at("m").get<int>();
    k.n = e.at("n").get<int>();
    k.mu = e.at("mu").get<double>();
    k.shells.inner = e.at("shells").at("inner").get<std::vector<double>>();
    k.shells.outer = e.at("shells").at("outer").get<std::vector<double>>();
    k.shells.node = e.at("shells").at("node").get<std::vector<double>>();
    k.rgrid = e.at("r").get<std::vector<double>>();
    const auto vre = e.at("values_re").get<std::vector<double>>();
    const auto vim = e.at("values_im").get<std::vector<double>>();
    const auto dre = e.at("dvalues_re").get<std::vector<double>>();
    const auto dim_ = e.at("dvalues_im").get<std::vector<double>>();
    for (std::size_t i = 0; i < vre.size(); ++i)
      k.values.emplace_back(vre[i], vim[i]);
    for (std::size_t i = 0; i < dre.size(); ++i)
      k.dvalues.emplace_back(dre[i], dim_[i]);
    f.entries.push_back(std::move(k));
  }
  return f;
}

}  // namespace fockrg
