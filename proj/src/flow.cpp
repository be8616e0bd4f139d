#include "flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace fockrg {

double TFunction::slope_deviation(int samples) const {
  double sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = static_cast<double>(i) / (samples - 1);
    sup = std::max(sup, std::abs(itp.deriv(r) - 1.0));
  }
  for (double r : x)
    if (r >= 0.0 && r <= 1.0) sup = std::max(sup, std::abs(itp.deriv(r) - 1.0));
  return sup;
}

TFunction TFunction::from_values(std::vector<double> x, std::vector<double> y) {
  TFunction t;
  t.itp = Pchip::fit(x, y);
  t.x = std::move(x);
  t.y = std::move(y);
  return t;
}

SplitResult split_T_W(const Mat& h, const Subspace& red) {
  const int n = red.dim();
  if (h.rows() != n || h.cols() != n)
    throw ConfigError("split_T_W: operator does not live on the subspace");
  const int nc = static_cast<int>(red.cluster_value.size());
  std::vector<double> sum(nc, 0.0);
  std::vector<int> count(nc, 0);
  for (int i = 0; i < n; ++i) {
    sum[red.cluster[i]] += h(i, i).real();
    count[red.cluster[i]] += 1;
  }
  std::vector<double> y(nc);
  for (int c = 0; c < nc; ++c) y[c] = sum[c] / count[c];

  SplitResult out;
  out.T = TFunction::from_values(red.cluster_value, y);
  out.W = h;
  for (int i = 0; i < n; ++i) out.W(i, i) -= y[red.cluster[i]];
  return out;
}

double e_map(const FlowState& state, const FlowConfig& cfg) {
  const double t0 = state.T.vacuum();
  if (std::abs(t0) > cfg.rho / 2.0)
    throw OutOfPolydiscError(
        "e_map: |T_n(0)| = " + std::to_string(std::abs(t0)) +
        " exceeds rho/2 = " + std::to_string(cfg.rho / 2.0));
  const double sign = cfg.minus_convention ? -1.0 : 1.0;
  return sign * t0 / cfg.rho;
}

namespace {
// label of the next chart; no domain enforcement (root searches may pass
// through transiently inadmissible parameters)
double raw_label(const FlowState& state, const FlowConfig& cfg) {
  const double sign = cfg.minus_convention ? -1.0 : 1.0;
  return sign * state.T.vacuum() / cfg.rho;
}
}  // namespace

FlowState rg_step(const FlowState& state, const FlowContext& ctx,
                  double* cumulative_leak) {
  const FlowConfig& cfg = ctx.cfg;
  const Subspace& red = ctx.red;
  const int n = red.dim();

  RVec t_diag(n);
  for (int i = 0; i < n; ++i) t_diag[i] = state.T.at_cluster(red.cluster[i]);

  FeshbachResult fesh = smooth_feshbach(t_diag, state.W, ctx.cutoff, cfg.rho,
                                        red.energy, cfg.cond_limit);

  // interaction part of F; its elements on dilation-leaked states are the
  // only information the truncated conjugation drops
  Mat wf = fesh.F;
  for (int i = 0; i < n; ++i) wf(i, i) -= t_diag[i];

  std::vector<int> leak_pos;
  for (int i = 0; i < n; ++i)
    if (ctx.dilation.leaked[i]) leak_pos.push_back(i);
  double leak_norm = 0.0;
  if (!leak_pos.empty()) {
    Mat cols(n, static_cast<int>(leak_pos.size()));
    for (std::size_t c = 0; c < leak_pos.size(); ++c)
      cols.col(c) = wf.col(leak_pos[c]);
    leak_norm = op_norm(cols) / cfg.rho;
  }
  if (cumulative_leak) {
    *cumulative_leak += leak_norm;
    if (*cumulative_leak > cfg.leak_budget)
      throw FlowTruncatedError(
          "rg_step: cumulative dilation leak " +
          std::to_string(*cumulative_leak) + " exceeds budget " +
          std::to_string(cfg.leak_budget));
  }

  // H_next = rho^{-1} Gamma F Gamma^{-1}: gather through the shift images,
  // then extend the T-part onto leaked states by exact composition
  Mat hnext = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const int ia = ctx.dilation.target[a];
    if (ia < 0) continue;
    for (int b = 0; b < n; ++b) {
      const int ib = ctx.dilation.target[b];
      if (ib < 0) continue;
      hnext(a, b) = fesh.F(ia, ib) / cfg.rho;
    }
  }
  for (int p : leak_pos)
    hnext(p, p) = state.T.eval(cfg.rho * red.energy[p]) / cfg.rho;
  hnext = ((hnext + Mat(hnext.adjoint())) * 0.5).eval();

  FlowState next;
  next.level = state.level + 1;
  next.H = std::move(hnext);
  SplitResult split = split_T_W(next.H, red);
  next.T = std::move(split.T);
  next.W = std::move(split.W);
  next.z = raw_label(state, cfg);
  next.obs.t0_plus_z = std::abs(next.T.vacuum() + next.z);
  next.obs.slope_dev = next.T.slope_deviation(257);
  next.obs.leak = leak_norm;
  next.obs.hbar_condition = fesh.hbar_condition;
  next.obs.solve_residual = fesh.solve_residual;
  return next;
}

FlowEngine::FlowEngine(const SpinBosonParams& params, const FlowConfig& cfg,
                       double tie_tol, bool allow_boundary_ties)
    : params_(params) {
  if (params.ladder.modes < 2)
    throw ConfigError("FlowEngine: flow ladders need at least two modes");
  if (std::abs(params.g) > params.g_max)
    throw ConfigError("FlowEngine: |g| exceeds model.g_max");
  if (cfg.strict_depth_guard && cfg.n_max > params.ladder.modes - 2)
    throw ConfigError(
        "FlowEngine: n_max exceeds modes - 2 under the strict depth guard "
        "(set flow.depth_guard=budget to trade depth for tracked leakage)");
  if (!(cfg.rho == params.ladder.rho))
    throw ConfigError("FlowEngine: flow rho must match the ladder rho");

  auto basis = std::make_shared<FockBasis>(FockBasis::build(
      params.ladder, params.max_total, params.max_per_mode, params.dim_cap));
  basis_ = basis;
  h3_ = build_spin_boson(params, *basis_);
  ctx_.red = reduced_space(basis_, 0.0, 1.0, tie_tol, allow_boundary_ties);
  ctx_.cutoff = Cutoff{};
  ctx_.dilation = restrict_dilation(make_dilation(*basis_, params.ladder.rho),
                                    ctx_.red);
  ctx_.cfg = cfg;
}

FlowState FlowEngine::initial_state(double z) const {
  InitialReduction ir =
      initial_reduction(h3_, ctx_.red, z, ctx_.cfg.cond_limit);
  FlowState s;
  s.level = 0;
  s.H = ir.h1;
  SplitResult split = split_T_W(s.H, ctx_.red);
  s.T = std::move(split.T);
  s.W = std::move(split.W);
  s.z = z;
  s.obs.t0_plus_z = std::abs(s.T.vacuum() + z);
  s.obs.slope_dev = s.T.slope_deviation(257);
  s.obs.leak = 0.0;
  s.obs.hbar_condition = ir.fesh.hbar_condition;
  s.obs.solve_residual = ir.fesh.solve_residual;
  return s;
}

long long FlowEngine::cache_key(double z0) const {
  const double q = ctx_.cfg.root_tol / 10.0;
  return std::llround(z0 / q);
}

void FlowEngine::extend(Trajectory& t, int depth) const {
  while (static_cast<int>(t.labels.size()) <= depth) {
    const FlowState& last = t.states.back();
    t.labels.push_back(raw_label(last, ctx_.cfg));
    if (static_cast<int>(t.labels.size()) > depth) break;
    t.states.push_back(rg_step(last, ctx_, &t.cumulative_leak));
  }
}

std::shared_ptr<const FlowEngine::Trajectory> FlowEngine::trajectory(
    double z0, int depth) {
  const long long key = cache_key(z0);
  auto it = cache_.find(key);
  std::shared_ptr<Trajectory> t;
  if (it != cache_.end()) {
    t = it->second;
  } else {
    t = std::make_shared<Trajectory>();
    t->states.push_back(initial_state(z0));
    t->labels.push_back(z0);
    cache_[key] = t;
    ++evals_;
  }
  // states 0..depth-1, labels 0..depth
  while (static_cast<int>(t->states.size()) < depth) {
    t->states.push_back(rg_step(t->states.back(), ctx_, &t->cumulative_leak));
    ++evals_;
  }
  while (static_cast<int>(t->labels.size()) <= depth) {
    const int k = static_cast<int>(t->labels.size());
    t->labels.push_back(raw_label(t->states[k - 1], ctx_.cfg));
  }
  return t;
}

double FlowEngine::label(double z0, int n) {
  if (n == 0) return z0;
  return trajectory(z0, n)->labels[n];
}

double FlowEngine::solve_label_root(int depth, double center, double halfwidth,
                                    double target, RootStats* stats) {
  const FlowConfig& cfg = ctx_.cfg;
  auto f = [&](double z) {
    if (stats) ++stats->evaluations;
    return label(z, depth) - target;
  };

  // bracket around the center, widening geometrically within the z-interval
  double lo = center - halfwidth, hi = center + halfwidth;
  double flo = 0, fhi = 0;
  bool ok = false;
  for (int attempt = 0; attempt < 48 && !ok; ++attempt) {
    lo = std::max(lo, cfg.z_min);
    hi = std::min(hi, cfg.z_max);
    try {
      flo = f(lo);
      fhi = f(hi);
      if (flo == 0.0) return lo;
      if (fhi == 0.0) return hi;
      if ((flo < 0) != (fhi < 0)) {
        ok = true;
        break;
      }
    } catch (const Error&) {
      // inadmissible sample; shrink toward the center before widening again
      const double mid = 0.5 * (lo + hi);
      const double h = 0.35 * (hi - lo);
      lo = mid - h;
      hi = mid + h;
      continue;
    }
    const double h = hi - lo;
    lo -= h;
    hi += h;
    if (lo <= cfg.z_min && hi >= cfg.z_max) break;
  }
  if (!ok) {
    // last resort: scan the whole interval
    const int K = 65;
    double prev_x = cfg.z_min;
    bool have_prev = false;
    double prev_f = 0;
    for (int i = 0; i < K; ++i) {
      const double x =
          cfg.z_min + (cfg.z_max - cfg.z_min) * i / static_cast<double>(K - 1);
      double fx;
      try {
        fx = f(x);
      } catch (const Error&) {
        have_prev = false;
        continue;
      }
      if (fx == 0.0) return x;
      if (have_prev && (prev_f < 0) != (fx < 0)) {
        lo = prev_x;
        hi = x;
        flo = prev_f;
        fhi = fx;
        ok = true;
        break;
      }
      prev_x = x;
      prev_f = fx;
      have_prev = true;
    }
  }
  if (!ok)
    throw BracketError("flow: no sign change found for the chart-" +
                       std::to_string(depth) + " label");

  // monotonicity spot check across the bracket
  if (stats) {
    double last = flo;
    bool mono = true;
    for (int i = 1; i <= 3; ++i) {
      const double x = lo + (hi - lo) * i / 4.0;
      try {
        const double fx = f(x);
        if (fx < last) mono = false;
        last = fx;
      } catch (const Error&) {
      }
    }
    if (fhi < last) mono = false;
    stats->monotone = mono && flo < fhi;
  }

  // Illinois iteration on the bracket
  const double xtol = cfg.root_tol * 1e-2;
  double a = lo, b = hi, fa = flo, fb = fhi;
  double side = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const double c = (a * fb - b * fa) / (fb - fa);
    double fc;
    try {
      fc = f(c);
    } catch (const Error&) {
      // fall back to bisection into the interior
      const double m = 0.5 * (a + b);
      fc = f(m);
      if ((fc < 0) == (fa < 0)) {
        a = m;
        fa = fc;
      } else {
        b = m;
        fb = fc;
      }
      continue;
    }
    if (fc == 0.0) return c;
    if ((fc < 0) == (fa < 0)) {
      a = c;
      fa = fc;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = c;
      fb = fc;
      if (side == +1) fa *= 0.5;
      side = +1;
    }
    if (std::abs(b - a) < xtol) break;
  }
  return 0.5 * (a + b);
}

double FlowEngine::j_inverse(int level, double zeta, RootStats* stats) {
  RootStats local;
  RootStats* st = stats ? stats : &local;
  // coarse monotonicity screen of the sampled map over the interval
  {
    const int K = 9;
    double last = 0;
    bool have = false;
    bool increasing = true, decreasing = true;
    for (int i = 0; i < K; ++i) {
      const double x = ctx_.cfg.z_min +
                       (ctx_.cfg.z_max - ctx_.cfg.z_min) * i / double(K - 1);
      try {
        const double v = label(x, level + 1);
        if (have) {
          if (v < last) increasing = false;
          if (v > last) decreasing = false;
        }
        last = v;
        have = true;
      } catch (const Error&) {
        have = false;
      }
    }
    if (!increasing && !decreasing)
      throw BracketError(
          "j_inverse: sampled chart map is not monotone on the interval");
  }
  const double z0 = solve_label_root(level + 1, 0.0,
                                     0.5 * (ctx_.cfg.z_max - ctx_.cfg.z_min),
                                     zeta, st);
  return label(z0, level);
}

ELimitResult FlowEngine::e_limit() {
  const FlowConfig& cfg = ctx_.cfg;
  ELimitResult out;
  double center = 0.0;
  double halfwidth = 0.5 * (cfg.z_max - cfg.z_min);
  RootStats stats;
  for (int depth = 1; depth <= cfg.n_max; ++depth) {
    double root;
    try {
      root = solve_label_root(depth, center, halfwidth, 0.0, &stats);
    } catch (const FlowTruncatedError&) {
      throw;
    }
    out.roots.push_back(root);
    auto traj = trajectory(root, depth);
    std::vector<double> row(traj->labels.begin(), traj->labels.end());
    out.e_table.push_back(std::move(row));
    if (out.roots.size() >= 2) {
      const double inc =
          std::abs(out.roots.back() - out.roots[out.roots.size() - 2]);
      out.cauchy.push_back(inc);
      if (inc < cfg.root_tol) {
        out.converged = true;
      }
    }
    center = root;
    halfwidth = out.cauchy.empty()
                    ? 1e-2 * (cfg.z_max - cfg.z_min)
                    : std::max(64.0 * out.cauchy.back(), 1e3 * cfg.root_tol);
    if (out.converged) break;
  }
  out.total_evaluations = stats.evaluations;
  if (!out.roots.empty()) {
    auto final_traj = trajectory(out.roots.back(), cfg.n_max);
    out.z_tower.assign(final_traj->labels.begin(), final_traj->labels.end());
    out.cumulative_leak = final_traj->cumulative_leak;
  }
  return out;
}

void FlowEngine::finalize(Trajectory& t) const {
  for (FlowState& s : t.states) {
    if (s.obs.w_norm < 0.0) s.obs.w_norm = op_norm_hermitian(s.W);
    s.obs.slope_dev = s.T.slope_deviation(4001);
  }
}

}  // namespace fockrg
