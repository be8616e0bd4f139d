#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

#include "errors.hpp"
#include "flow.hpp"
#include "models.hpp"
#include "uniqueness.hpp"
#include "verify_suites.hpp"

namespace fockrg {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

SpinBosonParams params_from(const RunConfig& cfg) {
  SpinBosonParams p;
  p.g = cfg.model.g;
  p.ladder = FrequencyLadder(cfg.model.rho, cfg.model.modes, cfg.model.omega0);
  p.max_total = cfg.model.max_total;
  p.max_per_mode = cfg.model.max_per_mode;
  p.g_max = cfg.model.g_max;
  p.dim_cap = cfg.model.dim_cap;
  return p;
}

FlowConfig flow_from(const RunConfig& cfg) {
  FlowConfig f;
  f.rho = cfg.model.rho;
  f.n_max = cfg.flow.n_max;
  f.root_tol = cfg.flow.root_tol;
  f.z_min = cfg.flow.z_min;
  f.z_max = cfg.flow.z_max;
  f.leak_budget = cfg.flow.leak_budget;
  f.minus_convention = cfg.flow.sign_convention == "minus";
  f.strict_depth_guard = cfg.flow.depth_guard == "strict";
  f.cond_limit = cfg.flow.cond_limit;
  return f;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text,
                std::vector<std::string>& files) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  files.push_back(path.string());
}

void write_json(const fs::path& path, const ordered_json& j,
                std::vector<std::string>& files) {
  write_text(path, j.dump(2) + "\n", files);
}

int status_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kStatusUsage;
  return kStatusNumeric;
}

ordered_json error_json(const RunConfig& cfg, const std::string& kind,
                        const std::string& message) {
  return ordered_json{{"version", kVersion},
                      {"config_hash", config_hash(cfg)},
                      {"error", {{"kind", kind}, {"message", message}}}};
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const NotInvertibleError*>(&e)) return "NotInvertible";
  if (dynamic_cast<const FlowTruncatedError*>(&e)) return "FlowTruncated";
  if (dynamic_cast<const OutOfPolydiscError*>(&e)) return "OutOfPolydisc";
  if (dynamic_cast<const BoundaryTieError*>(&e)) return "BoundaryTie";
  if (dynamic_cast<const BracketError*>(&e)) return "Bracket";
  if (dynamic_cast<const ConfigError*>(&e)) return "Config";
  return "Internal";
}

struct FlowArtifacts {
  ordered_json summary;
  ordered_json certificate;
  std::string flow_csv;
  std::string verdict;
  double z0 = 0.0;
  double oracle_e0 = 0.0;
  double delta0 = 0.0;
  double fit_ratio = 0.0;
  int n_star = -1;
};

FlowArtifacts flow_pipeline(const RunConfig& cfg) {
  const SpinBosonParams params = params_from(cfg);
  const FlowConfig fcfg = flow_from(cfg);
  FlowEngine engine(params, fcfg, cfg.verify.tie_tol,
                    cfg.model.allow_boundary_ties);

  ELimitResult lim = engine.e_limit();
  if (!lim.converged)
    throw FlowTruncatedError(
        "flow: spectral-parameter tower did not converge within n_max = " +
        std::to_string(fcfg.n_max) + " levels");

  FlowEngine::Trajectory traj =
      *engine.trajectory(lim.roots.back(), fcfg.n_max);
  engine.finalize(traj);

  HypothesisReport hyp = hypothesis_a(traj.states);
  const std::vector<double> a_seq = a_sequence(traj.states, hyp);
  UniquenessCertificate cert =
      build_certificate(hyp.delta0, a_seq, fcfg.rho);
  cert.provenance = config_hash(cfg);

  const double z0 = lim.z_tower.front();

  // oracle on the same truncated space
  OracleResult oracle = exact_diag_oracle(
      engine.model_matrix(), cfg.verify.oracle_k, cfg.verify.dense_cap);

  // kernel probes at the located energy
  FlowState h1 = engine.initial_state(z0);
  ProbeResult probe_flow = degeneracy_probe(h1.H, cfg.verify.probe_rel_tol);
  Mat h_shift = engine.model_matrix();
  for (int i = 0; i < h_shift.rows(); ++i)
    h_shift(i, i) -= oracle.ground_energy;
  ProbeResult probe_model = degeneracy_probe(h_shift, 1e-10);

  // vacuum multiplicity of T_0 on the reduced space (the m of the bound)
  int m_t0 = 0;
  for (double e : engine.red().energy)
    if (e == 0.0) ++m_t0;

  // polydisc membership of the leading-order initial family (reported)
  std::vector<std::pair<double, KernelFamily>> samples;
  for (double zs : {z0, -0.25, 0.0, 0.25})
    samples.emplace_back(
        zs, initial_kernel_family(params, zs, cfg.verify.mu, cfg.verify.xi));
  PolydiscReport poly =
      polydisc_check(samples, fcfg.rho / 8.0, fcfg.rho / 8.0);

  FlowArtifacts art;
  art.z0 = z0;
  art.oracle_e0 = oracle.ground_energy;
  art.delta0 = hyp.delta0;
  art.fit_ratio = cert.fit_ratio;
  art.n_star = cert.n_star;
  art.verdict = cert.verdict;

  // flow.csv
  std::string csv;
  csv += "# version=" + std::string(kVersion) +
         " config_hash=" + config_hash(cfg) + "\n";
  csv += "n,W_norm,T0_plus_z,slope_dev,leak,cond\n";
  for (const FlowState& s : traj.states) {
    csv += std::to_string(s.level) + "," + fmt_double(s.obs.w_norm) + "," +
           fmt_double(s.obs.t0_plus_z) + "," + fmt_double(s.obs.slope_dev) +
           "," + fmt_double(s.obs.leak) + "," +
           fmt_double(s.obs.hbar_condition) + "\n";
  }
  art.flow_csv = csv;

  ordered_json per_level = ordered_json::array();
  for (const FlowState& s : traj.states)
    per_level.push_back(ordered_json{{"n", s.level},
                                     {"z", s.z},
                                     {"W_norm", s.obs.w_norm},
                                     {"T0_plus_z", s.obs.t0_plus_z},
                                     {"slope_dev", s.obs.slope_dev},
                                     {"leak", s.obs.leak},
                                     {"cond", s.obs.hbar_condition},
                                     {"solve_residual", s.obs.solve_residual}});

  ordered_json summary;
  summary["version"] = kVersion;
  summary["config_hash"] = config_hash(cfg);
  summary["config"] = config_to_json(cfg);
  summary["sign_convention"] = cfg.flow.sign_convention;
  summary["converged"] = lim.converged;
  summary["z_tower"] = lim.z_tower;
  summary["roots"] = lim.roots;
  summary["cauchy_trace"] = lim.cauchy;
  summary["e_table"] = lim.e_table;
  summary["total_evaluations"] = lim.total_evaluations;
  summary["cumulative_leak"] = lim.cumulative_leak;
  summary["levels"] = per_level;
  summary["oracle"] = ordered_json{
      {"ground_energy", oracle.ground_energy},
      {"lowest", oracle.lowest},
      {"ground_multiplicity", oracle.ground_multiplicity},
      {"gap", oracle.gap}};
  summary["z0_minus_oracle"] = z0 - oracle.ground_energy;
  summary["probe_h1"] = ordered_json{{"kernel_dim", probe_flow.kernel_dim},
                                     {"gap", probe_flow.gap},
                                     {"rel_tol", cfg.verify.probe_rel_tol},
                                     {"smallest", probe_flow.smallest}};
  summary["probe_model"] =
      ordered_json{{"kernel_dim", probe_model.kernel_dim},
                   {"gap", probe_model.gap},
                   {"smallest", probe_model.smallest}};
  summary["t0_kernel_multiplicity"] = m_t0;
  summary["hypothesis"] = ordered_json{{"delta0", hyp.delta0},
                                       {"eps", hyp.eps},
                                       {"beta", hyp.beta},
                                       {"a_T", hyp.a_T},
                                       {"scalar_ok", hyp.scalar_ok},
                                       {"scalar_margin", hyp.scalar_margin}};
  summary["a_seq"] = a_seq;
  summary["polydisc_initial"] =
      ordered_json{{"eps", poly.eps},
                   {"delta", poly.delta},
                   {"slope_dev", poly.slope_dev},
                   {"vacuum_dev", poly.vacuum_dev},
                   {"wnorm_sup", poly.wnorm_sup},
                   {"inside", poly.inside}};
  summary["boundary_ties"] =
      ordered_json{{"exact_hits", engine.red().report.exact_hits.size()},
                   {"inexact_ties", engine.red().report.inexact_ties.size()}};
  summary["verdict"] = cert.verdict;
  art.summary = std::move(summary);

  ordered_json cj;
  cj["version"] = kVersion;
  cj["provenance"] = cert.provenance;
  cj["delta0"] = cert.delta0;
  cj["a_seq"] = cert.a_seq;
  cj["d_seq"] = cert.d_seq;
  cj["threshold"] = cert.threshold;
  cj["n_star"] = cert.n_star;
  cj["verdict"] = cert.verdict;
  cj["fit_ratio"] = cert.fit_ratio;
  cj["tail_sum"] = cert.tail_sum;
  cj["kernel_bound"] =
      "dim ker H_1 <= " + std::to_string(m_t0) +
      " (measured constants on the truncated space; conditional, not a "
      "continuum proof)";
  art.certificate = std::move(cj);
  return art;
}

}  // namespace

RunResult run_flow(const RunConfig& cfg, const std::string& out_dir) {
  RunResult res;
  try {
    validate(cfg);
    FlowArtifacts art = flow_pipeline(cfg);
    const fs::path dir(out_dir);
    write_text(dir / "flow.csv", art.flow_csv, res.files_written);
    write_json(dir / "summary.json", art.summary, res.files_written);
    write_json(dir / "certificate.json", art.certificate, res.files_written);
    res.report = art.summary;
    res.status = kStatusOk;
  } catch (const std::exception& e) {
    res.status = status_for(e);
    res.report = error_json(cfg, error_kind(e), e.what());
    try {
      std::vector<std::string> files;
      write_json(fs::path(out_dir) / "error.json", res.report, files);
    } catch (...) {
    }
  }
  return res;
}

RunResult run_verify(const RunConfig& cfg, const std::string& which,
                     const std::string& out_dir) {
  RunResult res;
  try {
    validate(cfg);
    std::vector<SuiteResult> suites;
    const bool all = which == "all";
    if (all || which == "feshbach")
      suites.push_back(suite_feshbach(cfg.seed, cfg.verify.feshbach_instances,
                                      cfg.verify.feshbach_max_dim));
    if (all || which == "telescoping")
      suites.push_back(suite_telescoping(cfg.verify.telescoping_rhos,
                                         cfg.verify.telescoping_n_max,
                                         cfg.verify.grid_points));
    if (all || which == "norms")
      suites.push_back(suite_norms(cfg.seed, cfg.verify.norm_families,
                                   cfg.verify.mu, cfg.verify.xi));
    if (all || which == "dilation")
      suites.push_back(suite_dilation(
          FrequencyLadder(cfg.model.rho, cfg.model.modes, cfg.model.omega0),
          cfg.model.max_total, cfg.model.max_per_mode));
    if (suites.empty())
      throw ConfigError("verify: unknown suite '" + which +
                        "' (expected feshbach|telescoping|norms|dilation|all)");

    ordered_json report;
    report["version"] = kVersion;
    report["config_hash"] = config_hash(cfg);
    report["which"] = which;
    report["seed"] = cfg.seed;
    bool ok = true;
    for (const SuiteResult& s : suites) {
      report["suites"][s.name] = ordered_json{{"total", s.total},
                                              {"failed", s.failed},
                                              {"worst_margin", s.worst_margin},
                                              {"details", s.details}};
      ok = ok && s.ok();
    }
    report["ok"] = ok;
    write_json(fs::path(out_dir) / "verify.json", report, res.files_written);
    res.report = report;
    res.status = ok ? kStatusOk : kStatusPropertyFailure;
  } catch (const std::exception& e) {
    res.status = status_for(e);
    res.report = error_json(cfg, error_kind(e), e.what());
  }
  return res;
}

RunResult run_sweep(const RunConfig& cfg, const std::string& axis,
                    const std::vector<double>& values,
                    const std::string& out_dir) {
  RunResult res;
  try {
    validate(cfg);
    if (axis != "g" && axis != "rho" && axis != "J" && axis != "max_total")
      throw ConfigError("sweep: axis must be one of g|rho|J|max_total");
    if (values.empty()) throw ConfigError("sweep: no values given");

    struct Row {
      double value = 0.0;
      int status = kStatusOk;
      std::string error;
      double z0 = 0.0, oracle_e0 = 0.0, delta0 = 0.0, fit_ratio = 0.0;
      int n_star = -1;
      std::string verdict;
    };
    std::vector<Row> rows(values.size());

    auto one = [&](std::size_t i) {
      Row& row = rows[i];
      row.value = values[i];
      RunConfig c = cfg;
      if (axis == "g")
        c.model.g = values[i];
      else if (axis == "rho")
        c.model.rho = values[i];
      else if (axis == "J")
        c.model.modes = static_cast<int>(values[i]);
      else
        c.model.max_total = static_cast<int>(values[i]);
      try {
        validate(c);
        FlowArtifacts art = flow_pipeline(c);
        row.z0 = art.z0;
        row.oracle_e0 = art.oracle_e0;
        row.delta0 = art.delta0;
        row.fit_ratio = art.fit_ratio;
        row.n_star = art.n_star;
        row.verdict = art.verdict;
      } catch (const std::exception& e) {
        row.status = status_for(e);
        row.error = std::string(error_kind(e)) + ": " + e.what();
      }
    };

    // worker pool; rows keep the input order
    const std::size_t workers =
        std::min<std::size_t>(values.size(),
                              std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w)
      futs.push_back(std::async(std::launch::async, [&]() {
        for (std::size_t i = next.fetch_add(1); i < values.size();
             i = next.fetch_add(1))
          one(i);
      }));
    for (auto& f : futs) f.get();

    std::string csv;
    csv += "# version=" + std::string(kVersion) +
           " config_hash=" + config_hash(cfg) + " axis=" + axis + "\n";
    csv += "axis_value,status,z0,oracle_e0,delta0,fit_ratio,n_star,verdict,"
           "error\n";
    ordered_json jrows = ordered_json::array();
    for (const Row& r : rows) {
      csv += fmt_double(r.value) + "," + std::to_string(r.status) + "," +
             fmt_double(r.z0) + "," + fmt_double(r.oracle_e0) + "," +
             fmt_double(r.delta0) + "," + fmt_double(r.fit_ratio) + "," +
             std::to_string(r.n_star) + "," + r.verdict + "," + r.error + "\n";
      jrows.push_back(ordered_json{{"value", r.value},
                                   {"status", r.status},
                                   {"z0", r.z0},
                                   {"oracle_e0", r.oracle_e0},
                                   {"delta0", r.delta0},
                                   {"fit_ratio", r.fit_ratio},
                                   {"n_star", r.n_star},
                                   {"verdict", r.verdict},
                                   {"error", r.error}});
    }
    ordered_json report;
    report["version"] = kVersion;
    report["config_hash"] = config_hash(cfg);
    report["axis"] = axis;
    report["rows"] = jrows;
    write_text(fs::path(out_dir) / "sweep.csv", csv, res.files_written);
    write_json(fs::path(out_dir) / "sweep.json", report, res.files_written);
    res.report = report;
    res.status = kStatusOk;
    for (const Row& r : rows)
      if (r.status != kStatusOk) res.status = kStatusNumeric;
  } catch (const std::exception& e) {
    res.status = status_for(e);
    res.report = error_json(cfg, error_kind(e), e.what());
  }
  return res;
}

RunResult run_oracle(const RunConfig& cfg, const std::string& out_dir) {
  RunResult res;
  try {
    validate(cfg);
    SpinBosonParams p = params_from(cfg);
    p.g_max = std::numeric_limits<double>::infinity();  // oracle accepts any g
    const FockBasis basis = FockBasis::build(p.ladder, p.max_total,
                                             p.max_per_mode, p.dim_cap);
    const Mat h = build_spin_boson(p, basis);
    OracleResult oracle =
        exact_diag_oracle(h, cfg.verify.oracle_k, cfg.verify.dense_cap);
    ordered_json report;
    report["version"] = kVersion;
    report["config_hash"] = config_hash(cfg);
    report["dim"] = h.rows();
    report["ground_energy"] = oracle.ground_energy;
    report["lowest"] = oracle.lowest;
    report["ground_multiplicity"] = oracle.ground_multiplicity;
    report["gap"] = oracle.gap;
    write_json(fs::path(out_dir) / "oracle.json", report, res.files_written);
    res.report = report;
    res.status = kStatusOk;
  } catch (const std::exception& e) {
    res.status = status_for(e);
    res.report = error_json(cfg, error_kind(e), e.what());
  }
  return res;
}

}  // namespace fockrg
