#include "uniqueness.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace fockrg {

TelescopingReport telescoping_check(const Cutoff& pair, double rho, double a,
                                    int n, int n_terms,
                                    std::size_t grid_points, double x_lo,
                                    double x_hi) {
  if (!(rho > 0.0 && rho < a && a <= 1.0))
    throw ConfigError("telescoping_check: need 0 < rho < a <= 1");
  TelescopingReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();

  auto eval_margin = [&](double x) {
    double lhs = (x == 0.0) ? 1.0 : 0.0;
    for (int j = n; j < n + n_terms; ++j) {
      const double scale_j = std::pow(rho, j);
      if (x >= scale_j) break;  // chi vanishes from here on
      if (x >= a * scale_j * rho) {
        const double c = pair.chi(x / scale_j);
        lhs += c * c;
      }
    }
    const double c_n = pair.chi(x / std::pow(rho, n));
    const double margin = lhs - c_n * c_n;
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.worst_x = x;
    }
    if (margin < 0.0) ++rep.violations;
    ++rep.points;
  };

  eval_margin(0.0);
  const double llo = std::log(x_lo), lhi = std::log(x_hi);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double t = grid_points == 1
                         ? 0.0
                         : static_cast<double>(i) / (grid_points - 1);
    eval_margin(std::exp(llo + (lhi - llo) * t));
  }
  return rep;
}

HypothesisReport hypothesis_a(const std::vector<FlowState>& states) {
  HypothesisReport rep;
  double max_eps = 0.0;
  for (const FlowState& s : states) {
    const double eps = s.T.slope_deviation(4001);
    const double beta = std::abs(s.T.vacuum() + s.z);
    rep.eps.push_back(eps);
    rep.beta.push_back(beta);
    max_eps = std::max(max_eps, eps);
  }
  rep.delta0 = 1.0 - max_eps;
  rep.inconclusive = !(rep.delta0 > 0.0);

  for (const FlowState& s : states) {
    const std::size_t i = rep.a_T.size();
    const double eps = rep.eps[i], beta = rep.beta[i];
    double worst = std::numeric_limits<double>::infinity();
    double needed = 0.0;
    for (std::size_t c = 0; c < s.T.x.size(); ++c) {
      const double E = s.T.x[c];
      const double lhs = std::abs(s.T.y[c]);
      const double rhs = (1.0 - eps) * E - 2.0 * beta;
      worst = std::min(worst, lhs - rhs);
      needed = std::max(needed, (1.0 - eps) * E - lhs);
    }
    const bool ok = worst >= -1e-14;
    rep.scalar_ok.push_back(ok);
    rep.scalar_margin.push_back(worst);
    rep.a_T.push_back(ok ? 2.0 * beta : std::max(2.0 * beta, needed));
  }
  return rep;
}

std::vector<double> a_sequence(const std::vector<FlowState>& states,
                               const HypothesisReport& hyp) {
  std::vector<double> a;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double wn = states[i].obs.w_norm >= 0.0
                          ? states[i].obs.w_norm
                          : op_norm_hermitian(states[i].W);
    a.push_back(std::max(wn, hyp.a_T[i]));
  }
  return a;
}

UniquenessCertificate build_certificate(double delta0,
                                        const std::vector<double>& a_seq,
                                        double rho, double a,
                                        double ratio_limit) {
  UniquenessCertificate cert;
  cert.delta0 = delta0;
  cert.a_seq = a_seq;
  cert.threshold = (a * rho) * (a * rho);
  cert.verdict = "INCONCLUSIVE";
  if (!(delta0 > 0.0) || a_seq.empty()) return cert;

  const int M = static_cast<int>(a_seq.size());

  // geometric tail from the last (up to) four measured terms
  int fit_n = std::min(4, M);
  std::vector<double> tail_terms(a_seq.end() - fit_n, a_seq.end());
  bool all_tiny = true;
  for (double v : tail_terms) all_tiny &= std::abs(v) < 1e-14;
  double ratio = 0.0;
  if (!all_tiny) {
    // least-squares slope of log|a| over the window
    std::vector<double> logs;
    for (double v : tail_terms) {
      if (std::abs(v) < 1e-300) {
        logs.clear();
        break;
      }
      logs.push_back(std::log(std::abs(v)));
    }
    if (logs.size() >= 2) {
      const int k = static_cast<int>(logs.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = 0; i < k; ++i) {
        sx += i;
        sy += logs[i];
        sxx += static_cast<double>(i) * i;
        sxy += i * logs[i];
      }
      const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
      ratio = std::exp(slope);
    } else {
      ratio = 1.0;  // zeros mixed with non-zeros: no reliable fit
    }
    if (!(ratio < ratio_limit)) {
      cert.fit_ratio = ratio;
      return cert;  // tail fit unreliable
    }
  }
  cert.fit_ratio = ratio;
  const double aM = a_seq.back();
  const double q2 = ratio * ratio;
  cert.tail_sum = all_tiny ? 0.0 : aM * aM * q2 / (1.0 - q2);

  // d_n = (2/delta0)^2 sum_{j>=n} a_{j+1}^2, levels counted from 1
  const double pref = (2.0 / delta0) * (2.0 / delta0);
  std::vector<double> suffix(M + 1, 0.0);
  for (int j = M - 1; j >= 0; --j)
    suffix[j] = suffix[j + 1] + a_seq[j] * a_seq[j];
  for (int n = 1; n <= M - 1; ++n) {
    // sum over a_{j+1} for j >= n: measured a_{n+1}..a_M plus the tail
    const double sum = suffix[n] + cert.tail_sum;
    cert.d_seq.push_back(pref * sum);
  }
  for (std::size_t i = 0; i < cert.d_seq.size(); ++i) {
    if (cert.d_seq[i] < cert.threshold) {
      cert.n_star = static_cast<int>(i) + 1;
      cert.verdict = "CERTIFIED";
      break;
    }
  }
  return cert;
}

ProbeResult degeneracy_probe(const Mat& h, double rel_tol) {
  if (!is_hermitian(h, 1e-10))
    throw ConfigError("degeneracy_probe: operator must be Hermitian");
  ProbeResult out;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> sig(es.eigenvalues().size());
  for (std::size_t i = 0; i < sig.size(); ++i)
    sig[i] = std::abs(es.eigenvalues()[static_cast<Eigen::Index>(i)]);
  std::sort(sig.begin(), sig.end());
  out.h_norm = sig.empty() ? 0.0 : sig.back();
  const double thr = rel_tol * out.h_norm;
  for (double s : sig) {
    if (s < thr)
      ++out.kernel_dim;
    else
      break;
  }
  out.gap = (out.kernel_dim < static_cast<int>(sig.size()))
                ? sig[out.kernel_dim]
                : 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(6, sig.size()); ++i)
    out.smallest.push_back(sig[i]);
  return out;
}

}  // namespace fockrg
