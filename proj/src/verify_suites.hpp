#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "fock.hpp"
#include "kernels.hpp"

namespace fockrg {

struct SuiteResult {
  std::string name;
  int total = 0;
  int failed = 0;
  double worst_margin = 0.0;  // most negative = worst; >= 0 means clean
  nlohmann::ordered_json details;
  bool ok() const { return failed == 0; }
};

/// Randomized Feshbach isospectrality: dim ker H == dim ker F and a
/// positive chi_rho injectivity margin on every nontrivial kernel.
SuiteResult suite_feshbach(std::uint64_t seed, int instances, int max_dim);

/// Scalar telescoping bound over {0} + a log grid for n = 0..n_max.
SuiteResult suite_telescoping(const std::vector<double>& rhos, int n_max,
                              std::size_t grid_points);

/// Randomized graded families: dense operator norm <= family norm +
/// sup|w00| with multiplicative slack 1 + 1e-12.
SuiteResult suite_norms(std::uint64_t seed, int families, double mu, double xi);

/// Exact dilation identities on the default ladder.
SuiteResult suite_dilation(const FrequencyLadder& ladder, int max_total,
                           int max_per_mode);

/// Seeded random kernel family over the shells of `ladder` (degrees up to
/// m+n = 2), symmetric by construction. Shared by tests and the suites.
KernelFamily random_family(std::uint64_t seed, const FrequencyLadder& ladder,
                           double mu, double xi, int r_nodes = 17);

}  // namespace fockrg
