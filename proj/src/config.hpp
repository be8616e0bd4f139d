#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fockrg {

inline constexpr const char* kVersion = "fockrg 0.1.0";

struct ModelSection {
  double g = 0.05;
  double rho = 0.5;
  double omega0 = 1.0;
  int modes = 10;
  int max_total = 3;
  int max_per_mode = 2;
  std::string f_profile = "unit_ball";  // only built-in profile
  double g_max = 0.2;
  bool allow_boundary_ties = false;
  std::uint64_t dim_cap = 20000;
};

struct FlowSection {
  int n_max = 8;
  double root_tol = 1e-9;
  double z_min = -0.5;
  double z_max = 0.5;
  double leak_budget = 1e-3;
  std::string sign_convention = "minus";  // minus | plus
  std::string depth_guard = "strict";     // strict | budget
  double cond_limit = 1e12;
};

struct VerifySection {
  std::uint64_t grid_points = 100000;
  int telescoping_n_max = 6;
  std::vector<double> telescoping_rhos = {0.4, 0.5};
  int feshbach_instances = 50;
  int feshbach_max_dim = 64;
  int norm_families = 100;
  double mu = 0.5;
  double xi = 0.5;
  double probe_rel_tol = 1e-7;
  double tie_tol = 1e-12;
  int oracle_k = 8;
  std::uint64_t dense_cap = 4096;
};

struct OutputSection {
  std::string dir = "out";
  std::vector<std::string> formats = {"csv", "json"};
};

struct RunConfig {
  ModelSection model;
  FlowSection flow;
  VerifySection verify;
  OutputSection output;
  std::uint64_t seed = 20260810;
};

nlohmann::ordered_json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j, bool run_validate = true);
RunConfig config_from_string(const std::string& text);

/// Apply a --set override "section.key=value"; value parsed as JSON when
/// possible, else taken as a string.
void config_set(RunConfig& c, const std::string& dotted_key,
                const std::string& value);

void validate(const RunConfig& c);

/// FNV-1a over the canonical serialization; embedded in every output file.
std::string config_hash(const RunConfig& c);

}  // namespace fockrg
