#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace fockrg {

// status codes shared with the C surface and the CLI exit codes
inline constexpr int kStatusOk = 0;
inline constexpr int kStatusPropertyFailure = 1;
inline constexpr int kStatusUsage = 2;
inline constexpr int kStatusNumeric = 3;

struct RunResult {
  int status = kStatusOk;
  nlohmann::ordered_json report;  // summary of the run, or machine-readable error
  std::vector<std::string> files_written;
};

/// flow run: initial reduction -> spectral-parameter tower -> observables,
/// certificate, oracle comparison. Writes flow.csv, summary.json,
/// certificate.json under out_dir.
RunResult run_flow(const RunConfig& cfg, const std::string& out_dir);

/// named property suites (feshbach | telescoping | norms | dilation | all);
/// writes verify.json.
RunResult run_verify(const RunConfig& cfg, const std::string& which,
                     const std::string& out_dir);

/// concurrent parameter sweep over axis in {g, rho, J, max_total};
/// writes sweep.csv and sweep.json.
RunResult run_sweep(const RunConfig& cfg, const std::string& axis,
                    const std::vector<double>& values,
                    const std::string& out_dir);

/// dense-diagonalization oracle; writes oracle.json.
RunResult run_oracle(const RunConfig& cfg, const std::string& out_dir);

}  // namespace fockrg
