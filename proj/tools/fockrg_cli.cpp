// Command-line front end; links the C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fockrg/fockrg.h"

namespace {

int make_ctx(const std::string& config_path,
             const std::vector<std::string>& sets, fockrg_ctx** out) {
  int rc;
  if (config_path.empty()) {
    rc = fockrg_ctx_new(out);
  } else {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config file " << config_path << "\n";
      return FOCKRG_USAGE;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    rc = fockrg_ctx_new_from_json(ss.str().c_str(), out);
    if (rc != FOCKRG_OK) {
      std::cerr << "error: invalid config: "
                << (*out ? fockrg_ctx_last_error(*out) : "parse failure")
                << "\n";
      return rc;
    }
  }
  if (rc != FOCKRG_OK) return rc;
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      return FOCKRG_USAGE;
    }
    rc = fockrg_ctx_set(*out, kv.substr(0, eq).c_str(),
                        kv.substr(eq + 1).c_str());
    if (rc != FOCKRG_OK) {
      std::cerr << "error: " << fockrg_ctx_last_error(*out) << "\n";
      return rc;
    }
  }
  return FOCKRG_OK;
}

int report(fockrg_ctx* ctx, int rc) {
  const char* rep = fockrg_ctx_last_report(ctx);
  if (rep && *rep) std::cout << rep << "\n";
  if (rc != FOCKRG_OK) {
    const char* err = fockrg_ctx_last_error(ctx);
    if (err && *err) std::cerr << "error: " << err << "\n";
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(fockrg_version()) +
               " — operator renormalization on truncated Fock spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out";
  std::vector<std::string> sets;
  app.add_option("-c,--config", config_path, "JSON config file");
  app.add_option("-o,--out", out_dir, "output directory");
  app.add_option("--set", sets, "override config field, section.key=value");

  auto* flow = app.add_subcommand("flow", "run the renormalization flow");
  std::string which = "all";
  auto* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("--which", which,
                     "feshbach|telescoping|norms|dilation|all");
  std::string axis = "g", values;
  auto* sweep = app.add_subcommand("sweep", "sweep one model axis");
  sweep->add_option("--axis", axis, "g|rho|J|max_total");
  sweep->add_option("--values", values, "comma-separated values")->required();
  auto* oracle =
      app.add_subcommand("oracle", "dense-diagonalization reference");

  CLI11_PARSE(app, argc, argv);

  const char* env_dir = std::getenv("FOCKRG_OUT_DIR");
  if (env_dir && *env_dir && out_dir == "out") out_dir = env_dir;

  fockrg_ctx* ctx = nullptr;
  int rc = make_ctx(config_path, sets, &ctx);
  if (rc != FOCKRG_OK) {
    fockrg_ctx_free(ctx);
    return rc;
  }

  if (flow->parsed()) rc = fockrg_run_flow(ctx, out_dir.c_str());
  else if (verify->parsed())
    rc = fockrg_run_verify(ctx, which.c_str(), out_dir.c_str());
  else if (sweep->parsed())
    rc = fockrg_run_sweep(ctx, axis.c_str(), values.c_str(), out_dir.c_str());
  else if (oracle->parsed())
    rc = fockrg_run_oracle(ctx, out_dir.c_str());

  rc = report(ctx, rc);
  fockrg_ctx_free(ctx);
  return rc;
}
