#include "fockrg/fockrg.h"

#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "runner.hpp"

struct fockrg_ctx {
  fockrg::RunConfig config;
  std::string last_error;
  std::string last_report;
  std::string scratch;  // holds strings handed back to the caller
};

namespace {

int guarded(fockrg_ctx* ctx, const std::function<int()>& body) {
  if (!ctx) return FOCKRG_USAGE;
  ctx->last_error.clear();
  try {
    return body();
  } catch (const fockrg::ConfigError& e) {
    ctx->last_error = e.what();
    return FOCKRG_USAGE;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return FOCKRG_NUMERIC;
  }
}

int finish(fockrg_ctx* ctx, const fockrg::RunResult& res) {
  ctx->last_report = res.report.dump(2);
  if (res.status != FOCKRG_OK && res.report.contains("error"))
    ctx->last_error = res.report["error"]["message"].get<std::string>();
  return res.status;
}

std::vector<double> parse_values(const char* csv) {
  std::vector<double> vals;
  std::stringstream ss(csv ? csv : "");
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size())
      throw fockrg::ConfigError("sweep: bad value '" + tok + "'");
    vals.push_back(v);
  }
  return vals;
}

}  // namespace

extern "C" {

const char* fockrg_version(void) { return fockrg::kVersion; }

int fockrg_ctx_new(fockrg_ctx** out) {
  if (!out) return FOCKRG_USAGE;
  *out = new (std::nothrow) fockrg_ctx();
  return *out ? FOCKRG_OK : FOCKRG_NUMERIC;
}

int fockrg_ctx_new_from_json(const char* config_json, fockrg_ctx** out) {
  if (!out || !config_json) return FOCKRG_USAGE;
  *out = nullptr;
  auto* ctx = new (std::nothrow) fockrg_ctx();
  if (!ctx) return FOCKRG_NUMERIC;
  const int rc = guarded(ctx, [&]() {
    ctx->config = fockrg::config_from_string(config_json);
    return FOCKRG_OK;
  });
  if (rc != FOCKRG_OK) {
    delete ctx;
    return rc;
  }
  *out = ctx;
  return FOCKRG_OK;
}

void fockrg_ctx_free(fockrg_ctx* ctx) { delete ctx; }

int fockrg_ctx_set(fockrg_ctx* ctx, const char* dotted_key, const char* value) {
  if (!ctx || !dotted_key || !value) return FOCKRG_USAGE;
  return guarded(ctx, [&]() {
    fockrg::config_set(ctx->config, dotted_key, value);
    return FOCKRG_OK;
  });
}

const char* fockrg_ctx_config_json(fockrg_ctx* ctx) {
  if (!ctx) return "";
  ctx->scratch = fockrg::config_to_json(ctx->config).dump(2);
  return ctx->scratch.c_str();
}

const char* fockrg_ctx_config_hash(fockrg_ctx* ctx) {
  if (!ctx) return "";
  ctx->scratch = fockrg::config_hash(ctx->config);
  return ctx->scratch.c_str();
}

const char* fockrg_ctx_last_error(const fockrg_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "";
}

const char* fockrg_ctx_last_report(const fockrg_ctx* ctx) {
  return ctx ? ctx->last_report.c_str() : "";
}

int fockrg_run_flow(fockrg_ctx* ctx, const char* out_dir) {
  if (!ctx || !out_dir) return FOCKRG_USAGE;
  return guarded(ctx, [&]() {
    return finish(ctx, fockrg::run_flow(ctx->config, out_dir));
  });
}

int fockrg_run_verify(fockrg_ctx* ctx, const char* which, const char* out_dir) {
  if (!ctx || !which || !out_dir) return FOCKRG_USAGE;
  return guarded(ctx, [&]() {
    return finish(ctx, fockrg::run_verify(ctx->config, which, out_dir));
  });
}

int fockrg_run_sweep(fockrg_ctx* ctx, const char* axis, const char* values_csv,
                     const char* out_dir) {
  if (!ctx || !axis || !values_csv || !out_dir) return FOCKRG_USAGE;
  return guarded(ctx, [&]() {
    return finish(ctx, fockrg::run_sweep(ctx->config, axis,
                                         parse_values(values_csv), out_dir));
  });
}

int fockrg_run_oracle(fockrg_ctx* ctx, const char* out_dir) {
  if (!ctx || !out_dir) return FOCKRG_USAGE;
  return guarded(ctx, [&]() {
    return finish(ctx, fockrg::run_oracle(ctx->config, out_dir));
  });
}

}  // extern "C"
