#include "config.hpp"

#include <set>

#include "errors.hpp"

namespace fockrg {

namespace {
using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("config: unknown field '" + where + it.key() + "'");
}

template <typename T>
void get_if(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: field '" + where + key + "' has the wrong type");
  }
}
}  // namespace

ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["model"] = {{"g", c.model.g},
                {"rho", c.model.rho},
                {"omega0", c.model.omega0},
                {"modes", c.model.modes},
                {"max_total", c.model.max_total},
                {"max_per_mode", c.model.max_per_mode},
                {"f_profile", c.model.f_profile},
                {"g_max", c.model.g_max},
                {"allow_boundary_ties", c.model.allow_boundary_ties},
                {"dim_cap", c.model.dim_cap}};
  j["flow"] = {{"n_max", c.flow.n_max},
               {"root_tol", c.flow.root_tol},
               {"z_min", c.flow.z_min},
               {"z_max", c.flow.z_max},
               {"leak_budget", c.flow.leak_budget},
               {"sign_convention", c.flow.sign_convention},
               {"depth_guard", c.flow.depth_guard},
               {"cond_limit", c.flow.cond_limit}};
  j["verify"] = {{"grid_points", c.verify.grid_points},
                 {"telescoping_n_max", c.verify.telescoping_n_max},
                 {"telescoping_rhos", c.verify.telescoping_rhos},
                 {"feshbach_instances", c.verify.feshbach_instances},
                 {"feshbach_max_dim", c.verify.feshbach_max_dim},
                 {"norm_families", c.verify.norm_families},
                 {"mu", c.verify.mu},
                 {"xi", c.verify.xi},
                 {"probe_rel_tol", c.verify.probe_rel_tol},
                 {"tie_tol", c.verify.tie_tol},
                 {"oracle_k", c.verify.oracle_k},
                 {"dense_cap", c.verify.dense_cap}};
  j["output"] = {{"dir", c.output.dir}, {"formats", c.output.formats}};
  j["seed"] = c.seed;
  return j;
}

RunConfig config_from_json(const json& j, bool run_validate) {
  RunConfig c;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j, {"model", "flow", "verify", "output", "seed"}, "");
  if (j.contains("model")) {
    const json& m = j.at("model");
    reject_unknown(m,
                   {"g", "rho", "omega0", "modes", "max_total", "max_per_mode",
                    "f_profile", "g_max", "allow_boundary_ties", "dim_cap"},
                   "model.");
    get_if(m, "g", c.model.g, "model.");
    get_if(m, "rho", c.model.rho, "model.");
    get_if(m, "omega0", c.model.omega0, "model.");
    get_if(m, "modes", c.model.modes, "model.");
    get_if(m, "max_total", c.model.max_total, "model.");
    get_if(m, "max_per_mode", c.model.max_per_mode, "model.");
    get_if(m, "f_profile", c.model.f_profile, "model.");
    get_if(m, "g_max", c.model.g_max, "model.");
    get_if(m, "allow_boundary_ties", c.model.allow_boundary_ties, "model.");
    get_if(m, "dim_cap", c.model.dim_cap, "model.");
  }
  if (j.contains("flow")) {
    const json& f = j.at("flow");
    reject_unknown(f,
                   {"n_max", "root_tol", "z_min", "z_max", "leak_budget",
                    "sign_convention", "depth_guard", "cond_limit"},
                   "flow.");
    get_if(f, "n_max", c.flow.n_max, "flow.");
    get_if(f, "root_tol", c.flow.root_tol, "flow.");
    get_if(f, "z_min", c.flow.z_min, "flow.");
    get_if(f, "z_max", c.flow.z_max, "flow.");
    get_if(f, "leak_budget", c.flow.leak_budget, "flow.");
    get_if(f, "sign_convention", c.flow.sign_convention, "flow.");
    get_if(f, "depth_guard", c.flow.depth_guard, "flow.");
    get_if(f, "cond_limit", c.flow.cond_limit, "flow.");
  }
  if (j.contains("verify")) {
    const json& v = j.at("verify");
    reject_unknown(v,
                   {"grid_points", "telescoping_n_max", "telescoping_rhos",
                    "feshbach_instances", "feshbach_max_dim", "norm_families",
                    "mu", "xi", "probe_rel_tol", "tie_tol", "oracle_k",
                    "dense_cap"},
                   "verify.");
    get_if(v, "grid_points", c.verify.grid_points, "verify.");
    get_if(v, "telescoping_n_max", c.verify.telescoping_n_max, "verify.");
    get_if(v, "telescoping_rhos", c.verify.telescoping_rhos, "verify.");
    get_if(v, "feshbach_instances", c.verify.feshbach_instances, "verify.");
    get_if(v, "feshbach_max_dim", c.verify.feshbach_max_dim, "verify.");
    get_if(v, "norm_families", c.verify.norm_families, "verify.");
    get_if(v, "mu", c.verify.mu, "verify.");
    get_if(v, "xi", c.verify.xi, "verify.");
    get_if(v, "probe_rel_tol", c.verify.probe_rel_tol, "verify.");
    get_if(v, "tie_tol", c.verify.tie_tol, "verify.");
    get_if(v, "oracle_k", c.verify.oracle_k, "verify.");
    get_if(v, "dense_cap", c.verify.dense_cap, "verify.");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, {"dir", "formats"}, "output.");
    get_if(o, "dir", c.output.dir, "output.");
    get_if(o, "formats", c.output.formats, "output.");
  }
  get_if(j, "seed", c.seed, "");
  if (run_validate) validate(c);
  return c;
}

RunConfig config_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

void config_set(RunConfig& c, const std::string& dotted_key,
                const std::string& value) {
  json j = config_to_json(c);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // bare string
  }
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("config: empty key segment in --set");
    if (dot == std::string::npos) {
      if (!node->contains(part))
        throw ConfigError("config: unknown field '" + dotted_key + "'");
      (*node)[part] = parsed;
      break;
    }
    if (!node->contains(part))
      throw ConfigError("config: unknown field '" + dotted_key + "'");
    node = &(*node)[part];
    start = dot + 1;
  }
  c = config_from_json(j, /*run_validate=*/false);
}

void validate(const RunConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0))
      throw ConfigError(std::string("config: ") + name + " must be positive");
  };
  if (!(c.model.rho > 0.0 && c.model.rho < 0.75))
    throw ConfigError("config: model.rho must lie in (0, 3/4)");
  if (!(c.model.omega0 > 0.0 && c.model.omega0 <= 1.0))
    throw ConfigError("config: model.omega0 must lie in (0, 1]");
  if (c.model.modes < 2) throw ConfigError("config: model.modes must be >= 2");
  if (c.model.max_total < 1 || c.model.max_per_mode < 1)
    throw ConfigError("config: truncation caps must be >= 1");
  if (c.model.f_profile != "unit_ball")
    throw ConfigError("config: model.f_profile must be 'unit_ball'");
  positive(c.model.g_max, "model.g_max");
  if (c.flow.n_max < 1) throw ConfigError("config: flow.n_max must be >= 1");
  positive(c.flow.root_tol, "flow.root_tol");
  positive(c.flow.leak_budget, "flow.leak_budget");
  positive(c.flow.cond_limit, "flow.cond_limit");
  if (!(c.flow.z_min < c.flow.z_max))
    throw ConfigError("config: flow.z_min must be below flow.z_max");
  if (c.flow.sign_convention != "minus" && c.flow.sign_convention != "plus")
    throw ConfigError("config: flow.sign_convention must be minus or plus");
  if (c.flow.depth_guard != "strict" && c.flow.depth_guard != "budget")
    throw ConfigError("config: flow.depth_guard must be strict or budget");
  if (c.flow.depth_guard == "strict" && c.flow.n_max > c.model.modes - 2)
    throw ConfigError(
        "config: flow.n_max exceeds model.modes - 2 under the strict depth "
        "guard");
  positive(c.verify.mu, "verify.mu");
  if (!(c.verify.xi > 0.0 && c.verify.xi < 1.0))
    throw ConfigError("config: verify.xi must lie in (0, 1)");
  positive(c.verify.probe_rel_tol, "verify.probe_rel_tol");
  positive(c.verify.tie_tol, "verify.tie_tol");
  for (double r : c.verify.telescoping_rhos)
    if (!(r > 0.0 && r < 0.75))
      throw ConfigError("config: verify.telescoping_rhos must lie in (0, 3/4)");
  if (c.verify.grid_points < 2)
    throw ConfigError("config: verify.grid_points must be >= 2");
}

std::string config_hash(const RunConfig& c) {
  const std::string s = config_to_json(c).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace fockrg
