#include "qshyp/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qshyp/errors.hpp"

namespace qshyp {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string s = "invalid configuration:";
  for (const auto& i : issues) s += "\n  - " + i;
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  if (v.empty()) throw std::invalid_argument("expected a number, got an empty value");
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || errno == ERANGE) throw std::invalid_argument("expected a number, got '" + v + "'");
  if (!std::isfinite(x)) throw std::invalid_argument("value must be finite, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& v) {
  if (v.empty()) throw std::invalid_argument("expected an integer, got an empty value");
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE) throw std::invalid_argument("expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t to_unsigned(const std::string& v) {
  if (v.empty() || v[0] == '-') throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
  char* end = nullptr;
  errno = 0;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE)
    throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected true or false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.n", [](RunConfig& c, const std::string& v) { c.n = static_cast<int>(to_integer(v)); }},
      {"grid.dims", [](RunConfig& c, const std::string& v) { c.dims = static_cast<int>(to_integer(v)); }},
      {"time.t_end", [](RunConfig& c, const std::string& v) { c.time.t_end = to_double(v); }},
      {"time.snapshot_interval", [](RunConfig& c, const std::string& v) { c.time.snapshot_interval = to_double(v); }},
      {"time.cfl_safety", [](RunConfig& c, const std::string& v) { c.time.cfl_safety = to_double(v); }},
      {"time.dt", [](RunConfig& c, const std::string& v) { c.time.dt_fixed = to_double(v); }},
      {"potential.a", [](RunConfig& c, const std::string& v) { c.potential.a = to_double(v); }},
      {"potential.b", [](RunConfig& c, const std::string& v) { c.potential.b = to_double(v); }},
      {"potential.c", [](RunConfig& c, const std::string& v) { c.potential.c = to_double(v); }},
      {"potential.lambda",
       [](RunConfig& c, const std::string& v) {
         if (v == "auto") {
           c.lambda_auto = true;
         } else {
           c.lambda_auto = false;
           c.potential.lambda = to_double(v);
         }
       }},
      {"potential.q", [](RunConfig& c, const std::string& v) { c.potential.q = to_double(v); }},
      {"potential.growth_const", [](RunConfig& c, const std::string& v) { c.potential.growth_const = to_double(v); }},
      {"potential.audit_radius", [](RunConfig& c, const std::string& v) { c.audit.radius = to_double(v); }},
      {"potential.audit_samples", [](RunConfig& c, const std::string& v) { c.audit.samples = to_unsigned(v); }},
      {"potential.audit_seed", [](RunConfig& c, const std::string& v) { c.audit.seed = to_unsigned(v); }},
      {"initial.kind", [](RunConfig& c, const std::string& v) { c.initial.kind = v; }},
      {"initial.amp_v", [](RunConfig& c, const std::string& v) { c.initial.amp_v = to_double(v); }},
      {"initial.amp_q", [](RunConfig& c, const std::string& v) { c.initial.amp_q = to_double(v); }},
      {"initial.amp_p", [](RunConfig& c, const std::string& v) { c.initial.amp_p = to_double(v); }},
      {"initial.band", [](RunConfig& c, const std::string& v) { c.initial.band = static_cast<int>(to_integer(v)); }},
      {"initial.seed",
       [](RunConfig& c, const std::string& v) {
         c.initial.seed = to_unsigned(v);
         c.initial.seed_set = true;
       }},
      {"initial.checkpoint", [](RunConfig& c, const std::string& v) { c.initial.checkpoint = v; }},
      {"solver.dealias_potential", [](RunConfig& c, const std::string& v) { c.dealias_potential = to_bool(v); }},
      {"solver.blowup_cap", [](RunConfig& c, const std::string& v) { c.blowup_cap = to_double(v); }},
      {"loop.enabled", [](RunConfig& c, const std::string& v) { c.loop.enabled = to_bool(v); }},
      {"loop.center_x", [](RunConfig& c, const std::string& v) { c.loop.center[0] = to_double(v); }},
      {"loop.center_y", [](RunConfig& c, const std::string& v) { c.loop.center[1] = to_double(v); }},
      {"loop.center_z", [](RunConfig& c, const std::string& v) { c.loop.center[2] = to_double(v); }},
      {"loop.radius", [](RunConfig& c, const std::string& v) { c.loop.radius = to_double(v); }},
      {"loop.markers", [](RunConfig& c, const std::string& v) { c.loop.markers = to_unsigned(v); }},
      {"loop.normal_axis", [](RunConfig& c, const std::string& v) { c.loop.normal_axis = static_cast<int>(to_integer(v)); }},
      {"output.diagnostics", [](RunConfig& c, const std::string& v) { c.diagnostics_path = v; }},
      {"output.checkpoint", [](RunConfig& c, const std::string& v) { c.checkpoint_path = v; }},
      {"analysis.gronwall_c",
       [](RunConfig& c, const std::string& v) {
         if (v == "fit")
           c.gronwall_c.reset();
         else
           c.gronwall_c = to_double(v);
       }},
      {"analysis.weak_cutoff", [](RunConfig& c, const std::string& v) { c.weak_cutoff = static_cast<int>(to_integer(v)); }},
  };
  return table;
}

void assign(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where,
            std::vector<std::string>& issues) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) {
    issues.push_back(where + "unknown key '" + key + "'");
    return;
  }
  try {
    it->second(cfg, value);
  } catch (const std::invalid_argument& e) {
    issues.push_back(where + key + ": " + e.what());
  }
}

std::vector<std::string> collect_violations(const RunConfig& c) {
  std::vector<std::string> v;
  if (c.n < 8 || c.n % 2 != 0) v.push_back("grid.n: must be an even integer >= 8 (got " + std::to_string(c.n) + ")");
  if (c.dims != 2 && c.dims != 3) v.push_back("grid.dims: must be 2 or 3 (got " + std::to_string(c.dims) + ")");
  if (!(c.time.t_end >= 0.0)) v.push_back("time.t_end: must be >= 0");
  if (!(c.time.snapshot_interval > 0.0)) v.push_back("time.snapshot_interval: must be > 0");
  if (!(c.time.cfl_safety > 0.0 && c.time.cfl_safety <= 1.0)) v.push_back("time.cfl_safety: must lie in (0, 1]");
  if (!(c.time.dt_fixed >= 0.0)) v.push_back("time.dt: must be >= 0 (0 selects the CFL step)");
  if (!(c.potential.c > 0.0))
    v.push_back("potential.c: must be > 0; the convexity audit (G = F + lambda|Q|^2 convex and bounded below) and the "
                "growth audit (|dF| <= C(1 + |Q|^q)) both require a positive quartic coefficient");
  if (!(c.potential.lambda >= 0.0)) v.push_back("potential.lambda: must be >= 0");
  if (!(c.potential.q < 5.0)) v.push_back("potential.q: growth exponent must be < 5");
  if (!(c.potential.growth_const > 0.0)) v.push_back("potential.growth_const: must be > 0");
  if (!(c.audit.radius > 0.0)) v.push_back("potential.audit_radius: must be > 0");
  if (c.audit.samples == 0) v.push_back("potential.audit_samples: must be positive");
  const auto& k = c.initial.kind;
  if (k != "taylor_green" && k != "random_bandlimited" && k != "manufactured" && k != "checkpoint")
    v.push_back("initial.kind: must be one of taylor_green, random_bandlimited, manufactured, checkpoint (got '" + k + "')");
  if (c.initial.amp_v < 0.0 || c.initial.amp_q < 0.0 || c.initial.amp_p < 0.0)
    v.push_back("initial.amp_v/amp_q/amp_p: amplitudes must be >= 0");
  if (k == "random_bandlimited") {
    if (!c.initial.seed_set) v.push_back("initial.seed: required when initial.kind = random_bandlimited");
    if (c.initial.band < 1 || c.initial.band > c.n / 3)
      v.push_back("initial.band: must lie in [1, n/3] = [1, " + std::to_string(c.n / 3) + "]");
  }
  if (k == "checkpoint" && c.initial.checkpoint.empty())
    v.push_back("initial.checkpoint: path required when initial.kind = checkpoint");
  if (!(c.blowup_cap > 0.0)) v.push_back("solver.blowup_cap: must be > 0");
  if (c.loop.enabled) {
    if (c.loop.markers < 16) v.push_back("loop.markers: at least 16 markers required");
    if (!(c.loop.radius > 0.0)) v.push_back("loop.radius: must be > 0");
    if (c.loop.normal_axis < 0 || c.loop.normal_axis > 2) v.push_back("loop.normal_axis: must be 0, 1 or 2");
  }
  if (c.gronwall_c && !(*c.gronwall_c >= 0.0)) v.push_back("analysis.gronwall_c: must be >= 0 or 'fit'");
  if (c.weak_cutoff < 1 || c.weak_cutoff > c.n / 3)
    v.push_back("analysis.weak_cutoff: must lie in [1, n/3] = [1, " + std::to_string(c.n / 3) + "]");
  return v;
}

void finalize(RunConfig& cfg, std::vector<std::string>& issues) {
  if (cfg.lambda_auto) cfg.potential.lambda = default_lambda(cfg.potential.a, cfg.potential.b, cfg.audit.radius);
  for (auto& v : collect_violations(cfg)) issues.push_back(std::move(v));
  if (!issues.empty()) throw ConfigError(issues);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

DynamicsOptions RunConfig::dynamics_options() const {
  DynamicsOptions o;
  o.dealias_potential = dealias_potential;
  o.blowup_cap = blowup_cap;
  return o;
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::vector<std::string> issues;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back(where + "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (auto [it, fresh] = seen.emplace(key, lineno); !fresh) {
      issues.push_back(where + "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
      continue;
    }
    assign(cfg, key, value, where, issues);
  }
  finalize(cfg, issues);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError({path + ": cannot open configuration file"});
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments) {
  std::vector<std::string> issues;
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) {
      issues.push_back("override '" + a + "': expected key=value");
      continue;
    }
    assign(cfg, trim(a.substr(0, eq)), trim(a.substr(eq + 1)), "override: ", issues);
  }
  finalize(cfg, issues);
}

void validate_config(const RunConfig& cfg) {
  auto v = collect_violations(cfg);
  if (!v.empty()) throw ConfigError(std::move(v));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream o;
  auto kv = [&](const char* k, const std::string& v) { o << k << " = " << v << '\n'; };
  auto num = [&](const char* k, double v) { kv(k, format_double(v)); };
  kv("grid.n", std::to_string(c.n));
  kv("grid.dims", std::to_string(c.dims));
  num("time.t_end", c.time.t_end);
  num("time.snapshot_interval", c.time.snapshot_interval);
  num("time.cfl_safety", c.time.cfl_safety);
  num("time.dt", c.time.dt_fixed);
  num("potential.a", c.potential.a);
  num("potential.b", c.potential.b);
  num("potential.c", c.potential.c);
  if (c.lambda_auto) o << "# potential.lambda chosen automatically from a, b and the audit radius\n";
  num("potential.lambda", c.potential.lambda);
  num("potential.q", c.potential.q);
  num("potential.growth_const", c.potential.growth_const);
  num("potential.audit_radius", c.audit.radius);
  kv("potential.audit_samples", std::to_string(c.audit.samples));
  kv("potential.audit_seed", std::to_string(c.audit.seed));
  kv("initial.kind", c.initial.kind);
  num("initial.amp_v", c.initial.amp_v);
  num("initial.amp_q", c.initial.amp_q);
  num("initial.amp_p", c.initial.amp_p);
  kv("initial.band", std::to_string(c.initial.band));
  kv("initial.seed", std::to_string(c.initial.seed));
  if (!c.initial.checkpoint.empty()) kv("initial.checkpoint", c.initial.checkpoint);
  kv("solver.dealias_potential", c.dealias_potential ? "true" : "false");
  num("solver.blowup_cap", c.blowup_cap);
  kv("loop.enabled", c.loop.enabled ? "true" : "false");
  num("loop.center_x", c.loop.center[0]);
  num("loop.center_y", c.loop.center[1]);
  num("loop.center_z", c.loop.center[2]);
  num("loop.radius", c.loop.radius);
  kv("loop.markers", std::to_string(c.loop.markers));
  kv("loop.normal_axis", std::to_string(c.loop.normal_axis));
  kv("output.diagnostics", c.diagnostics_path);
  if (!c.checkpoint_path.empty()) kv("output.checkpoint", c.checkpoint_path);
  kv("analysis.gronwall_c", c.gronwall_c ? format_double(*c.gronwall_c) : "fit");
  kv("analysis.weak_cutoff", std::to_string(c.weak_cutoff));
  return o.str();
}

}  // namespace qshyp
