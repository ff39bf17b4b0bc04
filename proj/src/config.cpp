#include "sgwave/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>

namespace sgwave {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void require_object(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!keys.count(key)) fail(where, "unknown key \"" + key + "\"");
  }
}

double get_number(const json& j, const char* key, const std::string& where, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where + "." + key, "must be finite");
  return x;
}

double require_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing \"") + key + "\"");
  return get_number(j, key, where, 0.0);
}

long long get_integer(const json& j, const char* key, const std::string& where, long long fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<long long>();
}

bool get_bool(const json& j, const char* key, const std::string& where, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(where + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& where,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_number_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) fail(where, "expected an array of numbers");
    out.push_back(v.get<double>());
    if (!std::isfinite(out.back())) fail(where, "entries must be finite");
  }
  return out;
}

DomainSpec parse_domain(const json& j) {
  const std::string where = "domain";
  require_object(j, where, {"length", "bc", "grid_points", "allow_poincare_violation"});
  DomainSpec d;
  d.length = get_number(j, "length", where, 1.0);
  if (!(d.length > 0.0)) fail(where + ".length", "must be > 0");
  const std::string bc = get_string(j, "bc", where, "dirichlet");
  if (bc == "dirichlet") d.bc = BoundaryKind::Dirichlet;
  else if (bc == "periodic") d.bc = BoundaryKind::PeriodicMeanZero;
  else fail(where + ".bc", "expected \"dirichlet\" or \"periodic\"");
  const long long n = get_integer(j, "grid_points", where, 0);
  if (n < 0) fail(where + ".grid_points", "must be >= 0");
  d.grid_points = static_cast<int>(n);
  d.allow_poincare_violation = get_bool(j, "allow_poincare_violation", where, false);
  return d;
}

GrowthConstants parse_constants(const json& j, const std::string& where) {
  require_object(j, where, {"a0", "a1", "b0", "b1"});
  GrowthConstants k;
  k.a0 = get_number(j, "a0", where, k.a0);
  k.a1 = get_number(j, "a1", where, k.a1);
  k.b0 = get_number(j, "b0", where, k.b0);
  k.b1 = get_number(j, "b1", where, k.b1);
  return k;
}

NonlinearitySpec parse_nonlinearity(const json& j) {
  const std::string where = "nonlinearity";
  require_object(j, where, {"kind", "p", "constants", "table"});
  const std::string kind = get_string(j, "kind", where, "");
  const bool has_constants = j.contains("constants");
  if (kind == "linear" || kind == "cubic") {
    if (j.contains("p") || j.contains("table") || has_constants)
      fail(where, "\"" + kind + "\" takes no p, constants or table");
    return kind == "linear" ? NonlinearitySpec::linear() : NonlinearitySpec::cubic();
  }
  if (kind == "power_law") {
    if (j.contains("table") || has_constants)
      fail(where, "\"power_law\" takes only p");
    const double p = require_number(j, "p", where);
    if (!(p > 2.0)) fail(where + ".p", "power_law requires p > 2");
    return NonlinearitySpec::power_law(p);
  }
  if (kind == "custom") {
    const double p = require_number(j, "p", where);
    if (!(p >= 2.0)) fail(where + ".p", "must be >= 2");
    if (!has_constants) fail(where, "custom kind requires \"constants\"");
    const GrowthConstants k = parse_constants(j.at("constants"), where + ".constants");
    if (!j.contains("table")) fail(where, "custom kind requires \"table\"");
    const json& t = j.at("table");
    require_object(t, where + ".table", {"u", "f"});
    if (!t.contains("u") || !t.contains("f")) fail(where + ".table", "requires \"u\" and \"f\"");
    auto u = get_number_array(t.at("u"), where + ".table.u");
    auto f = get_number_array(t.at("f"), where + ".table.f");
    try {
      return NonlinearitySpec::tabulated(std::move(u), std::move(f), p, k);
    } catch (const std::invalid_argument& e) {
      fail(where + ".table", e.what());
    }
  }
  fail(where + ".kind", "expected \"linear\", \"power_law\", \"cubic\" or \"custom\"");
}

ForcingSpec parse_forcing(const json& j) {
  const std::string where = "forcing";
  require_object(j, where, {"kind", "g0", "g1", "g2", "c"});
  const std::string kind = get_string(j, "kind", where, "zero");
  if (kind == "zero") {
    if (j.size() > 1) fail(where, "\"zero\" takes no parameters");
    return ForcingSpec::zero();
  }
  if (kind == "affine") {
    const double g0 = get_number(j, "g0", where, 0.0);
    const double g1 = get_number(j, "g1", where, 0.0);
    const double g2 = get_number(j, "g2", where, 0.0);
    const double c = get_number(j, "c", where, 0.0);
    if (g0 < 0.0 || g1 < 0.0 || g2 < 0.0) fail(where, "g0, g1, g2 must be >= 0");
    return ForcingSpec::affine(g1, g2, c, g0);
  }
  fail(where + ".kind", "expected \"zero\" or \"affine\"");
}

// A field given either as modal coefficients or as a named function of x.
struct FieldSource {
  std::optional<std::vector<double>> coeffs;
  SpatialFn fn = [](double) { return 0.0; };
  bool zero = true;
};

FieldSource parse_field(const json& j, const std::string& where, const DomainSpec& domain) {
  FieldSource src;
  if (j.is_null()) return src;
  if (!j.is_object()) fail(where, "expected an object");
  if (j.contains("coeffs")) {
    require_object(j, where, {"coeffs"});
    src.coeffs = get_number_array(j.at("coeffs"), where + ".coeffs");
    src.zero = false;
    return src;
  }
  require_object(j, where, {"function", "amplitude", "wavenumber"});
  const std::string name = get_string(j, "function", where, "");
  const double amp = get_number(j, "amplitude", where, 1.0);
  const double l = domain.length;
  if (name == "zero") return src;
  src.zero = false;
  if (name == "parabola") {
    if (j.contains("wavenumber")) fail(where, "\"parabola\" takes no wavenumber");
    src.fn = [amp, l](double x) {
      const double s = x / l;
      return amp * s * (1.0 - s);
    };
    return src;
  }
  if (name == "sine") {
    const long long k = get_integer(j, "wavenumber", where, 1);
    if (k < 1) fail(where + ".wavenumber", "must be >= 1");
    const double period_factor = domain.bc == BoundaryKind::Dirichlet ? 1.0 : 2.0;
    const double w = period_factor * static_cast<double>(k) * std::numbers::pi / l;
    src.fn = [amp, w](double x) { return amp * std::sin(w * x); };
    return src;
  }
  fail(where + ".function", "expected \"zero\", \"parabola\" or \"sine\"");
}

InitialData parse_initial(const json& j, const DomainSpec& domain) {
  const std::string where = "initial";
  require_object(j, where, {"x0", "x1"});
  const FieldSource x0 = parse_field(j.value("x0", json()), where + ".x0", domain);
  const FieldSource x1 = parse_field(j.value("x1", json()), where + ".x1", domain);
  if (x0.coeffs || x1.coeffs) {
    if ((!x0.coeffs && !x0.zero) || (!x1.coeffs && !x1.zero))
      fail(where, "x0 and x1 must both be coefficient lists or both be functions");
    return InitialData::from_modes(domain, x0.coeffs.value_or(std::vector<double>{}),
                                   x1.coeffs.value_or(std::vector<double>{}));
  }
  InitialData data;
  data.x0 = x0.fn;
  data.x1 = x1.fn;
  return data;
}

SolverConfig parse_time(const json& j) {
  const std::string where = "time";
  require_object(j, where, {"T", "dt", "integrator", "sample_stride", "blowup_ceiling"});
  SolverConfig cfg;
  cfg.T = get_number(j, "T", where, cfg.T);
  cfg.dt = get_number(j, "dt", where, cfg.dt);
  if (cfg.T < 0.0) fail(where + ".T", "must be >= 0");
  if (!(cfg.dt > 0.0)) fail(where + ".dt", "must be > 0");
  const std::string integ = get_string(j, "integrator", where, "rk4");
  if (integ == "rk4") cfg.integrator = Integrator::RK4;
  else if (integ == "stormer_verlet") cfg.integrator = Integrator::StormerVerlet;
  else fail(where + ".integrator", "expected \"rk4\" or \"stormer_verlet\"");
  const long long stride = get_integer(j, "sample_stride", where, 1);
  if (stride < 1) fail(where + ".sample_stride", "must be >= 1");
  cfg.sample_stride = static_cast<int>(stride);
  cfg.blowup_ceiling = get_number(j, "blowup_ceiling", where, cfg.blowup_ceiling);
  if (!(cfg.blowup_ceiling > 0.0)) fail(where + ".blowup_ceiling", "must be > 0");
  try {
    step_count(cfg);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return cfg;
}

MonitorConfig parse_monitors(const json& j) {
  const std::string where = "monitors";
  require_object(j, where,
                 {"identity", "envelope", "conservation", "decay", "k", "delta", "tolerances"});
  MonitorConfig m;
  m.options.identity = get_bool(j, "identity", where, true);
  m.options.envelope = get_bool(j, "envelope", where, true);
  m.options.conservation = get_bool(j, "conservation", where, true);
  m.options.decay = get_bool(j, "decay", where, true);
  m.k = get_number(j, "k", where, m.k);
  if (!(m.k > 1.0)) fail(where + ".k", "must be > 1");
  if (j.contains("delta") && !j.at("delta").is_null()) {
    m.delta = get_number(j, "delta", where, 0.0);
    if (!(*m.delta > 0.0)) fail(where + ".delta", "must be > 0");
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    const std::string tw = where + ".tolerances";
    require_object(t, tw, {"identity", "envelope", "conservation", "decay"});
    MonitorTolerances& tol = m.options.tol;
    tol.identity = get_number(t, "identity", tw, tol.identity);
    tol.envelope = get_number(t, "envelope", tw, tol.envelope);
    tol.conservation = get_number(t, "conservation", tw, tol.conservation);
    tol.decay = get_number(t, "decay", tw, tol.decay);
    if (tol.identity < 0.0 || tol.envelope < 0.0 || tol.conservation < 0.0 || tol.decay < 0.0)
      fail(tw, "tolerances must be >= 0");
  }
  return m;
}

VerifyConfig parse_verify(const json& j) {
  const std::string where = "verify";
  require_object(j, where, {"samples", "seed", "override"});
  VerifyConfig v;
  const long long samples = get_integer(j, "samples", where, v.samples);
  if (samples < 1) fail(where + ".samples", "must be >= 1");
  v.samples = static_cast<int>(samples);
  const long long seed = get_integer(j, "seed", where, 0);
  if (seed < 0) fail(where + ".seed", "must be >= 0");
  v.seed = static_cast<std::uint64_t>(seed);
  v.override_failures = get_bool(j, "override", where, false);
  return v;
}

OutputConfig parse_output(const json& j) {
  const std::string where = "output";
  require_object(j, where, {"csv_path", "report_path"});
  OutputConfig o;
  o.csv_path = get_string(j, "csv_path", where, o.csv_path);
  o.report_path = get_string(j, "report_path", where, o.report_path);
  if (o.csv_path.empty() || o.report_path.empty()) fail(where, "paths must be non-empty");
  return o;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
  require_object(j, "config",
                 {"domain", "modes", "nonlinearity", "forcing", "initial", "time", "monitors",
                  "verify", "output"});
  if (!j.contains("modes")) fail("config", "missing \"modes\"");
  if (!j.contains("nonlinearity")) fail("config", "missing \"nonlinearity\"");

  RunConfig cfg;
  cfg.problem.domain = parse_domain(j.value("domain", json::object()));
  const long long modes = get_integer(j, "modes", "config", 0);
  if (modes < 1) fail("config.modes", "must be >= 1");
  cfg.modes = static_cast<int>(modes);
  if (cfg.problem.domain.grid_points != 0 &&
      cfg.problem.domain.grid_points < min_grid_points(cfg.modes))
    fail("domain.grid_points", "below the minimum " + std::to_string(min_grid_points(cfg.modes)) +
                                   " for " + std::to_string(cfg.modes) + " modes");
  cfg.problem.nl = parse_nonlinearity(j.at("nonlinearity"));
  cfg.problem.fs = parse_forcing(j.value("forcing", json::object()));
  cfg.problem.initial = parse_initial(j.value("initial", json::object()), cfg.problem.domain);
  cfg.time = parse_time(j.value("time", json::object()));
  if (cfg.time.integrator == Integrator::StormerVerlet && cfg.problem.fs.velocity_dependent())
    fail("time.integrator", "stormer_verlet requires g2 = 0");
  cfg.monitors = parse_monitors(j.value("monitors", json::object()));
  cfg.verify = parse_verify(j.value("verify", json::object()));
  cfg.output = parse_output(j.value("output", json::object()));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

std::filesystem::path resolve_output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) return std::filesystem::path(dir) / p;
  return p;
}

}  // namespace sgwave
