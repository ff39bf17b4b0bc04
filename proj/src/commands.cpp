#include "sgwave/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sgwave/kernels.hpp"

namespace sgwave {

namespace {

using nlohmann::json;

constexpr double kDecayDefaultT = 50.0;
constexpr double kRadiusSlack = 1e-9;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Operator for the verifiers: a Poincare violation is reported, not thrown.
OperatorPtr inspection_operator(const RunConfig& cfg) {
  DomainSpec domain = cfg.problem.domain;
  domain.allow_poincare_violation = true;
  return build_operator(domain, cfg.modes);
}

ConditionCheck poincare_check(const OperatorSpec& op, bool allowed) {
  ConditionCheck c;
  c.name = "poincare";
  c.worst_margin = std::min(0.0, op.lambda_min() - 1.0);
  c.passed = op.satisfies_poincare() || allowed;
  c.witness = {{"lambda_min", op.lambda_min()}};
  return c;
}

ProblemDefinition runnable_definition(const RunConfig& cfg) {
  ProblemDefinition def = cfg.problem;
  if (cfg.verify.override_failures) def.domain.allow_poincare_violation = true;
  return def;
}

json gronwall_json(const GronwallParams& gp) {
  return {{"C0", gp.C0},
          {"C1", gp.C1},
          {"c_tilde", gp.c_tilde},
          {"E_init", gp.E_init},
          {"conservation", gp.conservation}};
}

json decay_json(const DecayParams& dp) {
  return {{"r", dp.r}, {"c", dp.c}, {"C", dp.C}, {"k", dp.k}, {"delta", dp.delta},
          {"radius", decay_radius(dp)}};
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// Wraps the checks shared by run and decay: verification gate.
bool verification_blocks(const ConditionReport& report, const RunConfig& cfg, std::ostream& err) {
  if (report.all_passed()) return false;
  if (cfg.verify.override_failures) {
    err << "warning: condition verification failed; continuing because verify.override is set\n";
    return false;
  }
  err << "error: condition verification failed (set verify.override to run anyway)\n";
  return true;
}

}  // namespace

ConditionReport verify_problem(const RunConfig& cfg) {
  const OperatorPtr op = inspection_operator(cfg);
  ConditionReport report;
  report.checks.push_back(poincare_check(*op, cfg.problem.domain.allow_poincare_violation));
  if (!op->satisfies_poincare()) {
    std::ostringstream msg;
    msg << "lambda_min = " << op->lambda_min() << " < 1: Poincare inequality violated";
    if (cfg.problem.domain.allow_poincare_violation) msg << " (allowed by configuration)";
    report.notes.push_back(msg.str());
  }
  report.append(verify_conditions(cfg.problem.nl, op, cfg.verify.samples, cfg.verify.seed));
  report.append(verify_g(cfg.problem.fs, op, cfg.verify.samples, cfg.verify.seed + 1));
  return report;
}

RunOutcome execute_run(const RunConfig& cfg) {
  RunOutcome out;
  const ProblemDefinition def = runnable_definition(cfg);
  Problem problem;
  try {
    problem = def.at_modes(cfg.modes);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto x0 = sample_on_grid(*problem.op, def.initial.x0);
  const auto x1 = sample_on_grid(*problem.op, def.initial.x1);
  out.projection = project_initial_data(x0, x1, problem.op);
  try {
    out.trajectory = integrate(out.projection.state, cfg.time, problem);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const EnergyRecord& first = out.trajectory.samples.front().energy;
  try {
    out.gronwall = derive_gronwall(problem.nl, problem.fs, *problem.op, first);
    if (problem.fs.kind() == ForcingKind::Zero &&
        condition_iv_constant(problem.nl, problem.op->domain().length))
      out.decay = derive_decay(problem.nl, problem.fs, *problem.op, first, cfg.monitors.k,
                               cfg.monitors.delta);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  out.monitors = monitor(out.trajectory, out.gronwall, out.decay, cfg.monitors.options);
  return out;
}

std::string trajectory_csv(const RunOutcome& outcome) {
  std::string csv =
      "t,energy,kinetic,potential,By_norm_sq,forcing_power,gronwall_envelope,decay_bound,"
      "identity_residual\n";
  const auto& samples = outcome.trajectory.samples;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const EnergyRecord& e = samples[n].energy;
    const MonitorRow& row = outcome.monitors.rows[n];
    csv += format_double(e.t) + ',' + format_double(e.energy) + ',' + format_double(e.kinetic) +
           ',' + format_double(e.potential) + ',' + format_double(e.By_norm_sq) + ',' +
           format_double(e.forcing_power) + ',' + format_double(row.gronwall_envelope) + ',' +
           (row.decay_bound ? format_double(*row.decay_bound) : std::string()) + ',' +
           format_double(row.identity_residual) + '\n';
  }
  return csv;
}

json run_report(const RunOutcome& outcome) {
  const Trajectory& traj = outcome.trajectory;
  const OperatorSpec& op = *traj.problem.op;
  json j;
  j["passed"] = outcome.monitors.all_passed();
  j["modes"] = op.modes();
  j["grid_points"] = op.grid_points();
  j["boundary"] = to_string(op.domain().bc);
  j["nonlinearity"] = to_string(traj.problem.nl.kind());
  j["forcing"] = to_string(traj.problem.fs.kind());
  j["integrator"] = to_string(traj.config.integrator);
  j["samples"] = traj.samples.size();
  j["diverged"] = traj.diverged;
  if (traj.diverged) {
    j["diverged_at"] = traj.diverged_at;
    j["divergence_reason"] = traj.divergence_reason;
    j["last_complete_sample_t"] = traj.samples.back().state.t;
  }
  j["projection"] = {{"x0_tail_norm", outcome.projection.x0_tail_norm},
                     {"x1_tail_norm", outcome.projection.x1_tail_norm}};
  j["gronwall"] = gronwall_json(outcome.gronwall);
  j["decay"] = outcome.decay ? decay_json(*outcome.decay) : json(nullptr);
  j["monitors"] = outcome.monitors.to_json();
  j["verification"] = outcome.verification.to_json();
  j["warnings"] = op.warnings();
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------

json ConvergeStudy::to_json() const {
  json j;
  j["m_ref"] = m_ref;
  j["dt_ref"] = dt_ref;
  j["monotone_in_modes"] = monotone;
  j["diverged"] = diverged;
  j["passed"] = monotone && !diverged;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json row{{"modes", r.modes}, {"dt", r.dt}, {"diverged", r.diverged}};
    row["error"] = std::isfinite(r.error) ? json(r.error) : json(nullptr);
    j["rows"].push_back(std::move(row));
  }
  return j;
}

ConvergeStudy converge_study(const RunConfig& cfg, const ConvergeOptions& options) {
  if (options.modes.empty() || options.dts.empty())
    throw ConfigError("converge: --modes and --dts must be nonempty");
  if (!std::is_sorted(options.modes.begin(), options.modes.end()) ||
      std::adjacent_find(options.modes.begin(), options.modes.end()) != options.modes.end())
    throw ConfigError("converge: --modes must be strictly ascending");
  if (!std::is_sorted(options.dts.begin(), options.dts.end()) ||
      std::adjacent_find(options.dts.begin(), options.dts.end()) != options.dts.end())
    throw ConfigError("converge: --dts must be strictly ascending");
  if (options.modes.front() < 1) throw ConfigError("converge: modes must be >= 1");
  if (!(options.dts.front() > 0.0)) throw ConfigError("converge: dts must be > 0");

  ConvergeStudy study;
  study.m_ref = options.m_ref.value_or(2 * options.modes.back());
  study.dt_ref = options.dt_ref.value_or(options.dts.front() / 10.0);
  if (study.m_ref < options.modes.back())
    throw ConfigError("converge: m_ref must be >= the largest mode count");
  if (!(study.dt_ref > 0.0)) throw ConfigError("converge: dt_ref must be > 0");

  const ProblemDefinition def = runnable_definition(cfg);
  std::vector<SolverConfig> dt_cfgs;
  for (double dt : options.dts) {
    SolverConfig c = cfg.time;
    c.dt = dt;
    SolverConfig r = c;
    r.dt = study.dt_ref;
    try {
      step_count(c);
      const double ratio = dt / study.dt_ref;
      if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0)
        throw std::invalid_argument("dt = " + format_double(dt) +
                                    " is not an integer multiple of dt_ref");
      r.sample_stride = static_cast<int>(c.sample_stride * std::llround(ratio));
      step_count(r);
      validate(c, def.at_modes(options.modes.front()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("converge: ") + e.what());
    }
    dt_cfgs.push_back(c);
  }

  // References first, then members; every job is independent.
  const std::size_t n_dt = options.dts.size();
  const std::size_t n_m = options.modes.size();
  std::vector<Trajectory> refs(n_dt), members(n_dt * n_m);
  std::vector<std::exception_ptr> failures(n_dt + n_dt * n_m);
  kernels::parallel::for_each_index(n_dt + n_dt * n_m, [&](std::size_t job) {
    try {
      if (job < n_dt) {
        refs[job] = oracle::reference_run(def, study.m_ref, study.dt_ref, dt_cfgs[job]);
      } else {
        const std::size_t k = job - n_dt;
        members[k] = solve(def, options.modes[k % n_m], dt_cfgs[k / n_m]);
      }
    } catch (...) {
      failures[job] = std::current_exception();
    }
  });
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  for (std::size_t i = 0; i < n_dt; ++i) {
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_m; ++j) {
      const Trajectory& t = members[i * n_m + j];
      ConvergeRow row{options.modes[j], options.dts[i], std::numeric_limits<double>::quiet_NaN(),
                      t.diverged || refs[i].diverged};
      if (!row.diverged) row.error = oracle::trajectory_error(t, refs[i]);
      study.diverged = study.diverged || row.diverged;
      if (!row.diverged) {
        if (row.error > previous + options.noise_floor) study.monotone = false;
        previous = row.error;
      }
      study.rows.push_back(row);
    }
  }
  return study;
}

// ---------------------------------------------------------------------------

json DecayStudy::to_json() const {
  json j;
  j["T"] = run.trajectory.config.T;
  j["sup_By_norm_sq"] = sup_By_norm_sq;
  j["tail_sup_By_norm_sq"] = tail_sup_By_norm_sq;
  j["radius"] = radius;
  j["contained"] = contained;
  j["within_radius"] = within_radius;
  j["decay"] = run.decay ? decay_json(*run.decay) : json(nullptr);
  j["diverged"] = run.trajectory.diverged;
  j["monitors"] = run.monitors.to_json();
  j["passed"] = contained && within_radius && run.monitors.all_passed();
  return j;
}

DecayStudy decay_study(const RunConfig& cfg, std::optional<double> T) {
  if (cfg.problem.fs.kind() != ForcingKind::Zero)
    throw ConfigError("decay: requires zero forcing");
  if (!condition_iv_constant(cfg.problem.nl, cfg.problem.domain.length))
    throw ConfigError("decay: requires p > 2 and a nonlinearity kind with a known c0 (r = p/2 > 1)");

  RunConfig long_run = cfg;
  long_run.time.T = T.value_or(kDecayDefaultT);
  if (long_run.time.T < 0.0) throw ConfigError("decay: T must be >= 0");
  try {
    step_count(long_run.time);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("decay: ") + e.what());
  }
  long_run.monitors.options.decay = true;

  DecayStudy study;
  study.run = execute_run(long_run);
  study.radius = decay_radius(*study.run.decay);
  const double tail_start = 0.8 * long_run.time.T;
  for (const auto& s : study.run.trajectory.samples) {
    study.sup_By_norm_sq = std::max(study.sup_By_norm_sq, s.energy.By_norm_sq);
    if (s.energy.t >= tail_start)
      study.tail_sup_By_norm_sq = std::max(study.tail_sup_By_norm_sq, s.energy.By_norm_sq);
  }
  const MonitorCheck* check = study.run.monitors.find("decay_bound");
  study.contained = check && check->passed && !study.run.trajectory.diverged;
  study.within_radius = study.tail_sup_By_norm_sq <= study.radius + kRadiusSlack;
  return study;
}

// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const ConditionReport report = verify_problem(cfg);
  print_json(out, report.to_json());
  return report.all_passed() || cfg.verify.override_failures ? kExitPass : kExitFailure;
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ConditionReport verification = verify_problem(cfg);
  if (verification_blocks(verification, cfg, err)) {
    print_json(out, {{"passed", false}, {"verification", verification.to_json()}});
    return kExitFailure;
  }
  RunOutcome outcome = execute_run(cfg);
  outcome.verification = verification;

  const json report = run_report(outcome);
  write_file_atomic(resolve_output_path(cfg.output.csv_path), trajectory_csv(outcome));
  write_file_atomic(resolve_output_path(cfg.output.report_path), report.dump(2) + '\n');
  print_json(out, {{"passed", report["passed"]},
                   {"diverged", outcome.trajectory.diverged},
                   {"samples", outcome.trajectory.samples.size()},
                   {"csv_path", resolve_output_path(cfg.output.csv_path).string()},
                   {"report_path", resolve_output_path(cfg.output.report_path).string()},
                   {"monitors", outcome.monitors.to_json()}});

  if (outcome.trajectory.diverged) {
    err << "error: trajectory diverged at t = " << outcome.trajectory.diverged_at << " ("
        << outcome.trajectory.divergence_reason << "); CSV holds samples up to t = "
        << outcome.trajectory.samples.back().state.t << '\n';
    return kExitDivergence;
  }
  return outcome.monitors.all_passed() ? kExitPass : kExitFailure;
}

int cmd_converge(const RunConfig& cfg, const ConvergeOptions& options, std::ostream& out,
                 std::ostream& err) {
  const ConvergeStudy study = converge_study(cfg, options);
  if (options.csv_path) {
    std::string csv = "modes,dt,error\n";
    for (const auto& r : study.rows)
      csv += std::to_string(r.modes) + ',' + format_double(r.dt) + ',' +
             (std::isfinite(r.error) ? format_double(r.error) : std::string()) + '\n';
    write_file_atomic(resolve_output_path(*options.csv_path), csv);
  }
  print_json(out, study.to_json());
  if (study.diverged) {
    err << "error: a member or reference run diverged; results are partial\n";
    return kExitDivergence;
  }
  if (!study.monotone) {
    err << "error: error does not decrease monotonically in the mode count\n";
    return kExitFailure;
  }
  return kExitPass;
}

int cmd_decay(const RunConfig& cfg, std::optional<double> T, std::ostream& out,
              std::ostream& err) {
  const ConditionReport verification = verify_problem(cfg);
  if (verification_blocks(verification, cfg, err)) {
    print_json(out, {{"passed", false}, {"verification", verification.to_json()}});
    return kExitFailure;
  }
  DecayStudy study = decay_study(cfg, T);
  study.run.verification = verification;
  print_json(out, study.to_json());
  if (study.run.trajectory.diverged) return kExitDivergence;
  return study.contained && study.within_radius && study.run.monitors.all_passed() ? kExitPass
                                                                                     : kExitFailure;
}

}  // namespace sgwave
