#include "sgwave/galerkin_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sgwave {

const char* to_string(Integrator integrator) {
  return integrator == Integrator::RK4 ? "rk4" : "stormer_verlet";
}

long long step_count(const SolverConfig& cfg) {
  if (!(cfg.T >= 0.0) || !std::isfinite(cfg.T)) throw std::invalid_argument("T must be >= 0");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw std::invalid_argument("dt must be > 0");
  if (cfg.sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");
  if (cfg.T == 0.0) return 0;
  if (cfg.dt > cfg.T) throw std::invalid_argument("dt must not exceed T");
  const double ratio = cfg.T / cfg.dt;
  const auto steps = static_cast<long long>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("T must be an integer multiple of dt");
  if (steps % cfg.sample_stride != 0)
    throw std::invalid_argument("sample_stride must divide the step count T/dt");
  return steps;
}

void validate(const SolverConfig& cfg, const Problem& problem) {
  step_count(cfg);
  if (!(cfg.blowup_ceiling > 0.0)) throw std::invalid_argument("blowup ceiling must be > 0");
  if (cfg.integrator == Integrator::StormerVerlet && problem.fs.velocity_dependent())
    throw std::invalid_argument(
        "StormerVerlet requires velocity-independent forcing (g2 = 0)");
}

ProjectedInitialData project_initial_data(std::span<const double> x0_samples,
                                          std::span<const double> x1_samples,
                                          const OperatorPtr& op) {
  auto finite = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
  };
  if (!finite(x0_samples) || !finite(x1_samples))
    throw std::invalid_argument("initial data contains non-finite samples");

  ProjectedInitialData out;
  const SpectralField a0 = from_grid(x0_samples, op);
  const SpectralField a1 = from_grid(x1_samples, op);
  out.state.a.assign(a0.coeffs().begin(), a0.coeffs().end());
  out.state.adot.assign(a1.coeffs().begin(), a1.coeffs().end());
  out.state.t = 0.0;

  auto tail = [&](std::span<const double> samples, const SpectralField& proj) {
    const double total = grid_inner(*op, samples, samples);
    const double kept = norm_H(proj);
    return std::sqrt(std::max(0.0, total - kept * kept));
  };
  out.x0_tail_norm = tail(x0_samples, a0);
  out.x1_tail_norm = tail(x1_samples, a1);
  return out;
}

std::vector<double> sample_on_grid(const OperatorSpec& op, const SpatialFn& fn) {
  std::vector<double> out;
  out.reserve(op.nodes().size());
  for (double x : op.nodes()) out.push_back(fn(x));
  return out;
}

InitialData InitialData::from_modes(const DomainSpec& domain, std::vector<double> x0_coeffs,
                                    std::vector<double> x1_coeffs) {
  DomainSpec basis_domain = domain;
  basis_domain.grid_points = 0;
  basis_domain.allow_poincare_violation = true;
  const int n = static_cast<int>(std::max<std::size_t>({x0_coeffs.size(), x1_coeffs.size(), 1}));
  const OperatorPtr basis = build_operator(basis_domain, n);
  auto expand = [basis](std::vector<double> c) -> SpatialFn {
    return [basis, c = std::move(c)](double x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k)
        acc += c[k] * basis->basis_function(static_cast<int>(k), x);
      return acc;
    };
  };
  return {expand(std::move(x0_coeffs)), expand(std::move(x1_coeffs))};
}

Problem ProblemDefinition::at_modes(int modes) const {
  return Problem{build_operator(domain, modes), nl, fs};
}

std::vector<double> acceleration(const State& s, const Problem& problem) {
  const OperatorPtr& op = problem.op;
  const SpectralField x(op, s.a);
  const SpectralField Fx = apply_F(x, problem.nl);
  const auto lambda = op->eigenvalues();
  std::vector<double> acc(s.a.size());
  for (std::size_t j = 0; j < acc.size(); ++j) acc[j] = -lambda[j] * Fx[j];
  if (problem.fs.kind() != ForcingKind::Zero) {
    const SpectralField g = apply_g(problem.fs, x, velocity_channel(s, op));
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += g[j];
  }
  return acc;
}

namespace {

void axpy(std::vector<double>& out, const std::vector<double>& base, double h,
          const std::vector<double>& dir) {
  out.resize(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + h * dir[i];
}

void rk4_step(State& s, double dt, const Problem& problem) {
  State stage;
  const auto k1a = s.adot;
  const auto k1v = acceleration(s, problem);

  axpy(stage.a, s.a, 0.5 * dt, k1a);
  axpy(stage.adot, s.adot, 0.5 * dt, k1v);
  const auto k2a = stage.adot;
  const auto k2v = acceleration(stage, problem);

  axpy(stage.a, s.a, 0.5 * dt, k2a);
  axpy(stage.adot, s.adot, 0.5 * dt, k2v);
  const auto k3a = stage.adot;
  const auto k3v = acceleration(stage, problem);

  axpy(stage.a, s.a, dt, k3a);
  axpy(stage.adot, s.adot, dt, k3v);
  const auto k4a = stage.adot;
  const auto k4v = acceleration(stage, problem);

  for (std::size_t i = 0; i < s.a.size(); ++i) {
    s.a[i] += dt / 6.0 * (k1a[i] + 2.0 * k2a[i] + 2.0 * k3a[i] + k4a[i]);
    s.adot[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
  }
}

// Velocity Verlet; `acc` holds the acceleration at the current position on
// entry and at the new position on exit.
void verlet_step(State& s, double dt, const Problem& problem, std::vector<double>& acc) {
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    s.adot[i] += 0.5 * dt * acc[i];
    s.a[i] += dt * s.adot[i];
  }
  acc = acceleration(s, problem);
  for (std::size_t i = 0; i < s.a.size(); ++i) s.adot[i] += 0.5 * dt * acc[i];
}

std::string check_blowup(const State& s, double ceiling) {
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    if (!std::isfinite(s.a[i]) || !std::isfinite(s.adot[i])) return "non-finite state";
    if (std::abs(s.a[i]) > ceiling) return "modal amplitude exceeded ceiling";
  }
  return {};
}

}  // namespace

Trajectory integrate(const State& initial, const SolverConfig& cfg, const Problem& problem) {
  validate(cfg, problem);
  const auto m = static_cast<std::size_t>(problem.op->modes());
  if (initial.a.size() != m || initial.adot.size() != m)
    throw std::invalid_argument("integrate: initial state size does not match the operator");

  Trajectory traj;
  traj.problem = problem;
  traj.config = cfg;

  State s = initial;
  traj.samples.push_back({s, energy_record(s, problem)});

  const long long steps = step_count(cfg);
  std::vector<double> acc;
  if (cfg.integrator == Integrator::StormerVerlet && steps > 0) acc = acceleration(s, problem);

  for (long long n = 1; n <= steps; ++n) {
    if (cfg.integrator == Integrator::RK4)
      rk4_step(s, cfg.dt, problem);
    else
      verlet_step(s, cfg.dt, problem, acc);
    // Computing t from the step index keeps the sample times exact multiples of dt.
    s.t = initial.t + static_cast<double>(n) * cfg.dt;

    if (auto reason = check_blowup(s, cfg.blowup_ceiling); !reason.empty()) {
      traj.diverged = true;
      traj.diverged_at = s.t;
      traj.divergence_reason = std::move(reason);
      break;
    }
    if (n % cfg.sample_stride == 0) traj.samples.push_back({s, energy_record(s, problem)});
  }
  return traj;
}

Trajectory solve(const ProblemDefinition& def, int modes, const SolverConfig& cfg) {
  const Problem problem = def.at_modes(modes);
  const auto x0 = sample_on_grid(*problem.op, def.initial.x0);
  const auto x1 = sample_on_grid(*problem.op, def.initial.x1);
  const ProjectedInitialData init = project_initial_data(x0, x1, problem.op);
  return integrate(init.state, cfg, problem);
}

}  // namespace sgwave
