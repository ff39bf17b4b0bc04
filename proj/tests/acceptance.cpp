// Acceptance criteria A1-A8. One PASS/FAIL line per criterion; the exit
// status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sgwave/commands.hpp"
#include "sgwave/estimates.hpp"
#include "sgwave/oracle.hpp"
#include "support.hpp"

using namespace sgwave;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

SolverConfig solver(double T, double dt, int stride = 1) {
  SolverConfig cfg;
  cfg.T = T;
  cfg.dt = dt;
  cfg.sample_stride = stride;
  return cfg;
}

ProblemDefinition cubic_parabola() {
  ProblemDefinition def;
  def.nl = NonlinearitySpec::cubic();
  def.initial.x0 = [](double x) { return x * (1.0 - x); };
  return def;
}

double max_relative_drift(const Trajectory& traj) {
  const double E0 = traj.samples.front().energy.energy;
  double worst = 0.0;
  for (const auto& s : traj.samples) worst = std::max(worst, std::abs(s.energy.energy - E0) / E0);
  return worst;
}

Outcome a1_energy_conservation() {
  const auto def = cubic_parabola();
  const auto coarse = solve(def, 16, solver(10.0, 1e-3));
  const auto fine = solve(def, 16, solver(10.0, 5e-4));
  const double d1 = max_relative_drift(coarse), d2 = max_relative_drift(fine);
  const bool ok = !coarse.diverged && !fine.diverged && d1 <= 1e-6 && d1 >= 8.0 * d2;
  return {ok, fmt("max |E-E0|/E0 = %.3e (dt=1e-3), %.3e (dt=5e-4), shrink %.1fx", d1, d2, d1 / d2)};
}

Outcome a2_gronwall_envelope() {
  auto def = cubic_parabola();
  def.fs = ForcingSpec::affine(0.1, 0.1, 0.1, 0.1);
  const auto traj = solve(def, 16, solver(5.0, 1e-3));
  const auto& first = traj.samples.front().energy;
  const auto gp = derive_gronwall(def.nl, def.fs, *traj.problem.op, first);
  double worst_ratio = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  for (const auto& s : traj.samples) {
    const double env = gronwall_envelope(gp, s.energy.t);
    if (!(s.energy.energy < env)) ++violations;
    worst_ratio = std::max(worst_ratio, s.energy.energy / env);
  }
  const auto report = monitor(traj, gp, std::nullopt);
  const auto* check = report.find("gronwall_envelope");
  const bool ok = !traj.diverged && violations == 0 && check && check->passed &&
                  check->violations == 0;
  return {ok, fmt("%zu samples, %zu violations, max E/envelope = %.3e", traj.samples.size(),
                  violations, worst_ratio)};
}

Outcome a3_galerkin_convergence() {
  ProblemDefinition def;
  def.nl = NonlinearitySpec::cubic();
  def.initial = InitialData::from_modes(def.domain, {0.1}, {});
  const auto cfg = solver(1.0, 1e-3, 10);
  const auto ref = oracle::reference_run(def, 64, 1e-3, cfg);
  double err[3];
  const int modes[3] = {8, 16, 32};
  for (int i = 0; i < 3; ++i) err[i] = oracle::trajectory_error(solve(def, modes[i], cfg), ref);
  const bool ok = err[0] > err[1] && err[1] > err[2] && err[2] <= 1e-6;
  return {ok, fmt("err(8) = %.3e, err(16) = %.3e, err(32) = %.3e vs m_ref = 64", err[0], err[1],
                  err[2])};
}

Outcome a4_decay() {
  const auto def = cubic_parabola();
  const auto traj = solve(def, 16, solver(50.0, 1e-3));
  const auto& first = traj.samples.front().energy;
  const auto dp = derive_decay(def.nl, def.fs, *traj.problem.op, first);
  const double radius = decay_radius(dp);
  std::size_t outside = 0;
  double tail_sup = 0.0;
  for (const auto& s : traj.samples) {
    if (s.energy.By_norm_sq > decay_bound(dp, first.By_norm_sq, s.energy.t)) ++outside;
    if (s.energy.t >= 40.0) tail_sup = std::max(tail_sup, s.energy.By_norm_sq);
  }
  const bool ok = !traj.diverged && outside == 0 && tail_sup <= radius + 1e-9;
  return {ok, fmt("%zu samples above decay_bound; sup_[40,50] ||By||^2 = %.3e <= radius %.6f "
                  "(delta = %.3f, k = %.0f)",
                  outside, tail_sup, radius, dp.delta, dp.k)};
}

double linear_error(double dt) {
  ProblemDefinition def;
  def.initial = InitialData::from_modes(def.domain, {1.0}, {});
  const auto traj = solve(def, 8, solver(10.0, dt));
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    double sq = std::pow(s.state.a[0] - std::cos(kPi * s.state.t), 2);
    for (std::size_t k = 1; k < s.state.a.size(); ++k) sq += s.state.a[k] * s.state.a[k];
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

Outcome a5_linear_oracle() {
  const double e1 = linear_error(1e-3), e2 = linear_error(5e-4);
  const double ratio = e1 / e2;
  const bool ok = e1 <= 1e-7 && ratio >= 14.0 && ratio <= 18.0;
  return {ok, fmt("max error vs cos(pi t) = %.3e, dt-halving ratio = %.2f", e1, ratio)};
}

Outcome a6_closed_forms() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> times{0.25, 0.5, 1.0, 2.0};
  double worst_env = 0.0, worst_decay = 0.0;

  for (int trial = 0; trial < 100; ++trial) {
    GronwallParams gp;
    gp.C0 = 3.0 * u(rng);
    gp.C1 = 2.0 * u(rng);
    gp.E_init = 5.0 * u(rng);
    const auto ode = oracle::scalar_comparison(oracle::GronwallLinearOde{gp.C0, gp.C1, gp.E_init}, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double closed = gronwall_envelope(gp, times[i]);
      worst_env = std::max(worst_env, std::abs(closed - ode[i]) / std::abs(ode[i]));
    }
  }

  for (int trial = 0; trial < 100; ++trial) {
    DecayParams dp;
    dp.r = 1.2 + 1.8 * u(rng);
    dp.c = 0.2 + 2.0 * u(rng);
    dp.C = u(rng);
    dp.k = 1.5 + 1.5 * u(rng);
    dp.delta = (0.1 + 0.9 * u(rng)) * admissible_delta(dp.r, dp.c, dp.C, dp.k);
    const double By0 = 10.0 * u(rng);
    const double w0 = By0 + dp.k * dp.C;
    const auto w = oracle::scalar_comparison(oracle::BernoulliOde{dp.delta, dp.r, w0}, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double closed = decay_bound(dp, By0, times[i]);
      const double reference = w[i] - dp.k * dp.C;
      worst_decay = std::max(worst_decay, std::abs(closed - reference) / std::abs(reference));
    }
  }
  const bool ok = worst_env <= 1e-7 && worst_decay <= 1e-7;
  return {ok, fmt("max relative deviation: envelope %.3e, decay bound %.3e (100 sets each)",
                  worst_env, worst_decay)};
}

Outcome a7_verifiers() {
  const auto op = sgwave::testing::dirichlet(8);
  const auto power = verify_conditions(NonlinearitySpec::power_law(4.0), op, 10000);
  const bool power_ok = power.find("monotonicity")->passed && power.find("growth")->passed &&
                        power.find("coercivity")->passed;
  const auto negated = NonlinearitySpec::custom([](double) { return -1.0; }, 2.0, {},
                                                [](double u) { return -u; });
  const auto neg = verify_conditions(negated, op, 10000);
  const bool neg_caught = !neg.find("monotonicity")->passed;
  const auto forcing = verify_g(ForcingSpec::affine(0.1, 0.2, 0.3, 0.2), op, 10000);
  const bool g0_caught = !forcing.find("g0_bound")->passed;
  return {power_ok && neg_caught && g0_caught,
          fmt("power_law p=4 %s on 1e4 pairs; F(u)=-u %s; understated g0 %s",
              power_ok ? "passes" : "FAILS", neg_caught ? "falsified" : "NOT falsified",
              g0_caught ? "falsified" : "NOT falsified")};
}

Outcome a8_potential_consistency() {
  std::mt19937_64 rng(8);
  const auto op = sgwave::testing::dirichlet(16);
  const auto nl = NonlinearitySpec::cubic();
  const double eps = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = sgwave::testing::random_unit_field(op, rng);
    const auto z = sgwave::testing::random_unit_field(op, rng);
    const double diff =
        (potential_Phi(x + eps * z, nl).value - potential_Phi(x - eps * z, nl).value) / (2 * eps);
    worst = std::max(worst, std::abs(diff - dual_pairing_F(x, z, nl)));
  }
  return {worst <= 1e-6, fmt("max |central difference - <F(x),z>| = %.3e on 100 pairs", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"A1 energy conservation", a1_energy_conservation},
      {"A2 gronwall envelope", a2_gronwall_envelope},
      {"A3 galerkin convergence", a3_galerkin_convergence},
      {"A4 decay bound and absorbing ball", a4_decay},
      {"A5 linear oracle", a5_linear_oracle},
      {"A6 closed-form bounds", a6_closed_forms},
      {"A7 condition verifiers", a7_verifiers},
      {"A8 potential consistency", a8_potential_consistency},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s [%.2fs]\n", out.passed ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
    if (!out.passed) ++failures;
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
