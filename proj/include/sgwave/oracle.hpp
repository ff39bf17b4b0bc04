#pragma once

// Reference computations for tests. Nothing here calls into the estimates
// module; the closed-form bounds are checked against plain scalar RK4.

#include <functional>
#include <span>
#include <vector>

#include "sgwave/galerkin_solver.hpp"

namespace sgwave::oracle {

struct ModalPair {
  double a = 0.0;
  double adot = 0.0;
};

/// Solution of a'' = -lambda a: a0 cos(w t) + adot0 sin(w t)/w, w = sqrt(lambda).
ModalPair linear_exact(double lambda, double a0, double adot0, double t);

/// High-resolution run for error measurement. dt / dt_ref must be an integer
/// so that reference samples line up with those of a run at (dt, stride).
Trajectory reference_run(const ProblemDefinition& def, int m_ref, double dt_ref,
                         const SolverConfig& test_cfg);

/// max over samples of ||x_m(t) - x_ref(t)||_H, modes beyond m counted in full.
/// Throws when sample times differ or the operators are incompatible.
double trajectory_error(const Trajectory& test, const Trajectory& ref);

/// z' = C0 z + C1, z(0) = z0.
struct GronwallLinearOde {
  double C0 = 0.0;
  double C1 = 0.0;
  double z0 = 0.0;
};

/// w' = w - delta w^r, w(0) = w0.
struct BernoulliOde {
  double delta = 0.0;
  double r = 2.0;
  double w0 = 0.0;
};

/// Dense fixed-step RK4 of the scalar ODE, values at each entry of t_grid (ascending, >= 0).
std::vector<double> scalar_comparison(const GronwallLinearOde& ode, std::span<const double> t_grid,
                                      double dt = 1e-5);
std::vector<double> scalar_comparison(const BernoulliOde& ode, std::span<const double> t_grid,
                                      double dt = 1e-5);

/// Bernoulli closed form for r = 2: e^t w0 / [1 + delta w0 (e^t - 1)].
double bernoulli_r2_closed_form(double delta, double w0, double t);

/// Composite Simpson on [a, b] with `panels` (even) subintervals.
double simpson(const std::function<double(double)>& f, double a, double b, int panels = 4096);

/// <f, sqrt(2/l) sin(k pi x / l)> on (0, l) by composite Simpson.
double sine_coefficient(const std::function<double(double)>& f, int k, double length,
                        int panels = 8192);

}  // namespace sgwave::oracle
