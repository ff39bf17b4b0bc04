#pragma once

// Galerkin ODE system for the modal coefficients of x_m = sum a_k e_k:
//
//   a_j'' = -lambda_j <F(x_m), e_j> + <g(x_m, B y_mt), e_j>,   B y_mt = A^{-1/2} x_mt,
//
// integrated with fixed-step RK4 or Stormer-Verlet (velocity-independent g only).

#include <functional>
#include <string>
#include <vector>

#include "sgwave/energy.hpp"

namespace sgwave {

enum class Integrator { RK4, StormerVerlet };

const char* to_string(Integrator integrator);

struct SolverConfig {
  double T = 1.0;
  double dt = 1e-3;
  Integrator integrator = Integrator::RK4;
  int sample_stride = 1;
  double blowup_ceiling = 1e12;
};

/// Step count T/dt; throws unless it is an integer multiple of sample_stride.
long long step_count(const SolverConfig& cfg);
void validate(const SolverConfig& cfg, const Problem& problem);

struct TrajectorySample {
  State state;
  EnergyRecord energy;
};

struct Trajectory {
  Problem problem;
  SolverConfig config;
  std::vector<TrajectorySample> samples;
  bool diverged = false;
  double diverged_at = 0.0;
  std::string divergence_reason;
};

struct ProjectedInitialData {
  State state;
  double x0_tail_norm = 0.0;  // ||x0 - P_m x0|| in the grid norm
  double x1_tail_norm = 0.0;
};

/// Samples on the operator grid -> modal coefficients (spectral truncation).
ProjectedInitialData project_initial_data(std::span<const double> x0_samples,
                                          std::span<const double> x1_samples,
                                          const OperatorPtr& op);

using SpatialFn = std::function<double(double)>;

std::vector<double> sample_on_grid(const OperatorSpec& op, const SpatialFn& fn);

/// Initial positions and velocities as functions on [0, l], so the same data
/// can be projected onto any number of modes.
struct InitialData {
  SpatialFn x0 = [](double) { return 0.0; };
  SpatialFn x1 = [](double) { return 0.0; };

  /// Fields given by modal coefficients in the eigenbasis of `domain`.
  static InitialData from_modes(const DomainSpec& domain, std::vector<double> x0_coeffs,
                                std::vector<double> x1_coeffs);
};

/// Everything except the resolution: lets convergence studies rebuild the
/// same problem at several mode counts.
struct ProblemDefinition {
  DomainSpec domain;
  NonlinearitySpec nl = NonlinearitySpec::linear();
  ForcingSpec fs = ForcingSpec::zero();
  InitialData initial;

  Problem at_modes(int modes) const;
};

std::vector<double> acceleration(const State& s, const Problem& problem);

Trajectory integrate(const State& initial, const SolverConfig& cfg, const Problem& problem);

/// Builds the operator at `modes`, projects the initial data, integrates.
Trajectory solve(const ProblemDefinition& def, int modes, const SolverConfig& cfg);

}  // namespace sgwave
