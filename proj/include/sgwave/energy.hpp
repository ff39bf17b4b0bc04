#pragma once

#include <vector>

#include "sgwave/nonlinearity.hpp"
#include "sgwave/spectral_core.hpp"

namespace sgwave {

/// Operator, nonlinearity and forcing of one Galerkin system.
struct Problem {
  OperatorPtr op;
  NonlinearitySpec nl = NonlinearitySpec::linear();
  ForcingSpec fs = ForcingSpec::zero();
};

/// Modal positions a_k = <x_m, e_k> and velocities a_k'.
struct State {
  std::vector<double> a;
  std::vector<double> adot;
  double t = 0.0;
};

/// Energy bookkeeping with y = A^{-1} x:
///   kinetic      = 1/2 ||B y_t||^2 = 1/2 sum adot_k^2 / lambda_k
///   potential    = Phi(x)
///   By_norm_sq   = ||B y||^2      = sum a_k^2 / lambda_k
///   forcing_power = <g(x, B y_t), y_t>
struct EnergyRecord {
  double t = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double energy = 0.0;
  double By_norm_sq = 0.0;
  double forcing_power = 0.0;
};

/// B y_t = A^{-1/2} x_t as a field (the second argument of g).
SpectralField velocity_channel(const State& s, const OperatorPtr& op);

EnergyRecord energy_record(const State& s, const Problem& problem);

}  // namespace sgwave
