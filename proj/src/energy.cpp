#include "sgwave/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace sgwave {

SpectralField velocity_channel(const State& s, const OperatorPtr& op) {
  SpectralField v(op);
  const auto lambda = op->eigenvalues();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = s.adot[k] / std::sqrt(lambda[k]);
  return v;
}

EnergyRecord energy_record(const State& s, const Problem& problem) {
  const OperatorPtr& op = problem.op;
  const auto m = static_cast<std::size_t>(op->modes());
  if (s.a.size() != m || s.adot.size() != m)
    throw std::invalid_argument("energy_record: state size does not match the operator");

  const auto lambda = op->eigenvalues();
  EnergyRecord rec;
  rec.t = s.t;
  for (std::size_t k = 0; k < m; ++k) {
    rec.kinetic += s.adot[k] * s.adot[k] / lambda[k];
    rec.By_norm_sq += s.a[k] * s.a[k] / lambda[k];
  }
  rec.kinetic *= 0.5;

  const SpectralField x(op, s.a);
  rec.potential = potential_Phi(x, problem.nl).value;
  rec.energy = rec.kinetic + rec.potential;

  if (problem.fs.kind() != ForcingKind::Zero) {
    const SpectralField g = apply_g(problem.fs, x, velocity_channel(s, op));
    for (std::size_t k = 0; k < m; ++k) rec.forcing_power += g[k] * s.adot[k] / lambda[k];
  }
  return rec;
}

}  // namespace sgwave
