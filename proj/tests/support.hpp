#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "sgwave/spectral_core.hpp"

namespace sgwave::testing {

inline SpectralField random_field(const OperatorPtr& op, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(op->modes()));
  for (double& v : c) v = scale * unit(rng);
  return SpectralField(op, std::move(c));
}

/// Random field with ||x||_H = 1.
inline SpectralField random_unit_field(const OperatorPtr& op, std::mt19937_64& rng) {
  SpectralField x = random_field(op, rng);
  x *= 1.0 / norm_H(x);
  return x;
}

inline OperatorPtr dirichlet(int modes, double length = 1.0) {
  DomainSpec d;
  d.length = length;
  return build_operator(d, modes);
}

inline OperatorPtr periodic(int modes, double length) {
  DomainSpec d;
  d.length = length;
  d.bc = BoundaryKind::PeriodicMeanZero;
  return build_operator(d, modes);
}

}  // namespace sgwave::testing
