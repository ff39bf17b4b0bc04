#pragma once

// A-priori bounds as runtime monitors on a computed trajectory.
//
// Gronwall: with E = 1/2 ||B y_t||^2 + Phi(x),
//   E' <= C0 E + C1   =>   E(t) <= e^{C0 t} E_init + (C1/C0)(e^{C0 t} - 1),
//   E_init = ||B y_1||^2 + 2 Phi(x0).
// Constants from Young's inequality and ||x||_H^2 <= c~ (Phi + 1):
//   c~ = c_emb^2 max(p/b0, 1),  C0 = max(2 c~ g1^2, 4 g2^2 + 2),  C1 = 2 g1^2 c~ + 2 g0^2.
//
// Decay (g = 0, ||x||_H^p <= c0 Phi): z = ||B y||^2 satisfies
//   z' <= z - c z^r + C,  r = p/2,  c = 2/c0,  C = ||B y_1||^2 + 2 Phi(x0).
// When delta (z + kC)^r <= c z^r + (k-1) C for all z >= 0, w = z + kC obeys the
// Bernoulli inequality w' <= w - delta w^r, whose comparison solution gives
//   z(t) <= e^t w0 / [1 + delta w0^{r-1}(e^{(r-1)t} - 1)]^{1/(r-1)} - kC
// with limit delta^{-1/(r-1)} - kC as t -> infinity.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgwave/galerkin_solver.hpp"

namespace sgwave {

struct GronwallParams {
  double C0 = 0.0;
  double C1 = 0.0;
  double c_tilde = 1.0;
  double E_init = 0.0;
  bool conservation = false;  // zero forcing: the energy is an invariant
};

/// Throws std::invalid_argument when b0 <= 0.
GronwallParams derive_gronwall(const NonlinearitySpec& nl, const ForcingSpec& fs,
                               const OperatorSpec& op, const EnergyRecord& initial);

double gronwall_envelope(const GronwallParams& gp, double t);

struct DecayParams {
  double r = 2.0;
  double c = 1.0;
  double C = 0.0;
  double k = 2.0;
  double delta = 0.5;
};

/// inf over z >= 0 of (c z^r + (k-1) C) / (z + kC)^r: the largest delta for
/// which the Bernoulli rewrite of z' <= z - c z^r + C holds.
double admissible_delta(double r, double c, double C, double k);

/// Throws when the kind has no condition-(iv) constant (p <= 2, Custom) or
/// the forcing is not Zero.
DecayParams derive_decay(const NonlinearitySpec& nl, const ForcingSpec& fs, const OperatorSpec& op,
                         const EnergyRecord& initial, double k = 2.0,
                         std::optional<double> delta_override = std::nullopt);

/// Throws std::invalid_argument when r <= 1, k <= 1, delta <= 0 or delta
/// exceeds (k-1)/(k^r C^r).
void validate(const DecayParams& dp);

double decay_bound(const DecayParams& dp, double By0_norm_sq, double t);
/// t -> infinity limit: delta^{-1/(r-1)} - kC.
double decay_radius(const DecayParams& dp);

struct MonitorTolerances {
  double identity = 1e-6;      // times (1 + |E(0)|)
  double envelope = 1e-9;      // relative
  double conservation = 1e-6;  // times |E(0)|
  double decay = 1e-9;         // relative
};

struct MonitorOptions {
  bool identity = true;
  bool envelope = true;
  bool conservation = true;
  bool decay = true;
  MonitorTolerances tol;
};

struct MonitorCheck {
  std::string name;
  bool passed = true;
  double worst_violation = 0.0;  // max of (lhs - rhs); <= tolerance passes
  double t_worst = 0.0;
  double tolerance = 0.0;
  std::size_t violations = 0;
};

/// Per-sample values aligned with Trajectory::samples.
struct MonitorRow {
  double gronwall_envelope = 0.0;
  std::optional<double> decay_bound;
  double identity_residual = 0.0;
};

struct MonitorReport {
  std::vector<MonitorCheck> checks;
  std::vector<MonitorRow> rows;
  bool diverged = false;
  double diverged_at = 0.0;

  bool all_passed() const;
  const MonitorCheck* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Energy-identity residual (trapezoidal forcing power), Gronwall domination,
/// and in conservation mode the energy drift and, given DecayParams, the decay bound.
MonitorReport monitor(const Trajectory& traj, const GronwallParams& gp,
                      const std::optional<DecayParams>& dp, const MonitorOptions& options = {});

}  // namespace sgwave
