#include "sgwave/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sgwave {

GronwallParams derive_gronwall(const NonlinearitySpec& nl, const ForcingSpec& fs,
                               const OperatorSpec& op, const EnergyRecord& initial) {
  const GrowthConstants& k = nl.constants();
  if (!(k.b0 > 0.0)) throw std::invalid_argument("derive_gronwall: coercivity constant b0 must be > 0");

  GronwallParams gp;
  const double c_emb = embedding_constant(nl.p(), op.domain().length);
  gp.c_tilde = c_emb * c_emb * std::max(nl.p() / k.b0, 1.0);
  gp.E_init = 2.0 * initial.kinetic + 2.0 * initial.potential;

  if (fs.kind() == ForcingKind::Zero) {
    gp.conservation = true;
    return gp;
  }
  const double g0 = fs.g0(), g1 = fs.g1(), g2 = fs.g2();
  gp.C0 = std::max(2.0 * gp.c_tilde * g1 * g1, 4.0 * g2 * g2 + 2.0);
  gp.C1 = 2.0 * g1 * g1 * gp.c_tilde + 2.0 * g0 * g0;
  return gp;
}

double gronwall_envelope(const GronwallParams& gp, double t) {
  if (t < 0.0) throw std::invalid_argument("gronwall_envelope: t must be >= 0");
  if (gp.C0 == 0.0) return gp.E_init + gp.C1 * t;
  const double growth = std::expm1(gp.C0 * t);
  return gp.E_init * (1.0 + growth) + gp.C1 / gp.C0 * growth;
}

double admissible_delta(double r, double c, double C, double k) {
  if (!(r > 1.0) || !(c > 0.0) || !(k > 1.0) || C < 0.0)
    throw std::invalid_argument("admissible_delta: need r > 1, c > 0, k > 1, C >= 0");
  if (C == 0.0) return c;
  // The ratio decreases up to z* = ((k-1)/(c k))^{1/(r-1)} and increases after.
  const double z_star = std::pow((k - 1.0) / (c * k), 1.0 / (r - 1.0));
  return (c * std::pow(z_star, r) + (k - 1.0) * C) / std::pow(z_star + k * C, r);
}

namespace {

double delta_cap(const DecayParams& dp) {
  if (dp.C == 0.0) return std::numeric_limits<double>::infinity();
  return (dp.k - 1.0) / (std::pow(dp.k, dp.r) * std::pow(dp.C, dp.r));
}

}  // namespace

void validate(const DecayParams& dp) {
  if (!(dp.r > 1.0)) throw std::invalid_argument("decay bound requires r = p/2 > 1");
  if (!(dp.k > 1.0)) throw std::invalid_argument("decay bound requires k > 1");
  if (!(dp.c > 0.0)) throw std::invalid_argument("decay bound requires c > 0");
  if (dp.C < 0.0) throw std::invalid_argument("decay bound requires C >= 0");
  if (!(dp.delta > 0.0)) throw std::invalid_argument("decay bound requires delta > 0");
  if (dp.delta > delta_cap(dp)) {
    std::ostringstream msg;
    msg << "delta = " << dp.delta << " exceeds (k-1)/(k^r C^r) = " << delta_cap(dp);
    throw std::invalid_argument(msg.str());
  }
}

DecayParams derive_decay(const NonlinearitySpec& nl, const ForcingSpec& fs, const OperatorSpec& op,
                         const EnergyRecord& initial, double k,
                         std::optional<double> delta_override) {
  if (fs.kind() != ForcingKind::Zero)
    throw std::invalid_argument("decay bound requires zero forcing");
  const auto c0 = condition_iv_constant(nl, op.domain().length);
  if (!c0) throw std::invalid_argument("decay bound requires p > 2 and a kind with a known c0");

  DecayParams dp;
  dp.r = nl.p() / 2.0;
  dp.c = 2.0 / *c0;
  dp.C = 2.0 * initial.kinetic + 2.0 * initial.potential;
  dp.k = k;
  if (!(k > 1.0)) throw std::invalid_argument("decay bound requires k > 1");

  const double admissible = admissible_delta(dp.r, dp.c, dp.C, dp.k);
  if (delta_override) {
    dp.delta = *delta_override;
    if (dp.delta > admissible) {
      std::ostringstream msg;
      msg << "delta = " << dp.delta << " breaks the comparison inequality (admissible <= "
          << admissible << ")";
      throw std::invalid_argument(msg.str());
    }
  } else {
    const double base = dp.C > 0.0 ? 0.5 * std::min(delta_cap(dp), 0.5) : 0.5;
    dp.delta = base <= admissible ? base : 0.5 * admissible;
  }
  validate(dp);
  return dp;
}

double decay_bound(const DecayParams& dp, double By0_norm_sq, double t) {
  if (t < 0.0) throw std::invalid_argument("decay_bound: t must be >= 0");
  const double kC = dp.k * dp.C;
  const double w0 = By0_norm_sq + kC;
  if (w0 == 0.0) return -kC;
  const double q = dp.delta * std::pow(w0, dp.r - 1.0);
  // [1 + q (e^{s} - 1)] e^{-s} with s = (r-1) t, so the e^t factor cancels.
  const double base = 1.0 + (1.0 - q) * std::expm1(-(dp.r - 1.0) * t);
  return w0 * std::pow(base, -1.0 / (dp.r - 1.0)) - kC;
}

double decay_radius(const DecayParams& dp) {
  return std::pow(dp.delta, -1.0 / (dp.r - 1.0)) - dp.k * dp.C;
}

// ---------------------------------------------------------------------------

bool MonitorReport::all_passed() const {
  return !diverged &&
         std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const MonitorCheck* MonitorReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json MonitorReport::to_json() const {
  nlohmann::json j;
  j["passed"] = all_passed();
  j["diverged"] = diverged;
  if (diverged) j["diverged_at"] = diverged_at;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"worst_violation", c.worst_violation},
                           {"t_worst", c.t_worst},
                           {"tolerance", c.tolerance},
                           {"violations", c.violations}});
  }
  return j;
}

namespace {

struct CheckAccumulator {
  MonitorCheck check;
  bool any = false;

  explicit CheckAccumulator(std::string name, double tolerance) {
    check.name = std::move(name);
    check.tolerance = tolerance;
  }

  // excess = lhs - rhs; allowed = absolute slack at this sample.
  void observe(double excess, double allowed, double t) {
    const bool violated = !std::isfinite(excess) || excess > allowed;
    if (violated) {
      ++check.violations;
      check.passed = false;
    }
    const double shown = std::isfinite(excess) ? excess : std::numeric_limits<double>::max();
    if (!any || shown > check.worst_violation) {
      check.worst_violation = shown;
      check.t_worst = t;
      any = true;
    }
  }
};

}  // namespace

MonitorReport monitor(const Trajectory& traj, const GronwallParams& gp,
                      const std::optional<DecayParams>& dp, const MonitorOptions& options) {
  MonitorReport report;
  report.diverged = traj.diverged;
  report.diverged_at = traj.diverged_at;
  const auto& samples = traj.samples;
  report.rows.resize(samples.size());
  if (samples.empty()) return report;

  const EnergyRecord& first = samples.front().energy;
  const double E0 = first.energy;
  const bool decay_active = dp.has_value() && gp.conservation;

  CheckAccumulator identity("energy_identity", options.tol.identity * (1.0 + std::abs(E0)));
  CheckAccumulator envelope("gronwall_envelope", options.tol.envelope);
  CheckAccumulator conservation("energy_conservation", options.tol.conservation * std::abs(E0));
  CheckAccumulator decay("decay_bound", options.tol.decay);

  for (std::size_t n = 0; n < samples.size(); ++n) {
    const EnergyRecord& rec = samples[n].energy;
    MonitorRow& row = report.rows[n];
    row.gronwall_envelope = gronwall_envelope(gp, rec.t);
    if (dp) row.decay_bound = decay_bound(*dp, first.By_norm_sq, rec.t);

    if (n > 0) {
      const EnergyRecord& prev = samples[n - 1].energy;
      const double work = 0.5 * (rec.forcing_power + prev.forcing_power) * (rec.t - prev.t);
      row.identity_residual = std::abs(rec.energy - prev.energy - work);
      if (options.identity) identity.observe(row.identity_residual, identity.check.tolerance, rec.t);
    }
    if (options.envelope)
      envelope.observe(rec.energy - row.gronwall_envelope,
                       options.tol.envelope * std::abs(row.gronwall_envelope), rec.t);
    if (gp.conservation && options.conservation)
      conservation.observe(std::abs(rec.energy - E0), conservation.check.tolerance, rec.t);
    if (decay_active && options.decay)
      decay.observe(rec.By_norm_sq - *row.decay_bound, options.tol.decay * std::abs(*row.decay_bound),
                    rec.t);
  }

  if (traj.diverged && options.envelope) {
    envelope.check.passed = false;
    ++envelope.check.violations;
    envelope.check.worst_violation = std::numeric_limits<double>::max();
    envelope.check.t_worst = traj.diverged_at;
  }

  if (options.identity) report.checks.push_back(identity.check);
  if (options.envelope) report.checks.push_back(envelope.check);
  if (gp.conservation && options.conservation) report.checks.push_back(conservation.check);
  if (decay_active && options.decay) report.checks.push_back(decay.check);
  return report;
}

}  // namespace sgwave
