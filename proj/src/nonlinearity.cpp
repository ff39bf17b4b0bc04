#include "sgwave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace sgwave {

const char* to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::Linear: return "linear";
    case NonlinearityKind::PowerLaw: return "power_law";
    case NonlinearityKind::CubicPrimitive: return "cubic";
    case NonlinearityKind::Custom: return "custom";
  }
  return "unknown";
}

const char* to_string(ForcingKind kind) {
  switch (kind) {
    case ForcingKind::Zero: return "zero";
    case ForcingKind::Affine: return "affine";
    case ForcingKind::CustomLipschitz: return "custom";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// NonlinearitySpec

NonlinearitySpec NonlinearitySpec::linear() {
  NonlinearitySpec nl;
  nl.kind_ = NonlinearityKind::Linear;
  nl.p_ = 2.0;
  return nl;
}

NonlinearitySpec NonlinearitySpec::power_law(double p) {
  if (!(p > 2.0) || !std::isfinite(p)) throw std::invalid_argument("power_law requires p > 2");
  NonlinearitySpec nl;
  nl.kind_ = NonlinearityKind::PowerLaw;
  nl.p_ = p;
  return nl;
}

NonlinearitySpec NonlinearitySpec::cubic() {
  NonlinearitySpec nl;
  nl.kind_ = NonlinearityKind::CubicPrimitive;
  nl.p_ = 4.0;
  return nl;
}

NonlinearitySpec NonlinearitySpec::custom(ScalarFn f, double p, GrowthConstants constants,
                                          std::optional<ScalarFn> primitive) {
  if (!f) throw std::invalid_argument("custom nonlinearity requires f");
  if (!(p >= 2.0) || !std::isfinite(p)) throw std::invalid_argument("custom nonlinearity requires p >= 2");
  NonlinearitySpec nl;
  nl.kind_ = NonlinearityKind::Custom;
  nl.p_ = p;
  nl.constants_ = constants;
  nl.f_ = std::move(f);
  nl.primitive_ = std::move(primitive);
  return nl;
}

NonlinearitySpec NonlinearitySpec::tabulated(std::vector<double> u, std::vector<double> f,
                                             double p, GrowthConstants constants) {
  if (u.size() < 2 || u.size() != f.size())
    throw std::invalid_argument("tabulated nonlinearity needs >= 2 (u, f) pairs of equal length");
  for (std::size_t i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1])) throw std::invalid_argument("tabulated u must be strictly increasing");

  struct Table {
    std::vector<double> u, f, slope, cum;
    std::size_t segment(double x) const {
      const auto it = std::upper_bound(u.begin(), u.end(), x);
      const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - u.begin() - 1, 0));
      return std::min(idx, u.size() - 2);
    }
    double value(double x) const {
      const std::size_t j = segment(x);
      return f[j] + slope[j] * (x - u[j]);
    }
    // antiderivative with G(u_0) = 0
    double antiderivative(double x) const {
      const std::size_t j = segment(x);
      const double d = x - u[j];
      return cum[j] + f[j] * d + 0.5 * slope[j] * d * d;
    }
  };
  auto table = std::make_shared<Table>();
  table->u = std::move(u);
  table->f = std::move(f);
  const std::size_t n = table->u.size();
  table->slope.resize(n - 1);
  table->cum.assign(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double h = table->u[j + 1] - table->u[j];
    table->slope[j] = (table->f[j + 1] - table->f[j]) / h;
    table->cum[j + 1] = table->cum[j] + 0.5 * (table->f[j] + table->f[j + 1]) * h;
  }
  const double origin = table->antiderivative(0.0);
  return custom([table](double x) { return table->value(x); }, p, constants,
                ScalarFn([table, origin](double x) { return table->antiderivative(x) - origin; }));
}

double NonlinearitySpec::f(double u) const {
  switch (kind_) {
    case NonlinearityKind::Linear: return 1.0;
    case NonlinearityKind::PowerLaw: return (p_ - 1.0) * std::pow(std::abs(u), p_ - 2.0);
    case NonlinearityKind::CubicPrimitive: return 3.0 * u * u;
    case NonlinearityKind::Custom: return f_(u);
  }
  return 0.0;
}

double NonlinearitySpec::F(double u) const {
  switch (kind_) {
    case NonlinearityKind::Linear: return u;
    case NonlinearityKind::PowerLaw: return std::pow(std::abs(u), p_ - 2.0) * u;
    case NonlinearityKind::CubicPrimitive: return u * u * u;
    case NonlinearityKind::Custom:
      return primitive_ ? (*primitive_)(u) : primitive_by_quadrature(*this, u);
  }
  return 0.0;
}

std::optional<double> NonlinearitySpec::potential_density(double u) const {
  switch (kind_) {
    case NonlinearityKind::Linear: return 0.5 * u * u;
    case NonlinearityKind::PowerLaw: return std::pow(std::abs(u), p_) / p_;
    case NonlinearityKind::CubicPrimitive: return 0.25 * u * u * u * u;
    case NonlinearityKind::Custom: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

// Adaptive Simpson with Richardson correction. Every panel samples its end
// points and midpoints, so a slope kink of a piecewise-smooth f cannot hide
// between nodes the way it can for an open Gauss rule.
double simpson_panel(const NonlinearitySpec& nl, double a, double b, double fa, double fm,
                     double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = nl.f(0.5 * (a + m)), frm = nl.f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth == 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_panel(nl, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_panel(nl, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double primitive_by_quadrature(const NonlinearitySpec& nl, double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("primitive_F: non-finite argument");
  if (r == 0.0) return 0.0;
  const double fa = nl.f(0.0), fm = nl.f(0.5 * r), fb = nl.f(r);
  const double whole = r / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_panel(nl, 0.0, r, fa, fm, fb, whole, 1e-14 * std::max(1.0, std::abs(whole)), 50);
}

double primitive_F(const NonlinearitySpec& nl, double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("primitive_F: non-finite argument");
  return nl.F(r);
}

// ---------------------------------------------------------------------------
// F on fields

namespace {

std::vector<double> pointwise_F(std::span<const double> samples, const NonlinearitySpec& nl) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = std::isfinite(samples[i]) ? nl.F(samples[i]) : samples[i];
  return out;
}

}  // namespace

SpectralField apply_F(const SpectralField& x, const NonlinearitySpec& nl) {
  const auto samples = to_grid(x);
  const auto values = pointwise_F(samples, nl);
  return from_grid(values, x.op());
}

double dual_pairing_F(const SpectralField& x, const SpectralField& z, const NonlinearitySpec& nl) {
  require_same_operator(x, z);
  const auto xs = to_grid(x);
  const auto zs = to_grid(z);
  return grid_inner(*x.op(), pointwise_F(xs, nl), zs);
}

PotentialValue potential_Phi_quadrature(const SpectralField& x, const NonlinearitySpec& nl,
                                        int nodes) {
  if (nodes < 1) throw std::invalid_argument("potential_Phi: need at least one node");
  const auto xs = to_grid(x);
  const OperatorSpec& op = *x.op();
  std::vector<double> scaled(xs.size());
  auto pairing_at = [&](double s) {
    for (std::size_t i = 0; i < xs.size(); ++i) scaled[i] = nl.F(s * xs[i]);
    return grid_inner(op, scaled, xs);
  };

  // Gauss-Legendre on [0, 1] from the nonnegative Legendre zeros on [-1, 1].
  const auto zeros = boost::math::legendre_p_zeros<double>(nodes);
  double acc = 0.0;
  for (double r : zeros) {
    const double dp = boost::math::legendre_p_prime(nodes, r);
    const double w = 2.0 / ((1.0 - r * r) * dp * dp);
    if (r == 0.0) {
      acc += 0.5 * w * pairing_at(0.5);
    } else {
      acc += 0.5 * w * (pairing_at(0.5 * (1.0 + r)) + pairing_at(0.5 * (1.0 - r)));
    }
  }
  return {acc, nodes};
}

PotentialValue potential_Phi(const SpectralField& x, const NonlinearitySpec& nl) {
  switch (nl.kind()) {
    case NonlinearityKind::Linear: {
      const double n = norm_H(x);
      return {0.5 * n * n, 0};
    }
    case NonlinearityKind::PowerLaw:
    case NonlinearityKind::CubicPrimitive: {
      const auto xs = to_grid(x);
      const double sum = kernels::serial::weighted_abs_power_sum(x.op()->weights(), xs, nl.p());
      return {sum / nl.p(), 0};
    }
    case NonlinearityKind::Custom: break;
  }
  return potential_Phi_quadrature(x, nl, 16);
}

double embedding_constant(double p, double length) {
  return std::pow(length, (p - 2.0) / (2.0 * p));
}

std::optional<double> condition_iv_constant(const NonlinearitySpec& nl, double length) {
  if (!(nl.p() > 2.0)) return std::nullopt;
  if (nl.kind() != NonlinearityKind::PowerLaw && nl.kind() != NonlinearityKind::CubicPrimitive)
    return std::nullopt;
  return nl.p() * std::pow(embedding_constant(nl.p(), length), nl.p());
}

// ---------------------------------------------------------------------------
// Reports

bool ConditionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ConditionCheck* ConditionReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void ConditionReport::append(const ConditionReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

nlohmann::json ConditionReport::to_json() const {
  nlohmann::json j;
  j["passed"] = all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json row{{"name", c.name}, {"passed", c.passed}, {"worst_margin", c.worst_margin}};
    if (c.witness_sample) row["witness_sample"] = *c.witness_sample;
    if (!c.witness.is_null()) row["witness"] = c.witness;
    j["checks"].push_back(std::move(row));
  }
  j["notes"] = notes;
  return j;
}

namespace {

constexpr double kVerifierTol = 1e-10;

struct RandomField {
  std::vector<double> coeffs;
};

std::vector<double> random_coeffs(std::mt19937_64& rng, int modes) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> amplitude(0.0, 10.0);
  const double a = amplitude(rng);
  std::vector<double> c(static_cast<std::size_t>(modes));
  for (double& v : c) v = a * unit(rng);
  return c;
}

// Per-sample normalized slack: margin / (1 + scale). Passing means >= -tol.
struct Slack {
  double normalized = std::numeric_limits<double>::infinity();
};

ConditionCheck reduce_check(std::string name, const std::vector<Slack>& slack,
                            const std::vector<std::vector<nlohmann::json>>& witnesses) {
  ConditionCheck check;
  check.name = std::move(name);
  if (slack.empty()) return check;
  std::size_t worst = 0;
  for (std::size_t i = 1; i < slack.size(); ++i)
    if (slack[i].normalized < slack[worst].normalized || std::isnan(slack[i].normalized))
      worst = i;
  check.worst_margin = slack[worst].normalized;
  check.passed = !std::isnan(check.worst_margin) && check.worst_margin >= -kVerifierTol;
  check.witness_sample = worst;
  nlohmann::json w = nlohmann::json::array();
  for (const auto& part : witnesses[worst]) w.push_back(part);
  check.witness = std::move(w);
  return check;
}

double normalized(double margin, double scale) { return margin / (1.0 + std::abs(scale)); }

}  // namespace

ConditionReport verify_conditions(const NonlinearitySpec& nl, const OperatorPtr& op, int samples,
                                  std::uint64_t seed, kernels::Execution exec) {
  if (samples < 1) throw std::invalid_argument("verify_conditions: samples must be >= 1");
  const auto n = static_cast<std::size_t>(samples);

  std::mt19937_64 rng(seed);
  std::vector<RandomField> xs(n), zs(n);
  std::vector<std::size_t> probe_node(n);
  std::uniform_int_distribution<std::size_t> node_pick(0, static_cast<std::size_t>(op->grid_points()) - 1);
  for (std::size_t s = 0; s < n; ++s) {
    xs[s].coeffs = random_coeffs(rng, op->modes());
    zs[s].coeffs = random_coeffs(rng, op->modes());
    probe_node[s] = node_pick(rng);
  }

  const double p = nl.p();
  const double q = nl.dual_exponent();
  const GrowthConstants& k = nl.constants();
  std::vector<Slack> mono(n), growth(n), coercive(n), primitive(n), decay(n);
  const auto c0 = condition_iv_constant(nl, op->domain().length);

  kernels::for_each_index(exec, n, [&](std::size_t s) {
    const SpectralField x(op, xs[s].coeffs);
    const SpectralField z(op, zs[s].coeffs);
    const auto xg = to_grid(x);
    const auto zg = to_grid(z);
    const auto Fx = pointwise_F(xg, nl);
    const auto Fz = pointwise_F(zg, nl);

    double pairing = 0.0, scale = 0.0;
    const auto w = op->weights();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double term = w[i] * (Fx[i] - Fz[i]) * (xg[i] - zg[i]);
      pairing += term;
      scale += std::abs(term);
    }
    mono[s].normalized = normalized(pairing, scale);

    const double x_p = grid_norm_Lp(*op, xg, p);
    const double x_h = norm_H(x);
    const double F_dual = grid_norm_Lp(*op, Fx, q);
    const double growth_rhs = k.a0 * std::pow(x_p, p - 1.0) + k.a1 * x_h;
    growth[s].normalized = normalized(growth_rhs - F_dual, growth_rhs);

    const double Fx_x = grid_inner(*op, Fx, xg);
    const double coercive_rhs = k.b0 * std::pow(x_p, p) + k.b1 * x_h * x_h;
    coercive[s].normalized = normalized(Fx_x - coercive_rhs, std::max(std::abs(Fx_x), coercive_rhs));

    if (c0) {
      const double phi = std::pow(x_p, p) / p;
      const double lhs = std::pow(x_h, p);
      decay[s].normalized = normalized(*c0 * phi - lhs, lhs);
    }

    const double r = xg[probe_node[s]];
    const double stored = nl.F(r);
    const double integral = primitive_by_quadrature(nl, r);
    primitive[s].normalized =
        -std::abs(stored - integral) / (1.0 + std::pow(std::abs(r), std::max(p - 1.0, 1.0)));
  });

  std::vector<std::vector<nlohmann::json>> pair_witness(n), single_witness(n);
  for (std::size_t s = 0; s < n; ++s) {
    pair_witness[s] = {nlohmann::json{{"x", xs[s].coeffs}}, nlohmann::json{{"z", zs[s].coeffs}}};
    single_witness[s] = {nlohmann::json{{"x", xs[s].coeffs}}};
  }

  ConditionReport report;
  report.checks.push_back(reduce_check("monotonicity", mono, pair_witness));
  report.checks.push_back(reduce_check("growth", growth, single_witness));
  report.checks.push_back(reduce_check("coercivity", coercive, single_witness));
  report.checks.push_back(reduce_check("primitive", primitive, single_witness));
  if (c0) {
    report.checks.push_back(reduce_check("condition_iv", decay, single_witness));
    std::ostringstream note;
    note << "||x||_H^p <= c0 Phi(x) with c0 = " << *c0;
    report.notes.push_back(note.str());
  }
  if (nl.oracle_only())
    report.notes.push_back("linear kind has p = 2 and is accepted as a test oracle only");
  if (nl.kind() == NonlinearityKind::Custom)
    report.notes.push_back("custom constants are declared, not certified");
  if (!(k.b0 > 0.0) || !(k.a0 > 0.0))
    report.checks.push_back({"constants", false, 0.0, std::nullopt, nlohmann::json("a0, b0 must be > 0")});
  return report;
}

// ---------------------------------------------------------------------------
// Forcing

ForcingSpec ForcingSpec::zero() { return ForcingSpec(); }

ForcingSpec ForcingSpec::affine(double g1, double g2, double c, double g0) {
  if (g1 < 0.0 || g2 < 0.0 || g0 < 0.0)
    throw std::invalid_argument("affine forcing constants g0, g1, g2 must be nonnegative");
  ForcingSpec fs;
  fs.kind_ = ForcingKind::Affine;
  fs.g0_ = g0;
  fs.g1_ = g1;
  fs.g2_ = g2;
  fs.c_ = c;
  return fs;
}

ForcingSpec ForcingSpec::custom(FieldFn g, double g0, double g1, double g2) {
  if (!g) throw std::invalid_argument("custom forcing requires a callable");
  if (g1 < 0.0 || g2 < 0.0 || g0 < 0.0)
    throw std::invalid_argument("forcing constants g0, g1, g2 must be nonnegative");
  ForcingSpec fs;
  fs.kind_ = ForcingKind::CustomLipschitz;
  fs.g0_ = g0;
  fs.g1_ = g1;
  fs.g2_ = g2;
  fs.fn_ = std::move(g);
  return fs;
}

SpectralField constant_projection(const OperatorPtr& op) {
  SpectralField out(op);
  if (op->domain().bc == BoundaryKind::PeriodicMeanZero) return out;
  const double l = op->domain().length;
  for (int k = 0; k < op->modes(); ++k) {
    const int n = op->wavenumber(k);
    if (n % 2 == 1)
      out[static_cast<std::size_t>(k)] = std::sqrt(2.0 / l) * 2.0 * l / (n * std::numbers::pi);
  }
  return out;
}

SpectralField ForcingSpec::operator()(const SpectralField& x, const SpectralField& v) const {
  require_same_operator(x, v);
  switch (kind_) {
    case ForcingKind::Zero: return SpectralField(x.op());
    case ForcingKind::Affine: {
      SpectralField out = g1_ * x;
      out += g2_ * v;
      if (c_ != 0.0) out += c_ * constant_projection(x.op());
      return out;
    }
    case ForcingKind::CustomLipschitz: {
      SpectralField out = fn_(x, v);
      require_same_operator(out, x);
      return out;
    }
  }
  return SpectralField(x.op());
}

SpectralField apply_g(const ForcingSpec& fs, const SpectralField& x, const SpectralField& v) {
  return fs(x, v);
}

ConditionReport verify_g(const ForcingSpec& fs, const OperatorPtr& op, int samples,
                         std::uint64_t seed, kernels::Execution exec) {
  if (samples < 1) throw std::invalid_argument("verify_g: samples must be >= 1");
  const auto n = static_cast<std::size_t>(samples);
  std::mt19937_64 rng(seed);
  struct Quad {
    std::vector<double> x, v, x1, v1, z;
  };
  std::vector<Quad> draws(n);
  for (auto& d : draws) {
    d.x = random_coeffs(rng, op->modes());
    d.v = random_coeffs(rng, op->modes());
    d.x1 = random_coeffs(rng, op->modes());
    d.v1 = random_coeffs(rng, op->modes());
    d.z = random_coeffs(rng, op->modes());
  }

  std::vector<Slack> lipschitz(n), bound(n);
  kernels::for_each_index(exec, n, [&](std::size_t s) {
    const SpectralField x(op, draws[s].x), v(op, draws[s].v);
    const SpectralField x1(op, draws[s].x1), v1(op, draws[s].v1);
    const SpectralField z(op, draws[s].z);
    const SpectralField gxv = fs(x, v);
    const double lhs = std::abs(inner(gxv - fs(x1, v1), z));
    const double rhs = fs.g1() * std::abs(inner(x - x1, z)) + fs.g2() * std::abs(inner(v - v1, z));
    lipschitz[s].normalized = normalized(rhs - lhs, std::max(lhs, rhs));

    const double norm_rhs = fs.g1() * norm_H(x) + fs.g2() * norm_H(v) + fs.g0();
    bound[s].normalized = normalized(norm_rhs - norm_H(gxv), norm_rhs);
  });

  std::vector<std::vector<nlohmann::json>> witness(n);
  for (std::size_t s = 0; s < n; ++s)
    witness[s] = {nlohmann::json{{"x", draws[s].x}}, nlohmann::json{{"v", draws[s].v}},
                  nlohmann::json{{"x1", draws[s].x1}}, nlohmann::json{{"v1", draws[s].v1}},
                  nlohmann::json{{"z", draws[s].z}}};

  ConditionReport report;
  report.checks.push_back(reduce_check("g_lipschitz", lipschitz, witness));
  report.checks.push_back(reduce_check("g_norm_bound", bound, witness));

  const SpectralField zero(op);
  const double g00 = norm_H(fs(zero, zero));
  ConditionCheck origin;
  origin.name = "g0_bound";
  origin.worst_margin = normalized(fs.g0() - g00, g00);
  origin.passed = origin.worst_margin >= -kVerifierTol;
  origin.witness = nlohmann::json{{"g0", fs.g0()}, {"norm_g00", g00}};
  report.checks.push_back(std::move(origin));
  return report;
}

}  // namespace sgwave
