#include "sgwave/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgwave::oracle {

ModalPair linear_exact(double lambda, double a0, double adot0, double t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("linear_exact: lambda must be > 0");
  const double w = std::sqrt(lambda);
  const double c = std::cos(w * t), s = std::sin(w * t);
  return {a0 * c + adot0 * s / w, -a0 * w * s + adot0 * c};
}

Trajectory reference_run(const ProblemDefinition& def, int m_ref, double dt_ref,
                         const SolverConfig& test_cfg) {
  const double ratio = test_cfg.dt / dt_ref;
  const auto factor = static_cast<long long>(std::llround(ratio));
  if (factor < 1 || std::abs(ratio - static_cast<double>(factor)) > 1e-9 * ratio)
    throw std::invalid_argument("reference_run: dt must be an integer multiple of dt_ref");
  SolverConfig cfg = test_cfg;
  cfg.dt = dt_ref;
  cfg.sample_stride = static_cast<int>(test_cfg.sample_stride * factor);
  return solve(def, m_ref, cfg);
}

double trajectory_error(const Trajectory& test, const Trajectory& ref) {
  const auto& top = *test.problem.op;
  const auto& rop = *ref.problem.op;
  if (top.domain().bc != rop.domain().bc || top.domain().length != rop.domain().length)
    throw std::invalid_argument("trajectory_error: different domains");
  if (rop.modes() < top.modes())
    throw std::invalid_argument("trajectory_error: reference has fewer modes");
  if (test.samples.size() != ref.samples.size())
    throw std::invalid_argument("trajectory_error: sample counts differ");

  double worst = 0.0;
  for (std::size_t n = 0; n < test.samples.size(); ++n) {
    const State& a = test.samples[n].state;
    const State& b = ref.samples[n].state;
    if (std::abs(a.t - b.t) > 1e-9 * std::max(1.0, std::abs(a.t)))
      throw std::invalid_argument("trajectory_error: sample times differ");
    double sq = 0.0;
    for (std::size_t k = 0; k < b.a.size(); ++k) {
      const double d = (k < a.a.size() ? a.a[k] : 0.0) - b.a[k];
      sq += d * d;
    }
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

namespace {

template <class Rhs>
std::vector<double> dense_rk4(Rhs&& rhs, double y0, std::span<const double> t_grid, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("scalar_comparison: dt must be > 0");
  std::vector<double> out;
  out.reserve(t_grid.size());
  double t = 0.0, y = y0;
  for (double target : t_grid) {
    if (target < t) throw std::invalid_argument("scalar_comparison: t_grid must be ascending and >= 0");
    while (t < target) {
      const double h = std::min(dt, target - t);
      const double k1 = rhs(y);
      const double k2 = rhs(y + 0.5 * h * k1);
      const double k3 = rhs(y + 0.5 * h * k2);
      const double k4 = rhs(y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = (target - t - h <= 0.0) ? target : t + h;
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace

std::vector<double> scalar_comparison(const GronwallLinearOde& ode, std::span<const double> t_grid,
                                      double dt) {
  return dense_rk4([&](double z) { return ode.C0 * z + ode.C1; }, ode.z0, t_grid, dt);
}

std::vector<double> scalar_comparison(const BernoulliOde& ode, std::span<const double> t_grid,
                                      double dt) {
  return dense_rk4([&](double w) { return w - ode.delta * std::pow(std::max(w, 0.0), ode.r); },
                   ode.w0, t_grid, dt);
}

double bernoulli_r2_closed_form(double delta, double w0, double t) {
  const double e = std::exp(t);
  return e * w0 / (1.0 + delta * w0 * (e - 1.0));
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("simpson: panels must be even");
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

double sine_coefficient(const std::function<double(double)>& f, int k, double length,
                        int panels) {
  const double scale = std::sqrt(2.0 / length);
  return simpson(
      [&](double x) { return f(x) * scale * std::sin(k * std::numbers::pi * x / length); }, 0.0,
      length, panels);
}

}  // namespace sgwave::oracle
