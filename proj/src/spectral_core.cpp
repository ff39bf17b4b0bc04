#include "sgwave/spectral_core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sgwave {

const char* to_string(BoundaryKind bc) {
  return bc == BoundaryKind::Dirichlet ? "dirichlet" : "periodic";
}

int min_grid_points(int modes) { return (3 * modes + 1) / 2; }

int default_grid_points(BoundaryKind bc, int modes) {
  if (bc == BoundaryKind::Dirichlet) return 2 * modes + 1;
  const int max_wavenumber = (modes + 1) / 2;
  return 4 * max_wavenumber + 1;
}

double OperatorSpec::basis_function(int k, double x) const {
  const double l = domain_.length;
  const double scale = std::sqrt(2.0 / l);
  const double n = wavenumber(k);
  if (domain_.bc == BoundaryKind::Dirichlet) return scale * std::sin(n * std::numbers::pi * x / l);
  const double arg = 2.0 * std::numbers::pi * n * x / l;
  return (k % 2 == 0) ? scale * std::cos(arg) : scale * std::sin(arg);
}

int OperatorSpec::wavenumber(int k) const {
  return domain_.bc == BoundaryKind::Dirichlet ? k + 1 : k / 2 + 1;
}

OperatorPtr build_operator(const DomainSpec& domain, int modes) {
  if (!(domain.length > 0.0) || !std::isfinite(domain.length))
    throw std::invalid_argument("domain length must be positive and finite");
  if (modes < 1) throw std::invalid_argument("modes must be >= 1");

  const int n_grid =
      domain.grid_points > 0 ? domain.grid_points : default_grid_points(domain.bc, modes);
  if (n_grid < min_grid_points(modes)) {
    std::ostringstream msg;
    msg << "grid_points " << n_grid << " below dealiasing floor ceil(3*modes/2) = "
        << min_grid_points(modes);
    throw std::invalid_argument(msg.str());
  }
  if (domain.bc == BoundaryKind::PeriodicMeanZero && n_grid <= 2 * ((modes + 1) / 2)) {
    throw std::invalid_argument(
        "periodic grid must exceed twice the largest retained wavenumber");
  }

  auto op = std::shared_ptr<OperatorSpec>(new OperatorSpec());
  op->domain_ = domain;
  op->domain_.grid_points = n_grid;

  const double l = domain.length;
  op->eigenvalues_.resize(static_cast<std::size_t>(modes));
  for (int k = 0; k < modes; ++k) {
    const double n = op->wavenumber(k);
    const double root = domain.bc == BoundaryKind::Dirichlet ? n * std::numbers::pi / l
                                                             : 2.0 * std::numbers::pi * n / l;
    op->eigenvalues_[static_cast<std::size_t>(k)] = root * root;
  }

  if (op->lambda_min() < 1.0) {
    std::ostringstream msg;
    msg << "Poincare inequality ||x||_H <= ||Bx||_H violated: lambda_min = " << op->lambda_min()
        << " < 1";
    if (!domain.allow_poincare_violation) throw std::invalid_argument(msg.str());
    op->warnings_.push_back(msg.str());
  }

  op->nodes_.resize(static_cast<std::size_t>(n_grid));
  op->weights_.assign(static_cast<std::size_t>(n_grid), l / n_grid);
  for (int i = 0; i < n_grid; ++i) {
    const double offset = domain.bc == BoundaryKind::Dirichlet ? 0.5 : 0.0;
    op->nodes_[static_cast<std::size_t>(i)] = (i + offset) * l / n_grid;
  }

  op->basis_.resize(static_cast<std::size_t>(n_grid) * static_cast<std::size_t>(modes));
  for (int i = 0; i < n_grid; ++i)
    for (int k = 0; k < modes; ++k)
      op->basis_[static_cast<std::size_t>(i * modes + k)] =
          op->basis_function(k, op->nodes_[static_cast<std::size_t>(i)]);
  return op;
}

SpectralField::SpectralField(OperatorPtr op)
    : op_(std::move(op)), coeffs_(static_cast<std::size_t>(op_ ? op_->modes() : 0), 0.0) {}

SpectralField::SpectralField(OperatorPtr op, std::vector<double> coeffs)
    : op_(std::move(op)), coeffs_(std::move(coeffs)) {
  if (!op_) throw std::invalid_argument("SpectralField requires an operator");
  if (coeffs_.size() != static_cast<std::size_t>(op_->modes()))
    throw std::invalid_argument("SpectralField: coefficient count does not match modes");
}

SpectralField SpectralField::basis_vector(OperatorPtr op, int k) {
  SpectralField e(std::move(op));
  e.coeffs_.at(static_cast<std::size_t>(k)) = 1.0;
  return e;
}

bool SpectralField::all_finite() const {
  for (double c : coeffs_)
    if (!std::isfinite(c)) return false;
  return true;
}

void require_same_operator(const SpectralField& x, const SpectralField& z) {
  if (x.op() != z.op())
    throw std::invalid_argument("fields belong to different OperatorSpec instances");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_operator(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_operator(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField x, const SpectralField& z) { return x += z; }
SpectralField operator-(SpectralField x, const SpectralField& z) { return x -= z; }
SpectralField operator*(double s, SpectralField x) { return x *= s; }

namespace {

template <class Scale>
SpectralField scale_diagonal(const SpectralField& x, Scale&& scale) {
  if (!x.all_finite()) throw std::invalid_argument("non-finite field coefficients");
  SpectralField out = x;
  const auto lambda = x.op()->eigenvalues();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = scale(lambda[k]) * x[k];
  return out;
}

}  // namespace

SpectralField apply_A(const SpectralField& x) {
  return scale_diagonal(x, [](double l) { return l; });
}
SpectralField apply_B(const SpectralField& x) {
  return scale_diagonal(x, [](double l) { return std::sqrt(l); });
}
SpectralField apply_A_inv(const SpectralField& x) {
  return scale_diagonal(x, [](double l) { return 1.0 / l; });
}
SpectralField apply_A_inv_sqrt(const SpectralField& x) {
  return scale_diagonal(x, [](double l) { return 1.0 / std::sqrt(l); });
}

std::vector<double> to_grid(const SpectralField& x, kernels::Execution exec) {
  std::vector<double> samples(static_cast<std::size_t>(x.op()->grid_points()));
  if (exec == kernels::Execution::Parallel)
    kernels::parallel::synthesize(x.op()->basis(), x.coeffs(), samples);
  else
    kernels::serial::synthesize(x.op()->basis(), x.coeffs(), samples);
  return samples;
}

SpectralField from_grid(std::span<const double> samples, const OperatorPtr& op,
                        kernels::Execution exec) {
  if (samples.size() != static_cast<std::size_t>(op->grid_points()))
    throw std::invalid_argument("from_grid: sample count does not match the operator grid");
  SpectralField out(op);
  if (exec == kernels::Execution::Parallel)
    kernels::parallel::analyze(op->basis(), op->weights(), samples, out.coeffs());
  else
    kernels::serial::analyze(op->basis(), op->weights(), samples, out.coeffs());
  return out;
}

double inner(const SpectralField& x, const SpectralField& z) {
  require_same_operator(x, z);
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * z[k];
  return acc;
}

double norm_H(const SpectralField& x) {
  double acc = 0.0;
  for (double c : x.coeffs()) acc += c * c;
  return std::sqrt(acc);
}

double grid_norm_Lp(const OperatorSpec& op, std::span<const double> samples, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm_Lp requires p >= 1");
  return std::pow(kernels::serial::weighted_abs_power_sum(op.weights(), samples, p), 1.0 / p);
}

double norm_Lp(const SpectralField& x, double p) {
  const auto samples = to_grid(x);
  return grid_norm_Lp(*x.op(), samples, p);
}

double grid_inner(const OperatorSpec& op, std::span<const double> u, std::span<const double> v) {
  const auto w = op.weights();
  if (u.size() != w.size() || v.size() != w.size())
    throw std::invalid_argument("grid_inner: sample count does not match the operator grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * u[i] * v[i];
  return acc;
}

}  // namespace sgwave
