#pragma once

// Eigenbasis of A = -d^2/dx^2 on an interval (0, l), diagonal realizations of
// A, B = A^{1/2}, A^{-1}, A^{-1/2}, and the grid transforms used to evaluate
// nonlinear terms pseudo-spectrally.
//
// Dirichlet:          e_k(x) = sqrt(2/l) sin(k pi x / l),   lambda_k = (k pi / l)^2
// Periodic mean-zero: cos/sin pairs sqrt(2/l) {cos,sin}(2 pi k x / l),
//                     lambda = (2 pi k / l)^2 with multiplicity 2, constant mode dropped.
//
// Quadrature is the midpoint rule (Dirichlet) or the trapezoidal rule
// (periodic); both integrate products of retained basis functions exactly.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sgwave/kernels.hpp"

namespace sgwave {

enum class BoundaryKind { Dirichlet, PeriodicMeanZero };

const char* to_string(BoundaryKind bc);

struct DomainSpec {
  double length = 1.0;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  int grid_points = 0;  // 0 selects default_grid_points(modes)
  bool allow_poincare_violation = false;
};

/// Smallest grid accepted for `modes` retained modes (the 3/2 rule).
int min_grid_points(int modes);

/// Grid used when DomainSpec::grid_points is 0; integrands up to quartic in
/// the retained modes (cubic nonlinearity tested against a basis function)
/// are integrated exactly.
int default_grid_points(BoundaryKind bc, int modes);

class OperatorSpec {
 public:
  const DomainSpec& domain() const { return domain_; }
  int modes() const { return static_cast<int>(eigenvalues_.size()); }
  int grid_points() const { return static_cast<int>(nodes_.size()); }

  std::span<const double> eigenvalues() const { return eigenvalues_; }
  double eigenvalue(int k) const { return eigenvalues_[static_cast<std::size_t>(k)]; }
  double lambda_min() const { return eigenvalues_.front(); }
  double lambda_max() const { return eigenvalues_.back(); }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  kernels::BasisView basis() const {
    return {basis_, nodes_.size(), eigenvalues_.size()};
  }

  /// Evaluates basis function k (0-based) at an arbitrary point in [0, l].
  double basis_function(int k, double x) const;
  /// Wavenumber of basis function k: k+1 for Dirichlet, k/2+1 for periodic.
  int wavenumber(int k) const;

  /// Poincare inequality ||x||_H <= ||Bx||_H, i.e. lambda_min >= 1.
  bool satisfies_poincare() const { return lambda_min() >= 1.0; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend std::shared_ptr<const OperatorSpec> build_operator(const DomainSpec&, int);
  OperatorSpec() = default;

  DomainSpec domain_;
  std::vector<double> eigenvalues_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> basis_;
  std::vector<std::string> warnings_;
};

using OperatorPtr = std::shared_ptr<const OperatorSpec>;

/// Throws std::invalid_argument on modes < 1, a grid below the floor, a
/// non-positive length, or (unless allowed) lambda_min < 1.
OperatorPtr build_operator(const DomainSpec& domain, int modes);

/// Coordinates in the orthonormal eigenbasis of one OperatorSpec.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(OperatorPtr op);  // zero field
  SpectralField(OperatorPtr op, std::vector<double> coeffs);

  static SpectralField basis_vector(OperatorPtr op, int k);

  const OperatorPtr& op() const { return op_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  double operator[](std::size_t k) const { return coeffs_[k]; }
  double& operator[](std::size_t k) { return coeffs_[k]; }

  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  OperatorPtr op_;
  std::vector<double> coeffs_;
};

SpectralField operator+(SpectralField x, const SpectralField& z);
SpectralField operator-(SpectralField x, const SpectralField& z);
SpectralField operator*(double s, SpectralField x);

/// Throws std::invalid_argument when x and z live on different operators.
void require_same_operator(const SpectralField& x, const SpectralField& z);

SpectralField apply_A(const SpectralField& x);
SpectralField apply_B(const SpectralField& x);
SpectralField apply_A_inv(const SpectralField& x);
SpectralField apply_A_inv_sqrt(const SpectralField& x);

std::vector<double> to_grid(const SpectralField& x,
                            kernels::Execution exec = kernels::Execution::Serial);
SpectralField from_grid(std::span<const double> samples, const OperatorPtr& op,
                        kernels::Execution exec = kernels::Execution::Serial);

double inner(const SpectralField& x, const SpectralField& z);
double norm_H(const SpectralField& x);
/// (sum_i w_i |x(node_i)|^p)^{1/p}; p >= 1.
double norm_Lp(const SpectralField& x, double p);
/// The same quadrature applied to arbitrary grid samples.
double grid_norm_Lp(const OperatorSpec& op, std::span<const double> samples, double p);
/// sum_i w_i u_i v_i
double grid_inner(const OperatorSpec& op, std::span<const double> u, std::span<const double> v);

}  // namespace sgwave
