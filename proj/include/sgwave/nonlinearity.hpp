#pragma once

// Scalar nonlinearity f, its primitive F(r) = int_0^r f(s) ds (the pointwise
// operator in x_tt + A F(x) = g), the potential Phi(x) = int_0^1 <F(sx), x> ds,
// the forcing g(x, v), and verifiers that try to falsify the structural
// conditions on F and g by random sampling.
//
// X is L^p(0, l) and X* is L^{p'} with p' = p / (p - 1).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgwave/kernels.hpp"
#include "sgwave/spectral_core.hpp"
#include "json.hpp"

namespace sgwave {

enum class NonlinearityKind { Linear, PowerLaw, CubicPrimitive, Custom };

const char* to_string(NonlinearityKind kind);

/// ||F(x)||_{X*} <= a0 ||x||_X^{p-1} + a1 ||x||_H ;  <F(x),x> >= b0 ||x||_X^p + b1 ||x||_H^2
struct GrowthConstants {
  double a0 = 1.0;
  double a1 = 0.0;
  double b0 = 1.0;
  double b1 = 0.0;
};

class NonlinearitySpec {
 public:
  using ScalarFn = std::function<double(double)>;

  /// f = 1, F(u) = u. p = 2, usable only as a test oracle.
  static NonlinearitySpec linear();
  /// F(u) = |u|^{p-2} u, p > 2.
  static NonlinearitySpec power_law(double p);
  /// f(u) = 3u^2, F(u) = u^3 (p = 4).
  static NonlinearitySpec cubic();
  /// User-supplied f; F from adaptive quadrature unless `primitive` is given.
  /// The constants are taken on trust and only ever falsified.
  static NonlinearitySpec custom(ScalarFn f, double p, GrowthConstants constants,
                                 std::optional<ScalarFn> primitive = std::nullopt);
  /// Piecewise-linear f through (u_i, f_i), extended linearly past the ends,
  /// with the exact piecewise-quadratic primitive.
  static NonlinearitySpec tabulated(std::vector<double> u, std::vector<double> f, double p,
                                    GrowthConstants constants);

  NonlinearityKind kind() const { return kind_; }
  double p() const { return p_; }
  double dual_exponent() const { return p_ / (p_ - 1.0); }
  const GrowthConstants& constants() const { return constants_; }
  bool oracle_only() const { return kind_ == NonlinearityKind::Linear; }

  double f(double u) const;
  /// F(u) = int_0^u f.
  double F(double u) const;
  /// Closed-form int_0^u F for the built-in kinds; nullopt for Custom.
  std::optional<double> potential_density(double u) const;

 private:
  NonlinearitySpec() = default;

  NonlinearityKind kind_ = NonlinearityKind::Linear;
  double p_ = 2.0;
  GrowthConstants constants_{};
  ScalarFn f_;
  std::optional<ScalarFn> primitive_;
};

/// int_0^r f(s) ds. Closed form for built-in kinds, Gauss-Kronrod adaptive
/// quadrature (absolute tolerance 1e-12) otherwise. Throws on non-finite r.
double primitive_F(const NonlinearitySpec& nl, double r);

/// Same integral, always by adaptive Simpson quadrature of f. Used to check a stored primitive.
double primitive_by_quadrature(const NonlinearitySpec& nl, double r);

/// Galerkin projection of the pointwise composition F(x(.)). Non-finite values
/// (overflow at extreme amplitude) propagate into the coefficients; check
/// SpectralField::all_finite().
SpectralField apply_F(const SpectralField& x, const NonlinearitySpec& nl);

/// <F(x), z> evaluated on the grid.
double dual_pairing_F(const SpectralField& x, const SpectralField& z, const NonlinearitySpec& nl);

struct PotentialValue {
  double value = 0.0;
  int quadrature_nodes = 0;  // 0 when the closed form was used
};

/// Closed form for built-in kinds, 16-node Gauss-Legendre in s otherwise.
PotentialValue potential_Phi(const SpectralField& x, const NonlinearitySpec& nl);
/// Always the s-quadrature; for built-in kinds this is the cross-check of the closed form.
PotentialValue potential_Phi_quadrature(const SpectralField& x, const NonlinearitySpec& nl,
                                        int nodes = 16);

/// Hoelder constant of ||x||_2 <= c_emb ||x||_p on (0, l): l^{(p-2)/(2p)}.
double embedding_constant(double p, double length);

/// c0 with ||x||_H^p <= c0 Phi(x); p c_emb^p for kinds with <F(x),x> = ||x||_p^p.
/// std::nullopt when p <= 2 or the kind carries no such bound.
std::optional<double> condition_iv_constant(const NonlinearitySpec& nl, double length);

struct ConditionCheck {
  std::string name;
  bool passed = true;
  double worst_margin = 0.0;  // most negative slack observed (>= -tol passes)
  std::optional<std::size_t> witness_sample;
  nlohmann::json witness;  // coefficient vectors of the worst sample
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;
  std::vector<std::string> notes;

  bool all_passed() const;
  const ConditionCheck* find(const std::string& name) const;
  void append(const ConditionReport& other);
  nlohmann::json to_json() const;
};

/// Draws `samples` random field pairs (coefficients U[-1,1] times an
/// amplitude U[0,10]) and checks monotonicity, growth, coercivity, the
/// stored primitive against quadrature and, for kinds with a c0,
/// ||x||_H^p <= c0 Phi(x). Samples are generated serially from
/// `seed`, so both execution modes give identical reports.
ConditionReport verify_conditions(const NonlinearitySpec& nl, const OperatorPtr& op, int samples,
                                  std::uint64_t seed = 0,
                                  kernels::Execution exec = kernels::Execution::Parallel);

enum class ForcingKind { Zero, Affine, CustomLipschitz };

const char* to_string(ForcingKind kind);

class ForcingSpec {
 public:
  using FieldFn = std::function<SpectralField(const SpectralField&, const SpectralField&)>;

  static ForcingSpec zero();
  /// g(x, v) = g1 x + g2 v + c P1, P1 the projection of the constant function 1.
  /// g0 is the declared bound on ||g(0,0)||_H; verify_g checks it.
  static ForcingSpec affine(double g1, double g2, double c, double g0);
  static ForcingSpec custom(FieldFn g, double g0, double g1, double g2);

  ForcingKind kind() const { return kind_; }
  double g0() const { return g0_; }
  double g1() const { return g1_; }
  double g2() const { return g2_; }
  double offset() const { return c_; }
  bool velocity_dependent() const { return g2_ > 0.0; }

  SpectralField operator()(const SpectralField& x, const SpectralField& v) const;

 private:
  ForcingSpec() = default;

  ForcingKind kind_ = ForcingKind::Zero;
  double g0_ = 0.0, g1_ = 0.0, g2_ = 0.0, c_ = 0.0;
  FieldFn fn_;
};

/// Coefficients of the constant function 1 in the basis of op.
SpectralField constant_projection(const OperatorPtr& op);

/// v carries B y_t = A^{-1/2} x_t.
SpectralField apply_g(const ForcingSpec& fs, const SpectralField& x, const SpectralField& v);

/// Random quadruples (x, v, x1, v1) and test direction z: the Lipschitz
/// display, the norm bound, and g0 >= ||g(0,0)||_H.
ConditionReport verify_g(const ForcingSpec& fs, const OperatorPtr& op, int samples,
                         std::uint64_t seed = 0,
                         kernels::Execution exec = kernels::Execution::Parallel);

}  // namespace sgwave
