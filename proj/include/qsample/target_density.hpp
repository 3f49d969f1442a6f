#pragma once

#include <string>

#include "qsample/povm.hpp"
#include "qsample/quantum_core.hpp"

namespace qsample {

enum class PriorKind { primitive, jeffreys, conjugate };

/// Unnormalized target density w(p) on probability space.
struct TargetDensity {
  PriorKind kind = PriorKind::primitive;
  Vector beta;  // conjugate hyperparameters, one per outcome

  static TargetDensity primitive() { return {PriorKind::primitive, {}}; }
  static TargetDensity jeffreys() { return {PriorKind::jeffreys, {}}; }
  static TargetDensity conjugate(Vector beta);
  /// Conjugate prior with every beta_k = 1.
  static TargetDensity conjugate_unit(int outcomes) { return conjugate(Vector::Ones(outcomes)); }

  /// "prim", "jeff" or "conj".
  std::string token() const;
};

/// Exponents e_k with log w(p) = sum_k e_k log p_k.
Vector prior_exponents(const TargetDensity& target, int outcomes);

/// log w(p); -inf when some p_k <= 0 carries a nonzero exponent.
double log_prior(const TargetDensity& target, const ProbVector& p);

/// d log w / d p_k. Throws NumericalError if a p_k with nonzero exponent is <= 0.
Vector grad_log_prior(const TargetDensity& target, const ProbVector& p);

enum class PullbackMode {
  /// log w(p(x)) + log|det dq/dx| over the POVM's independent coordinates q.
  ic_exact,
  /// log w(p(x)) + log j_state(x), the primitive state-space measure pulled back
  /// to x. j_state uses the orthonormal traceless Hermitian coordinates of rho,
  /// which agree with the Jacobian of any IC POVM up to a constant factor.
  nic_state_space,
};

enum class JacobianRoute {
  /// Closed-form log-volume of the parametrization (exact gradient), shifted by a
  /// constant so that it matches the QR route.
  closed_form,
  /// Householder QR of the numerical Jacobian; gradient via the trace identity
  /// with central differences of J.
  qr,
};

inline constexpr double kJacobianStep = 1e-5;

/// The target density w(p(x)) times the volume factor of x -> p, in log domain.
class PullbackDensity {
 public:
  PullbackDensity(Povm povm, TargetDensity target, PullbackMode mode,
                  JacobianRoute route = JacobianRoute::closed_form);

  /// ic_exact for IC POVMs, nic_state_space otherwise.
  static PullbackDensity for_povm(Povm povm, TargetDensity target,
                                  JacobianRoute route = JacobianRoute::closed_form);

  struct Evaluation {
    double log_density = 0;
    Vector gradient;  // empty when log_density is -inf
  };

  const Povm& povm() const { return povm_; }
  const TargetDensity& target() const { return target_; }
  PullbackMode mode() const { return mode_; }
  JacobianRoute route() const { return route_; }
  int dim() const { return povm_.dim(); }
  int param_dim() const { return param_count(povm_.dim()); }
  PullbackDensity with_route(JacobianRoute route) const;

  Evaluation evaluate(const Vector& x) const;
  double log_density(const Vector& x) const;

  /// m x (d^2 - 1) Jacobian of the coordinates the volume factor is taken over.
  Matrix jacobian(const StateParams& params) const;
  /// log|det J| (IC) or (1/2) log det(J J^T), via QR; -inf when rank deficient.
  double log_volume_qr(const StateParams& params) const;
  /// Closed-form log volume, shifted to agree with log_volume_qr.
  double log_volume_closed_form(const StateParams& params) const;

 private:
  Evaluation evaluate_closed_form(const StateParams& params) const;
  Evaluation evaluate_qr(const StateParams& params) const;

  Povm povm_;
  TargetDensity target_;
  PullbackMode mode_;
  JacobianRoute route_;
  std::vector<CMatrix> state_basis_;
  double offset_ = 0;
};

double log_pullback(const PullbackDensity& pd, const StateParams& x);
Vector grad_log_pullback(const PullbackDensity& pd, const StateParams& x);

/// Interior, full-rank starting point: every modulus 1/sqrt(d(d+1)/2), phases 0.
StateParams default_initial_params(int d);

}  // namespace qsample
