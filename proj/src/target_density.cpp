#include "qsample/target_density.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace qsample {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_abs_det_qr(const Matrix& j) {
  if (j.rows() == 0) return 0;
  Eigen::HouseholderQR<Matrix> qr;
  if (j.rows() == j.cols()) {
    qr.compute(j);
  } else {
    // (1/2) log det(J J^T) = sum log|R_ii| for J^T = Q R
    qr.compute(j.transpose());
  }
  const Matrix& r = qr.matrixQR();
  const Eigen::Index n = std::min(r.rows(), r.cols());
  double acc = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = std::abs(r(i, i));
    if (v == 0 || !std::isfinite(v)) return kNegInf;
    acc += std::log(v);
  }
  return acc;
}

}  // namespace

TargetDensity TargetDensity::conjugate(Vector beta) {
  if ((beta.array() < 0).any() || !beta.allFinite())
    throw std::invalid_argument("conjugate hyperparameters must be finite and nonnegative");
  return {PriorKind::conjugate, std::move(beta)};
}

std::string TargetDensity::token() const {
  switch (kind) {
    case PriorKind::primitive: return "prim";
    case PriorKind::jeffreys: return "jeff";
    case PriorKind::conjugate: return "conj";
  }
  return "?";
}

Vector prior_exponents(const TargetDensity& target, int outcomes) {
  switch (target.kind) {
    case PriorKind::primitive: return Vector::Zero(outcomes);
    case PriorKind::jeffreys: return Vector::Constant(outcomes, -0.5);
    case PriorKind::conjugate:
      if (target.beta.size() != outcomes)
        throw DimensionError("conjugate prior has " + std::to_string(target.beta.size()) +
                             " hyperparameters for " + std::to_string(outcomes) + " outcomes");
      return target.beta;
  }
  return Vector::Zero(outcomes);
}

double log_prior(const TargetDensity& target, const ProbVector& p) {
  if (target.kind == PriorKind::primitive) return 0;
  const Vector e = prior_exponents(target, static_cast<int>(p.size()));
  double acc = 0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (e(k) == 0) continue;
    if (!(p(k) > 0)) return kNegInf;
    acc += e(k) * std::log(p(k));
  }
  return acc;
}

Vector grad_log_prior(const TargetDensity& target, const ProbVector& p) {
  const Vector e = prior_exponents(target, static_cast<int>(p.size()));
  Vector g = Vector::Zero(p.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (e(k) == 0) continue;
    if (!(p(k) > 0))
      throw NumericalError("prior gradient is not finite: p" + std::to_string(k + 1) + " = " +
                           std::to_string(p(k)));
    g(k) = e(k) / p(k);
  }
  return g;
}

StateParams default_initial_params(int d) {
  const int n = d * (d + 1) / 2;
  const Vector r = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  return StateParams(d, hyperspherical_angles(r), Vector::Zero(phi_count(d)));
}

PullbackDensity::PullbackDensity(Povm povm, TargetDensity target, PullbackMode mode,
                                 JacobianRoute route)
    : povm_(std::move(povm)), target_(std::move(target)), mode_(mode), route_(route) {
  if (povm_.dim() < 2) throw DimensionError("pull-back densities need d >= 2");
  if (mode_ == PullbackMode::ic_exact && !povm_.is_ic())
    throw std::invalid_argument("IC-exact pull-back requires an informationally complete POVM, got " +
                                povm_.name());
  prior_exponents(target_, povm_.outcome_count());  // validates beta length
  if (mode_ == PullbackMode::nic_state_space) state_basis_ = traceless_hermitian_basis(povm_.dim());
  const StateParams ref = default_initial_params(povm_.dim());
  offset_ = log_volume_qr(ref) - log_state_volume(ref);
}

PullbackDensity PullbackDensity::for_povm(Povm povm, TargetDensity target, JacobianRoute route) {
  const PullbackMode mode = povm.is_ic() ? PullbackMode::ic_exact : PullbackMode::nic_state_space;
  return PullbackDensity(std::move(povm), std::move(target), mode, route);
}

PullbackDensity PullbackDensity::with_route(JacobianRoute route) const {
  PullbackDensity copy = *this;
  copy.route_ = route;
  return copy;
}

Matrix PullbackDensity::jacobian(const StateParams& params) const {
  const std::vector<CMatrix> partials = state_gradient(params);
  const Eigen::Index n = static_cast<Eigen::Index>(partials.size());
  if (mode_ == PullbackMode::ic_exact) {
    Matrix dp(povm_.outcome_count(), n);
    for (Eigen::Index j = 0; j < n; ++j) dp.col(j) = povm_.apply(partials[static_cast<std::size_t>(j)]);
    return povm_.hull_basis().transpose() * dp;
  }
  Matrix j(static_cast<Eigen::Index>(state_basis_.size()), n);
  for (std::size_t b = 0; b < state_basis_.size(); ++b) {
    for (Eigen::Index c = 0; c < n; ++c) {
      // basis elements are Hermitian, so tr(G dRho) = <G, dRho>_HS
      j(static_cast<Eigen::Index>(b), c) =
          state_basis_[b].cwiseProduct(partials[static_cast<std::size_t>(c)].transpose()).sum().real();
    }
  }
  return j;
}

double PullbackDensity::log_volume_qr(const StateParams& params) const {
  return log_abs_det_qr(jacobian(params));
}

double PullbackDensity::log_volume_closed_form(const StateParams& params) const {
  return log_state_volume(params) + offset_;
}

PullbackDensity::Evaluation PullbackDensity::evaluate(const Vector& x) const {
  const StateParams params = StateParams::from_flat(dim(), x);
  return route_ == JacobianRoute::closed_form ? evaluate_closed_form(params) : evaluate_qr(params);
}

double PullbackDensity::log_density(const Vector& x) const {
  const StateParams params = StateParams::from_flat(dim(), x);
  const ProbVector p = born_probabilities(povm_, params_to_state(params));
  const double lw = log_prior(target_, p);
  if (lw == kNegInf) return kNegInf;
  const double lv =
      route_ == JacobianRoute::closed_form ? log_volume_closed_form(params) : log_volume_qr(params);
  return lw + lv;
}

PullbackDensity::Evaluation PullbackDensity::evaluate_closed_form(const StateParams& params) const {
  const int d = params.d;
  const CMatrix a = params_to_factor(params);
  const ProbVector p = povm_.apply(gram_state(a));
  Evaluation out;
  const double lw = log_prior(target_, p);
  const double lv = log_state_volume(params);
  if (lw == kNegInf || lv == kNegInf) {
    out.log_density = kNegInf;
    return out;
  }
  out.log_density = lw + lv + offset_;
  out.gradient = grad_log_state_volume(params);
  if (target_.kind == PriorKind::primitive) return out;

  // d p_k / d x_j = 2 Re tr(A^dagger Pi_k dA/dx_j), so the prior term needs only
  // M = A^dagger (sum_k g_k Pi_k) contracted with the entries of dA.
  const CMatrix m = a.adjoint() * povm_.combine(grad_log_prior(target_, p));
  const auto entries = lower_entries(d);
  const Eigen::Index n_mod = static_cast<Eigen::Index>(entries.size());
  const int nt = theta_count(d);
  Vector c(n_mod);
  for (Eigen::Index e = 0; e < n_mod; ++e) {
    const auto [row, col] = entries[static_cast<std::size_t>(e)];
    const Complex u = (e < d) ? Complex(1) : std::polar(1.0, params.phi(e - d));
    c(e) = 2 * (m(col, row) * u).real();
    if (e >= d) out.gradient(nt + e - d) += -2 * (m(col, row) * a(row, col)).imag();
  }
  out.gradient.head(nt) += hyperspherical_jacobian(params.theta).transpose() * c;
  return out;
}

PullbackDensity::Evaluation PullbackDensity::evaluate_qr(const StateParams& params) const {
  const int n = param_count(params.d);
  const ProbVector p = born_probabilities(povm_, params_to_state(params));
  Evaluation out;
  const double lw = log_prior(target_, p);
  const Matrix j = jacobian(params);
  const double lv = log_abs_det_qr(j);
  if (lw == kNegInf || lv == kNegInf) {
    out.log_density = kNegInf;
    return out;
  }
  out.log_density = lw + lv;
  out.gradient = Vector::Zero(n);

  if (target_.kind != PriorKind::primitive) {
    const Vector g = grad_log_prior(target_, p);
    const std::vector<CMatrix> partials = state_gradient(params);
    for (int i = 0; i < n; ++i) out.gradient(i) += g.dot(povm_.apply(partials[static_cast<std::size_t>(i)]));
  }

  // d log vol / dx_i = tr(J^+ dJ/dx_i), dJ/dx_i by central differences.
  Matrix pinv;
  if (j.rows() == j.cols()) {
    pinv = j.partialPivLu().inverse();
  } else {
    pinv = j.transpose() * (j * j.transpose()).inverse();
  }
  if (!pinv.allFinite()) throw NumericalError("rank-deficient Jacobian in gradient evaluation");
  const Vector x = params.flat();
  for (int i = 0; i < n; ++i) {
    Vector xp = x;
    Vector xm = x;
    xp(i) += kJacobianStep;
    xm(i) -= kJacobianStep;
    const Matrix dj = (jacobian(StateParams::from_flat(params.d, xp)) -
                       jacobian(StateParams::from_flat(params.d, xm))) /
                      (2 * kJacobianStep);
    out.gradient(i) += (pinv * dj).trace();
  }
  return out;
}

double log_pullback(const PullbackDensity& pd, const StateParams& x) { return pd.evaluate(x.flat()).log_density; }

Vector grad_log_pullback(const PullbackDensity& pd, const StateParams& x) {
  PullbackDensity::Evaluation e = pd.evaluate(x.flat());
  if (e.log_density == kNegInf || !e.gradient.allFinite())
    throw NumericalError("pull-back gradient undefined at a singular or zero-density point");
  return std::move(e.gradient);
}

}  // namespace qsample
