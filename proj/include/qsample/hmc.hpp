#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>

#include "qsample/random.hpp"
#include "qsample/sample_set.hpp"
#include "qsample/target_density.hpp"

namespace qsample {

/// Anything exposing `evaluate(x)` with `.log_density` and `.gradient`.
template <typename Model>
concept LogDensityModel = requires(const Model& m, const Vector& x) {
  { m.evaluate(x).log_density } -> std::convertible_to<double>;
  { m.evaluate(x).gradient } -> std::convertible_to<Vector>;
};

struct HmcConfig {
  std::int64_t numstep = 1000000;
  double pvar = 1.0;   // momentum variance
  double qvar = 0.1;   // trajectory length in position space
  int nint = 10;       // leapfrog jumps per trajectory
  std::int64_t burn_in = 1000;
  std::int64_t thin = 1;
  std::uint64_t seed = 0;

  double stepsize() const { return qvar / nint; }
  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

inline constexpr double kDivergenceThreshold = 50.0;

struct ChainState {
  Vector x;
  double log_density = 0;
  Vector gradient;
};

struct ChainStats {
  std::int64_t proposals = 0;
  std::int64_t accepts = 0;

  double acceptance_rate() const {
    return proposals > 0 ? static_cast<double>(accepts) / static_cast<double>(proposals) : 0.0;
  }
};

struct Trajectory {
  Vector position;
  Vector momentum;
  double log_density = 0;
  Vector gradient;
  bool divergent = false;
};

/// Kick-drift-kick leapfrog for H = -log pi(x) + p.p / (2 pvar). Stops early and
/// flags the trajectory divergent if the density becomes zero or non-finite.
template <LogDensityModel Model>
Trajectory leapfrog(const Model& model, const ChainState& start, const Vector& momentum, double eps,
                    int n, double pvar) {
  Trajectory t{start.x, momentum, start.log_density, start.gradient, false};
  if (!std::isfinite(t.log_density) || !t.gradient.allFinite()) {
    t.divergent = true;
    return t;
  }
  t.momentum += 0.5 * eps * t.gradient;
  for (int i = 0; i < n; ++i) {
    t.position += (eps / pvar) * t.momentum;
    auto e = model.evaluate(t.position);
    t.log_density = e.log_density;
    if (!std::isfinite(t.log_density) || !e.gradient.allFinite()) {
      t.divergent = true;
      return t;
    }
    t.gradient = std::move(e.gradient);
    t.momentum += ((i + 1 < n) ? eps : 0.5 * eps) * t.gradient;
  }
  return t;
}

template <LogDensityModel Model>
ChainState make_chain_state(const Model& model, Vector x) {
  auto e = model.evaluate(x);
  return {std::move(x), e.log_density, std::move(e.gradient)};
}

template <LogDensityModel Model>
Trajectory leapfrog(const Model& model, const Vector& x0, const Vector& p0, double eps, int n,
                    double pvar) {
  return leapfrog(model, make_chain_state(model, x0), p0, eps, n, pvar);
}

inline double hamiltonian(double log_density, const Vector& momentum, double pvar) {
  return -log_density + momentum.squaredNorm() / (2 * pvar);
}

struct StepResult {
  ChainState state;
  bool accepted = false;
  double delta_h = 0;
};

/// One HMC transition: fresh N(0, pvar) momenta, nint leapfrog jumps of size
/// qvar/nint, Metropolis accept with probability min(1, exp(-dH)). Divergent
/// trajectories and |dH| > kDivergenceThreshold are rejected.
template <LogDensityModel Model>
StepResult hmc_step(const Model& model, const ChainState& state, const HmcConfig& cfg, Rng& rng) {
  const Vector p0 = rng.normal_vector(state.x.size(), std::sqrt(cfg.pvar));
  const Trajectory t = leapfrog(model, state, p0, cfg.stepsize(), cfg.nint, cfg.pvar);
  const double u = rng.uniform_open();
  if (t.divergent) return {state, false, INFINITY};
  const double dh = hamiltonian(t.log_density, t.momentum, cfg.pvar) -
                    hamiltonian(state.log_density, p0, cfg.pvar);
  if (!std::isfinite(dh) || std::abs(dh) > kDivergenceThreshold) return {state, false, dh};
  if (std::log(u) < -dh) return {ChainState{t.position, t.log_density, t.gradient}, true, dh};
  return {state, false, dh};
}

/// Sequential chain over state parameters targeting a pull-back density.
class HmcChain {
 public:
  HmcChain(const PullbackDensity& target, const HmcConfig& cfg,
           std::optional<StateParams> init = std::nullopt, std::uint64_t stream = streams::kChain);

  /// Advances one transition.
  bool step();
  const ChainState& state() const { return state_; }
  const ChainStats& stats() const { return stats_; }
  StateParams params() const { return StateParams::from_flat(target_->dim(), state_.x); }

 private:
  const PullbackDensity* target_;
  HmcConfig cfg_;
  Rng rng_;
  ChainState state_;
  ChainStats stats_;
};

/// Discards burn_in transitions, then keeps every thin-th of numstep * thin
/// transitions. Each kept point is mapped to its state and Born probabilities.
/// Metadata carries the full configuration and the acceptance rate of the
/// kept segment.
SampleSet run_chain(const HmcConfig& cfg, const PullbackDensity& target,
                    std::optional<StateParams> init = std::nullopt);

/// `chains` independent chains on streams 0..chains-1 of cfg.seed, each emitting
/// numstep samples, concatenated in chain order.
SampleSet run_chains(const HmcConfig& cfg, const PullbackDensity& target, int chains,
                     std::optional<StateParams> init = std::nullopt);

}  // namespace qsample
