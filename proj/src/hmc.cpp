#include "qsample/hmc.hpp"

#include <stdexcept>
#include <string>
#include <thread>

namespace qsample {

void HmcConfig::validate() const {
  if (numstep < 1) throw std::invalid_argument("numstep must be >= 1");
  if (!(pvar > 0) || !std::isfinite(pvar)) throw std::invalid_argument("pvar must be > 0");
  if (!(qvar > 0) || !std::isfinite(qvar)) throw std::invalid_argument("qvar must be > 0");
  if (nint < 1) throw std::invalid_argument("nint must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
}

HmcChain::HmcChain(const PullbackDensity& target, const HmcConfig& cfg,
                   std::optional<StateParams> init, std::uint64_t stream)
    : target_(&target), cfg_(cfg), rng_(cfg.seed, stream) {
  cfg_.validate();
  const StateParams start = init ? *init : default_initial_params(target.dim());
  if (start.d != target.dim())
    throw DimensionError("initial parameters have d=" + std::to_string(start.d) + ", target has d=" +
                         std::to_string(target.dim()));
  start.check();
  state_ = make_chain_state(target, start.flat());
  if (!std::isfinite(state_.log_density) || !state_.gradient.allFinite())
    throw NumericalError("initial point has zero target density or a singular Jacobian");
}

bool HmcChain::step() {
  StepResult r = hmc_step(*target_, state_, cfg_, rng_);
  ++stats_.proposals;
  if (r.accepted) {
    ++stats_.accepts;
    state_ = std::move(r.state);
  }
  return r.accepted;
}

namespace {

SampleSet run_one(const HmcConfig& cfg, const PullbackDensity& target,
                  const std::optional<StateParams>& init, std::uint64_t stream, ChainStats& kept) {
  HmcChain chain(target, cfg, init, stream);
  for (std::int64_t i = 0; i < cfg.burn_in; ++i) chain.step();
  const ChainStats before = chain.stats();

  SampleSet set;
  set.d = target.dim();
  set.states.reserve(static_cast<std::size_t>(cfg.numstep));
  set.probabilities.reserve(static_cast<std::size_t>(cfg.numstep));
  set.purity.reserve(static_cast<std::size_t>(cfg.numstep));
  for (std::int64_t s = 0; s < cfg.numstep; ++s) {
    for (std::int64_t t = 0; t < cfg.thin; ++t) chain.step();
    DensityMatrix rho = params_to_state(chain.params());
    const DensityCheck check = check_density(rho.matrix());
    if (!check.ok())
      throw NumericalError("chain produced an invalid state (min eigenvalue " +
                           std::to_string(check.min_eigenvalue) + ")");
    ProbVector p = born_probabilities(target.povm(), rho);
    set.add(std::move(rho), std::move(p));
  }
  kept.proposals = chain.stats().proposals - before.proposals;
  kept.accepts = chain.stats().accepts - before.accepts;
  return set;
}

void fill_meta(SampleSet& set, const HmcConfig& cfg, const PullbackDensity& target, double rate) {
  SampleMeta& m = set.meta;
  const int d = target.dim();
  m.d = d;
  m.numstep = static_cast<std::int64_t>(set.size());
  m.nt = theta_count(d);
  m.nf = phi_count(d);
  m.num = param_count(d);
  m.pvar = cfg.pvar;
  m.qvar = cfg.qvar;
  m.nint = cfg.nint;
  m.stepsize = cfg.stepsize();
  m.acceptrate = rate;
  m.povm = target.povm().name();
  m.prior = target.target().token();
  if (target.target().kind == PriorKind::conjugate)
    m.beta = std::vector<double>(target.target().beta.begin(), target.target().beta.end());
  m.method = "hmc";
  m.seed = cfg.seed;
  m.burn_in = cfg.burn_in;
  m.thin = cfg.thin;
}

}  // namespace

SampleSet run_chain(const HmcConfig& cfg, const PullbackDensity& target, std::optional<StateParams> init) {
  ChainStats kept;
  SampleSet set = run_one(cfg, target, init, streams::kChain, kept);
  fill_meta(set, cfg, target, kept.acceptance_rate());
  return set;
}

SampleSet run_chains(const HmcConfig& cfg, const PullbackDensity& target, int chains,
                     std::optional<StateParams> init) {
  if (chains < 1) throw std::invalid_argument("chains must be >= 1");
  if (chains == 1) return run_chain(cfg, target, init);
  cfg.validate();
  std::vector<SampleSet> parts(static_cast<std::size_t>(chains));
  std::vector<ChainStats> stats(static_cast<std::size_t>(chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chains));
  {
    std::vector<std::jthread> workers;
    for (int c = 0; c < chains; ++c) {
      workers.emplace_back([&, c] {
        const auto i = static_cast<std::size_t>(c);
        try {
          parts[i] = run_one(cfg, target, init, streams::kChain + static_cast<std::uint64_t>(c), stats[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SampleSet merged;
  merged.d = target.dim();
  ChainStats total;
  std::vector<double> rates;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    for (std::size_t i = 0; i < parts[c].size(); ++i)
      merged.add(std::move(parts[c].states[i]), std::move(parts[c].probabilities[i]));
    total.proposals += stats[c].proposals;
    total.accepts += stats[c].accepts;
    rates.push_back(stats[c].acceptance_rate());
  }
  fill_meta(merged, cfg, target, total.acceptance_rate());
  merged.meta.chains = chains;
  merged.meta.chain_acceptrates = std::move(rates);
  return merged;
}

}  // namespace qsample
