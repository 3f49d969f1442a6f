#include "qsample/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qsample/ginibre.hpp"

namespace qsample {

void WeightedSampleSet::check() const {
  if (weights.size() != samples.size())
    throw ValidationError("weight count " + std::to_string(weights.size()) + " does not match sample count " +
                          std::to_string(samples.size()));
  bool positive = false;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0) throw ValidationError("weights must be finite and nonnegative");
    positive = positive || w > 0;
  }
  if (!positive) throw ValidationError("all weights are zero");
}

double qubit_fiber_weight(const Povm& povm, const DensityMatrix& rho) {
  if (povm.dim() != 2 || rho.dim() != 2) throw DimensionError("qubit fiber weight needs d=2");
  if (povm.rule() != ConstraintRule::trine && povm.rule() != ConstraintRule::crosshair)
    throw std::invalid_argument("qubit fiber weight is defined for trine, anti-trine and crosshair, not " +
                                povm.name());
  const BlochVector b = qubit_to_bloch(rho);
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - b.x * b.x - b.z * b.z));
}

namespace {

Matrix sorted_by_first_row(Matrix pts) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(pts.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return pts(0, a) < pts(0, b); });
  Matrix out(pts.rows(), pts.cols());
  for (std::size_t i = 0; i < order.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = pts.col(order[i]);
  return out;
}

Matrix coordinate_pool(const Povm& povm, std::int64_t n, Rng& rng) {
  Matrix pts(povm.indep_dim(), n);
  for (std::int64_t i = 0; i < n; ++i)
    pts.col(i) = povm.coordinates(born_probabilities(povm, ginibre_state(povm.dim(), rng)));
  return sorted_by_first_row(std::move(pts));
}

}  // namespace

FiberVolumeEstimator::FiberVolumeEstimator(const Povm& povm, std::int64_t pool_size, Rng& rng)
    : povm_(&povm) {
  if (pool_size < 1) throw std::invalid_argument("fiber pool size must be >= 1");
  if (povm.is_ic()) throw std::invalid_argument("fiber volumes are only defined for NIC POVMs, got " + povm.name());
  pool_ = coordinate_pool(povm, pool_size, rng);
}

FiberVolumeEstimator::FiberVolumeEstimator(const Povm& povm, std::int64_t pool_size, std::uint64_t seed)
    : povm_(&povm) {
  Rng rng(seed, streams::kFiber);
  *this = FiberVolumeEstimator(povm, pool_size, rng);
}

FiberEstimate FiberVolumeEstimator::estimate(const ProbVector& p, double delta) const {
  if (!(delta > 0)) throw std::invalid_argument("bin half-width must be > 0");
  if (p.size() != povm_->outcome_count()) throw DimensionError("probability vector length mismatch");
  const Vector q = povm_->coordinates(p);
  const Eigen::Index n = pool_.cols();
  const Eigen::Index m = pool_.rows();

  // window on the sorted first coordinate, then a full box test
  Eigen::Index lo = 0, hi = n;
  {
    Eigen::Index a = 0, b = n;
    while (a < b) {
      const Eigen::Index mid = (a + b) / 2;
      if (pool_(0, mid) < q(0) - delta) a = mid + 1; else b = mid;
    }
    lo = a;
    b = n;
    while (a < b) {
      const Eigen::Index mid = (a + b) / 2;
      if (pool_(0, mid) <= q(0) + delta) a = mid + 1; else b = mid;
    }
    hi = a;
  }
  std::int64_t hits = 0;
  for (Eigen::Index c = lo; c < hi; ++c) {
    bool inside = true;
    for (Eigen::Index r = 1; r < m && inside; ++r) inside = std::abs(pool_(r, c) - q(r)) <= delta;
    hits += inside ? 1 : 0;
  }
  if (hits == 0)
    throw NumericalError("fiber volume estimate has zero hits; enlarge the bin or the pool");
  const double vol = std::pow(2 * delta, static_cast<double>(m));
  const double frac = static_cast<double>(hits) / static_cast<double>(n);
  FiberEstimate e;
  e.value = frac / vol;
  e.std_error = std::sqrt(frac * (1 - frac) / static_cast<double>(n)) / vol;
  e.hits = hits;
  e.draws = n;
  e.delta = delta;
  return e;
}

FiberEstimate FiberVolumeEstimator::estimate_adaptive(const ProbVector& p, double delta) const {
  for (int attempt = 0; attempt < 8; ++attempt, delta *= 2) {
    try {
      return estimate(p, delta);
    } catch (const NumericalError&) {
    }
  }
  return estimate(p, delta);
}

FiberEstimate mc_fiber_weight(const Povm& povm, const ProbVector& p, std::int64_t n_est, double delta,
                              Rng& rng) {
  if (n_est < 1) throw std::invalid_argument("n_est must be >= 1");
  return FiberVolumeEstimator(povm, n_est, rng).estimate(p, delta);
}

RangeResult fiber_ranges(const SampleSet& set, const Povm& povm, std::uint64_t seed, double delta,
                         std::int64_t pool) {
  if (set.d != povm.dim()) throw DimensionError("sample set and POVM dimensions differ");
  if (povm.is_ic()) throw std::invalid_argument("fiber ranges are only defined for NIC POVMs");
  RangeResult out;
  out.range.reserve(set.size());
  if (povm.dim() == 2) {
    for (const auto& rho : set.states) out.range.push_back(qubit_fiber_weight(povm, rho));
    return out;
  }
  out.experimental = true;
  out.delta = delta;
  out.pool = pool;
  const FiberVolumeEstimator est(povm, pool, seed);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const ProbVector p =
        set.probabilities.empty() ? born_probabilities(povm, set.states[i]) : set.probabilities[i];
    out.range.push_back(est.estimate_adaptive(p, delta).value);
  }
  return out;
}

std::vector<double> weights_from_range(const std::vector<double>& range) {
  std::vector<double> w;
  w.reserve(range.size());
  for (std::size_t i = 0; i < range.size(); ++i) {
    if (!(range[i] > 0) || !std::isfinite(range[i]))
      throw ValidationError("range value " + std::to_string(range[i]) + " at row " + std::to_string(i) +
                            " has no finite reciprocal weight");
    w.push_back(1.0 / range[i]);
  }
  return w;
}

std::vector<std::int64_t> systematic_counts(const std::vector<double>& weights, std::int64_t n_out,
                                            double u0) {
  if (n_out < 1) throw std::invalid_argument("n_out must be >= 1");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0) || !std::isfinite(total)) throw ValidationError("weights do not have a positive finite sum");
  std::vector<std::int64_t> counts(weights.size(), 0);
  const double n = static_cast<double>(n_out);
  double cum = 0;
  std::int64_t j = 0;
  for (std::size_t i = 0; i < weights.size() && j < n_out; ++i) {
    cum += weights[i] / total;
    while (j < n_out && (u0 + static_cast<double>(j)) / n < cum) {
      ++counts[i];
      ++j;
    }
  }
  // rounding can leave the final positions unassigned; give them to the last
  // sample with positive weight
  if (j < n_out) {
    for (std::size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0) {
        counts[i] += n_out - j;
        break;
      }
    }
  }
  return counts;
}

SampleSet resample(const WeightedSampleSet& ws, std::int64_t n_out, Rng& rng) {
  ws.check();
  const std::vector<std::int64_t> counts = systematic_counts(ws.weights, n_out, rng.uniform());
  const SampleSet& in = ws.samples;
  SampleSet out;
  out.d = in.d;
  out.meta = in.meta;
  out.meta.numstep = n_out;
  out.states.reserve(static_cast<std::size_t>(n_out));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::int64_t c = 0; c < counts[i]; ++c) {
      out.states.push_back(in.states[i]);
      out.purity.push_back(in.purity[i]);
      if (!in.probabilities.empty()) out.probabilities.push_back(in.probabilities[i]);
    }
  }
  return out;
}

}  // namespace qsample
