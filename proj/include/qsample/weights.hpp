#pragma once

#include <cstdint>
#include <vector>

#include "qsample/povm.hpp"
#include "qsample/random.hpp"
#include "qsample/sample_set.hpp"

namespace qsample {

inline constexpr double kDefaultFiberDelta = 0.05;
inline constexpr std::int64_t kDefaultFiberPool = 200000;

/// Samples with per-sample importance weights (finite, >= 0, not all zero).
struct WeightedSampleSet {
  SampleSet samples;
  std::vector<double> weights;

  /// Throws ValidationError on bad weights.
  void check() const;
};

/// Length of the permissible y-interval at the state's (x, z):
/// 2 sqrt(max(0, 1 - x^2 - z^2)). Trine, anti-trine and crosshair only see x and z.
double qubit_fiber_weight(const Povm& povm, const DensityMatrix& rho);

struct FiberEstimate {
  double value = 0;      // hits / (draws * (2 delta)^m)
  double std_error = 0;  // binomial standard error of value
  std::int64_t hits = 0;
  std::int64_t draws = 0;
  double delta = 0;
};

/// Box-kernel estimate of the primitive-measure density of a POVM's independent
/// probability coordinates, i.e. the relative fiber volume over p. A pool of
/// Ginibre states is drawn once and reused for every query. Experimental: the
/// estimate carries O(delta^2) smoothing bias.
class FiberVolumeEstimator {
 public:
  /// Pool drawn from stream streams::kFiber of `seed`.
  FiberVolumeEstimator(const Povm& povm, std::int64_t pool_size, std::uint64_t seed);
  FiberVolumeEstimator(const Povm& povm, std::int64_t pool_size, Rng& rng);

  /// Throws NumericalError when no pool point falls in the box.
  FiberEstimate estimate(const ProbVector& p, double delta) const;
  /// Doubles delta until at least one pool point is hit.
  FiberEstimate estimate_adaptive(const ProbVector& p, double delta) const;
  std::int64_t pool_size() const { return static_cast<std::int64_t>(pool_.cols()); }

 private:
  const Povm* povm_;
  Matrix pool_;  // m x N independent coordinates, columns sorted by row 0
};

/// Single-query form: draws n_est Ginibre states from `rng`.
FiberEstimate mc_fiber_weight(const Povm& povm, const ProbVector& p, std::int64_t n_est, double delta,
                              Rng& rng);

struct RangeResult {
  std::vector<double> range;
  bool experimental = false;
  double delta = 0;
  std::int64_t pool = 0;
};

/// Fiber volume ("range") of every sample: analytic for the single-qubit NIC
/// POVMs, Monte-Carlo for two-qubit NIC POVMs.
RangeResult fiber_ranges(const SampleSet& set, const Povm& povm, std::uint64_t seed,
                         double delta = kDefaultFiberDelta, std::int64_t pool = kDefaultFiberPool);

/// Importance weights 1/range; throws ValidationError on non-positive ranges.
std::vector<double> weights_from_range(const std::vector<double>& range);

/// Number of copies of each input under systematic resampling with offset
/// u0 in [0, 1): copies of i = #{j : (u0 + j) / n_out in [C_{i-1}, C_i)}.
std::vector<std::int64_t> systematic_counts(const std::vector<double>& weights, std::int64_t n_out,
                                            double u0);

/// Systematic resampling to n_out equally weighted samples, input order kept.
SampleSet resample(const WeightedSampleSet& ws, std::int64_t n_out, Rng& rng);

}  // namespace qsample
