#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsample/quantum_core.hpp"

namespace qsample {

/// Run metadata. Field names follow the sample-file vocabulary (d, numstep, nt,
/// nf, num, pvar, qvar, nint, stepsize, acceptrate); HMC-only fields stay empty
/// for direct (Ginibre) sets.
struct SampleMeta {
  int d = 0;
  std::optional<std::int64_t> numstep;
  std::optional<int> nt;
  std::optional<int> nf;
  std::optional<int> num;
  std::optional<double> pvar;
  std::optional<double> qvar;
  std::optional<int> nint;
  std::optional<double> stepsize;
  std::optional<double> acceptrate;
  std::optional<std::string> povm;
  std::optional<std::string> prior;
  std::optional<std::vector<double>> beta;
  std::optional<std::string> method;  // "hmc", "ginibre" or "resample"
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> burn_in;
  std::optional<std::int64_t> thin;
  int format_version = 1;

  std::optional<int> chains;
  std::optional<std::vector<double>> chain_acceptrates;
  std::optional<std::string> range_method;  // "analytic" or "mc-box"
  std::optional<bool> range_experimental;
  std::optional<double> range_delta;
  std::optional<std::int64_t> range_pool;
  std::optional<std::uint64_t> resample_seed;
};

/// States with their purities and optional probabilities and weights.
struct SampleSet {
  int d = 0;
  std::vector<DensityMatrix> states;
  std::vector<ProbVector> probabilities;  // empty, or one per state
  std::vector<double> purity;
  std::vector<double> weights;  // empty, or one per state ("range")
  SampleMeta meta;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }

  void add(DensityMatrix rho) {
    purity.push_back(qsample::purity(rho));
    states.push_back(std::move(rho));
  }

  void add(DensityMatrix rho, ProbVector p) {
    add(std::move(rho));
    probabilities.push_back(std::move(p));
  }

  /// Throws DimensionError when the per-state lists disagree in length.
  void check_shape() const {
    const std::size_t n = states.size();
    if (purity.size() != n || (!probabilities.empty() && probabilities.size() != n) ||
        (!weights.empty() && weights.size() != n))
      throw DimensionError("sample set per-state lists have inconsistent lengths");
    for (const auto& s : states)
      if (s.dim() != d) throw DimensionError("sample set mixes state dimensions");
  }
};

}  // namespace qsample
