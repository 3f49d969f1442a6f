#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsample/povm.hpp"
#include "qsample/sample_set.hpp"

namespace qsample {

inline constexpr double kDefaultKsThreshold = 0.02;

struct Histogram {
  double lo = 0;
  double hi = 1;
  std::vector<std::int64_t> counts;

  double bin_left(std::size_t i) const { return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(counts.size()); }
  double bin_right(std::size_t i) const { return bin_left(i + 1); }
};

/// Equal-width bins on [lo, hi]; values outside are clamped into the end bins.
Histogram make_histogram(const std::vector<double>& values, double lo, double hi, int bins);

/// Writes "bin_left,bin_right,count" rows after a header line.
void write_histogram_csv(const Histogram& h, const std::string& path);

struct PurityStats {
  double mean = 0;
  double variance = 0;  // unbiased; 0 for a single sample
  Histogram histogram;  // bins on [1/d, 1]
};

/// Throws std::invalid_argument on an empty set.
PurityStats purity_stats(const SampleSet& set, int bins = 100);

struct KsResult {
  double statistic = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double threshold = kDefaultKsThreshold;
  bool pass = false;
};

/// Exact two-sample Kolmogorov-Smirnov sup-distance between empirical CDFs.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double threshold = kDefaultKsThreshold);

struct AuditSummary {
  std::size_t samples = 0;
  std::size_t violating_samples = 0;
  double worst_magnitude = 0;
  std::vector<std::string> labels;  // distinct violated constraint labels
};

/// Audits the stored probabilities (or recomputes them by the Born rule).
AuditSummary audit_set(const SampleSet& set, const Povm& povm);

}  // namespace qsample
