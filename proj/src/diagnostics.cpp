#include "qsample/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "qsample/sample_io.hpp"

namespace qsample {

Histogram make_histogram(const std::vector<double>& values, double lo, double hi, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (!(hi > lo)) throw std::invalid_argument("histogram range is empty");
  Histogram h{lo, hi, std::vector<std::int64_t>(static_cast<std::size_t>(bins), 0)};
  for (double v : values) {
    auto i = static_cast<long>(std::floor((v - lo) / (hi - lo) * bins));
    i = std::clamp(i, 0L, static_cast<long>(bins) - 1);
    ++h.counts[static_cast<std::size_t>(i)];
  }
  return h;
}

void write_histogram_csv(const Histogram& h, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    out << format_number(h.bin_left(i)) << ',' << format_number(h.bin_right(i)) << ',' << h.counts[i] << '\n';
  if (!out) throw IoError("write failed for " + path);
}

PurityStats purity_stats(const SampleSet& set, int bins) {
  if (set.empty()) throw std::invalid_argument("purity statistics of an empty set");
  const std::vector<double>& v = set.purity;
  const double n = static_cast<double>(v.size());
  double mean = 0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  PurityStats out;
  out.mean = mean;
  out.variance = v.size() > 1 ? ss / (n - 1) : 0.0;
  out.histogram = make_histogram(v, 1.0 / set.d, 1.0, bins);
  return out;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double threshold) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    // step past every copy of the smaller value so ties are compared after both jumps
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  r.n1 = a.size();
  r.n2 = b.size();
  r.threshold = threshold;
  r.pass = d < threshold;
  return r;
}

AuditSummary audit_set(const SampleSet& set, const Povm& povm) {
  AuditSummary s;
  s.samples = set.size();
  if (set.empty()) return s;
  if (set.d != povm.dim())
    throw DimensionError("sample set has d=" + std::to_string(set.d) + ", POVM " + povm.name() + " has d=" +
                         std::to_string(povm.dim()));
  const bool stored = set.probabilities.size() == set.size() && set.meta.povm == povm.name() &&
                      set.probabilities.front().size() == povm.outcome_count();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const ProbVector p = stored ? set.probabilities[i] : born_probabilities(povm, set.states[i]);
    const ConstraintReport r = audit_probabilities(povm, p);
    if (r.satisfied) continue;
    ++s.violating_samples;
    for (const Violation& v : r.violations) {
      s.worst_magnitude = std::max(s.worst_magnitude, v.magnitude);
      if (std::find(s.labels.begin(), s.labels.end(), v.label) == s.labels.end()) s.labels.push_back(v.label);
    }
  }
  return s;
}

}  // namespace qsample
