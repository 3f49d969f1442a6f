#include "qsample/ginibre.hpp"

#include <cmath>
#include <stdexcept>

namespace qsample {

CMatrix ginibre_matrix(int d, Rng& rng) {
  const double s = std::sqrt(0.5);
  CMatrix a(d, d);
  // column-major fill order is part of the reproducibility contract
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = s * rng.normal();
      const double im = s * rng.normal();
      a(i, j) = Complex(re, im);
    }
  return a;
}

DensityMatrix ginibre_state(int d, Rng& rng) {
  if (d < 1) throw DimensionError("Ginibre dimension must be >= 1");
  for (;;) {
    const CMatrix a = ginibre_matrix(d, rng);
    if (a.squaredNorm() > 0) return density_from_trusted(gram_state(a));
  }
}

SampleSet ginibre_sampleset(int d, std::int64_t n, std::uint64_t seed, const Povm* povm) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  if (povm && povm->dim() != d) throw DimensionError("POVM dimension does not match d");
  SampleSet set;
  set.d = d;
  set.states.reserve(static_cast<std::size_t>(n));
  set.purity.reserve(static_cast<std::size_t>(n));
  for (std::int64_t block = 0; block * kGinibreBlock < n; ++block) {
    Rng rng(seed, streams::kGinibre + static_cast<std::uint64_t>(block));
    const std::int64_t end = std::min(n, (block + 1) * kGinibreBlock);
    for (std::int64_t i = block * kGinibreBlock; i < end; ++i) {
      DensityMatrix rho = ginibre_state(d, rng);
      if (!check_density(rho.matrix()).ok()) throw NumericalError("Ginibre draw failed validation");
      if (povm) {
        ProbVector p = born_probabilities(*povm, rho);
        set.add(std::move(rho), std::move(p));
      } else {
        set.add(std::move(rho));
      }
    }
  }
  SampleMeta& m = set.meta;
  m.d = d;
  m.numstep = n;
  m.method = "ginibre";
  m.prior = "prim";
  m.seed = seed;
  if (povm) m.povm = povm->name();
  return set;
}

}  // namespace qsample
