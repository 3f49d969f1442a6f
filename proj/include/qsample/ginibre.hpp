#pragma once

#include <cstdint>

#include "qsample/povm.hpp"
#include "qsample/random.hpp"
#include "qsample/sample_set.hpp"

namespace qsample {

/// Draws per RNG substream in ginibre_sampleset: draw i uses stream
/// streams::kGinibre + i / kGinibreBlock.
inline constexpr std::int64_t kGinibreBlock = 1024;

/// d x d matrix of independent complex Gaussians, real and imaginary parts N(0, 1/2).
CMatrix ginibre_matrix(int d, Rng& rng);

/// rho = A A^dagger / tr(A A^dagger) for a Ginibre A: the primitive (Hilbert-Schmidt)
/// distribution on states.
DensityMatrix ginibre_state(int d, Rng& rng);

/// n independent Ginibre states. With a POVM, Born probabilities are attached.
SampleSet ginibre_sampleset(int d, std::int64_t n, std::uint64_t seed, const Povm* povm = nullptr);

}  // namespace qsample
