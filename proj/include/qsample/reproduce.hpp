#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsample/hmc.hpp"
#include "qsample/weights.hpp"

namespace qsample {

enum class FamilyMethod { ginibre, hmc };

/// One row of the published sample catalog.
struct Family {
  std::string name;
  int d;
  PriorKind prior;
  std::string povm;  // POVM the target is defined on; empty for primitive IC rows
  bool nic;
  FamilyMethod method;
};

/// The published sample families, in catalog order.
const std::vector<Family>& sample_families();
/// nullptr when the name is unknown.
const Family* find_family(const std::string& name);

struct ReproduceOptions {
  std::int64_t n = 1000;
  std::uint64_t seed = 0;
  HmcConfig hmc;  // numstep and seed are taken from n and seed
  std::string out_dir = ".";
  bool force = false;
  double fiber_delta = kDefaultFiberDelta;
  std::int64_t fiber_pool = kDefaultFiberPool;
};

struct ReproduceResult {
  SampleSet set;                       // carries the range in `weights` for NIC rows
  std::optional<SampleSet> resampled;  // the "_w" set for NIC rows
  std::vector<std::string> files;
};

/// Generates one family: primitive rows by Ginibre draws, the others by HMC.
/// NIC rows also get a fiber-volume range and a resampled "_w" set. Throws
/// std::invalid_argument for unknown names.
ReproduceResult reproduce_family(const std::string& name, const ReproduceOptions& opts);

}  // namespace qsample
