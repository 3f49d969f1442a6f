#include "qsample/reproduce.hpp"

#include <filesystem>
#include <stdexcept>

#include "qsample/ginibre.hpp"
#include "qsample/sample_io.hpp"

namespace qsample {

const std::vector<Family>& sample_families() {
  using P = PriorKind;
  using M = FamilyMethod;
  static const std::vector<Family> families{
      {"1qb_IC_prim", 2, P::primitive, "", false, M::ginibre},
      {"1qb_Jeff_tthd", 2, P::jeffreys, "tetrahedron", false, M::hmc},
      {"1qb_Jeff_Pauli", 2, P::jeffreys, "pauli", false, M::hmc},
      {"1qb_conj_tthd", 2, P::conjugate, "tetrahedron", false, M::hmc},
      {"1qb_conj_Pauli", 2, P::conjugate, "pauli", false, M::hmc},
      {"1qb_NIC_prim", 2, P::primitive, "trine", true, M::ginibre},
      {"1qb_Jeff_trine", 2, P::jeffreys, "trine", true, M::hmc},
      {"1qb_Jeff_cross", 2, P::jeffreys, "crosshair", true, M::hmc},
      {"1qb_conj_trine", 2, P::conjugate, "trine", true, M::hmc},
      {"1qb_conj_cross", 2, P::conjugate, "crosshair", true, M::hmc},
      {"qutrit_prim_SIC", 3, P::primitive, "qutrit-sic", false, M::ginibre},
      {"qutrit_Jeff_SIC", 3, P::jeffreys, "qutrit-sic", false, M::hmc},
      {"qutrit_conj_SIC", 3, P::conjugate, "qutrit-sic", false, M::hmc},
      {"2qb_IC_prim", 4, P::primitive, "", false, M::ginibre},
      {"2qb_Jeff_2tthd", 4, P::jeffreys, "2tthd", false, M::hmc},
      {"2qb_conj_2tthd", 4, P::conjugate, "2tthd", false, M::hmc},
      {"2qb_NIC_prim", 4, P::primitive, "tat", true, M::ginibre},
      {"2qb_Jeff_TAT", 4, P::jeffreys, "tat", true, M::hmc},
      {"2qb_Jeff_BB84", 4, P::jeffreys, "bb84", true, M::hmc},
      {"2qb_conj_TAT", 4, P::conjugate, "tat", true, M::hmc},
      {"2qb_conj_BB84", 4, P::conjugate, "bb84", true, M::hmc},
      {"3qb_IC_prim", 8, P::primitive, "", false, M::ginibre},
      {"4qb_IC_prim", 16, P::primitive, "", false, M::ginibre},
  };
  return families;
}

const Family* find_family(const std::string& name) {
  for (const Family& f : sample_families())
    if (f.name == name) return &f;
  return nullptr;
}

ReproduceResult reproduce_family(const std::string& name, const ReproduceOptions& opts) {
  const Family* fam = find_family(name);
  if (!fam) throw std::invalid_argument("unknown sample family '" + name + "'");
  if (opts.n < 1) throw std::invalid_argument("sample count must be >= 1");

  ReproduceResult out;
  std::optional<Povm> povm;
  if (!fam->povm.empty()) povm = make_povm(fam->povm);

  if (fam->method == FamilyMethod::ginibre) {
    out.set = ginibre_sampleset(fam->d, opts.n, opts.seed, povm ? &*povm : nullptr);
  } else {
    HmcConfig cfg = opts.hmc;
    cfg.numstep = opts.n;
    cfg.seed = opts.seed;
    TargetDensity target = fam->prior == PriorKind::jeffreys
                               ? TargetDensity::jeffreys()
                               : TargetDensity::conjugate_unit(povm->outcome_count());
    const PullbackDensity pd = PullbackDensity::for_povm(*povm, std::move(target));
    out.set = run_chain(cfg, pd);
  }

  std::filesystem::create_directories(opts.out_dir);
  const std::string base = (std::filesystem::path(opts.out_dir) / fam->name).string();

  if (fam->nic) {
    const RangeResult range = fiber_ranges(out.set, *povm, opts.seed, opts.fiber_delta, opts.fiber_pool);
    out.set.weights = range.range;
    SampleMeta& m = out.set.meta;
    m.range_method = range.experimental ? "mc-box" : "analytic";
    if (range.experimental) {
      m.range_experimental = true;
      m.range_delta = range.delta;
      m.range_pool = range.pool;
    }
    WeightedSampleSet ws{out.set, weights_from_range(range.range)};
    ws.samples.weights.clear();
    Rng rng(opts.seed, streams::kResample);
    SampleSet w = resample(ws, opts.n, rng);
    w.meta.resample_seed = opts.seed;
    w.meta.range_method.reset();
    w.meta.range_experimental.reset();
    w.meta.range_delta.reset();
    w.meta.range_pool.reset();
    out.resampled = std::move(w);
  }

  write_set(out.set, base, opts.force);
  out.files = {base + "_re.txt", base + "_im.txt", base + "_meta.json"};
  if (fam->nic) {
    out.files.push_back(base + "_range.txt");
    write_set(*out.resampled, base + "_w", opts.force);
    out.files.insert(out.files.end(), {base + "_w_re.txt", base + "_w_im.txt", base + "_w_meta.json"});
  }
  return out;
}

}  // namespace qsample
