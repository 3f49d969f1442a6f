#include "qsample/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsample/diagnostics.hpp"
#include "qsample/ginibre.hpp"
#include "qsample/hmc.hpp"
#include "qsample/reproduce.hpp"
#include "qsample/sample_io.hpp"
#include "qsample/weights.hpp"

namespace qsample {

namespace {

/// Console numbers: scientific notation, 6 significant digits.
std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TargetDensity parse_prior(const std::string& token, const std::vector<double>& beta, int outcomes) {
  if (token == "prim") return TargetDensity::primitive();
  if (token == "jeff") return TargetDensity::jeffreys();
  if (token == "conj") {
    if (beta.empty()) return TargetDensity::conjugate_unit(outcomes);
    if (static_cast<int>(beta.size()) != outcomes)
      throw UsageError("--beta needs " + std::to_string(outcomes) + " values, got " + std::to_string(beta.size()));
    return TargetDensity::conjugate(Eigen::Map<const Vector>(beta.data(), static_cast<Eigen::Index>(beta.size())));
  }
  throw UsageError("unknown prior '" + token + "' (expected prim, jeff or conj)");
}

void add_hmc_flags(CLI::App* cmd, HmcConfig& cfg) {
  cmd->add_option("--pvar", cfg.pvar, "momentum variance")->capture_default_str();
  cmd->add_option("--qvar", cfg.qvar, "trajectory length in position space")->capture_default_str();
  cmd->add_option("--nint", cfg.nint, "leapfrog jumps per trajectory")->capture_default_str();
  cmd->add_option("--burn-in", cfg.burn_in, "transitions discarded before sampling")->capture_default_str();
  cmd->add_option("--thin", cfg.thin, "transitions per emitted sample")->capture_default_str();
}

struct SampleArgs {
  int d = 0;
  std::string povm;
  std::string prior;
  std::vector<double> beta;
  HmcConfig cfg;
  std::string out;
  int chains = 1;
  std::string jacobian = "closed-form";
  double fiber_delta = kDefaultFiberDelta;
  std::int64_t fiber_pool = kDefaultFiberPool;
  bool force = false;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  Povm povm = make_povm(a.povm);
  if (povm.dim() != a.d)
    throw UsageError("--d " + std::to_string(a.d) + " does not match POVM " + a.povm + " (d=" +
                     std::to_string(povm.dim()) + ")");
  JacobianRoute route;
  if (a.jacobian == "closed-form") route = JacobianRoute::closed_form;
  else if (a.jacobian == "qr") route = JacobianRoute::qr;
  else throw UsageError("--jacobian must be closed-form or qr");
  TargetDensity target = parse_prior(a.prior, a.beta, povm.outcome_count());
  a.cfg.validate();
  const PullbackDensity pd = PullbackDensity::for_povm(povm, std::move(target), route);
  SampleSet set = run_chains(a.cfg, pd, a.chains);
  if (!povm.is_ic()) {
    const RangeResult r = fiber_ranges(set, povm, a.cfg.seed, a.fiber_delta, a.fiber_pool);
    set.weights = r.range;
    set.meta.range_method = r.experimental ? "mc-box" : "analytic";
    if (r.experimental) {
      set.meta.range_experimental = true;
      set.meta.range_delta = r.delta;
      set.meta.range_pool = r.pool;
    }
  }
  write_set(set, a.out, a.force);
  out << "samples " << set.size() << "\n";
  out << "acceptrate " << sci(*set.meta.acceptrate) << "\n";
  if (set.meta.chain_acceptrates)
    for (std::size_t c = 0; c < set.meta.chain_acceptrates->size(); ++c)
      out << "chain " << c << " acceptrate " << sci((*set.meta.chain_acceptrates)[c]) << "\n";
  return kExitOk;
}

int cmd_direct(int d, std::int64_t n, std::uint64_t seed, const std::string& povm_name, const std::string& base,
               bool force, std::ostream& out) {
  std::optional<Povm> povm;
  if (!povm_name.empty()) {
    povm = make_povm(povm_name);
    if (povm->dim() != d) throw UsageError("--povm " + povm_name + " does not match --d");
  }
  const SampleSet set = ginibre_sampleset(d, n, seed, povm ? &*povm : nullptr);
  write_set(set, base, force);
  const PurityStats st = purity_stats(set, 100);
  out << "samples " << set.size() << "\n";
  out << "purity_mean " << sci(st.mean) << "\n";
  return kExitOk;
}

int cmd_resample(const std::string& in, std::string weights_path, std::int64_t n, std::uint64_t seed,
                 std::string base, bool force, std::ostream& out) {
  SampleSet set = read_set(in);
  std::vector<double> range = weights_path.empty() ? set.weights : read_range(weights_path);
  if (range.empty()) throw UsageError("no range values: pass --weights or provide " + in + "_range.txt");
  if (range.size() != set.size())
    throw UsageError("range file has " + std::to_string(range.size()) + " rows for " + std::to_string(set.size()) +
                     " states");
  if (base.empty()) base = in + "_w";
  std::vector<double> w;
  try {
    w = weights_from_range(range);
  } catch (const ValidationError& e) {
    throw NumericalError(e.what());
  }
  set.weights.clear();
  WeightedSampleSet ws{std::move(set), std::move(w)};
  Rng rng(seed, streams::kResample);
  SampleSet res = resample(ws, n, rng);
  res.meta.resample_seed = seed;
  res.meta.range_method.reset();
  res.meta.range_experimental.reset();
  res.meta.range_delta.reset();
  res.meta.range_pool.reset();
  write_set(res, base, force);
  out << "samples " << res.size() << "\n";
  return kExitOk;
}

int cmd_audit(const std::string& in, const std::string& povm_name, std::ostream& out) {
  const SampleSet set = read_set(in);
  const Povm povm = make_povm(povm_name);
  if (!set.empty() && set.d != povm.dim())
    throw UsageError("set has d=" + std::to_string(set.d) + ", POVM " + povm_name + " has d=" +
                     std::to_string(povm.dim()));
  const AuditSummary s = audit_set(set, povm);
  out << "samples " << s.samples << "\n";
  out << "violations " << s.violating_samples << "\n";
  out << "worst " << sci(s.worst_magnitude) << "\n";
  for (const std::string& l : s.labels) out << "violated " << l << "\n";
  return s.violating_samples == 0 ? kExitOk : kExitNumeric;
}

int cmd_stats(const std::string& in, int bins, const std::string& csv, std::ostream& out) {
  const SampleSet set = read_set(in);
  const PurityStats st = purity_stats(set, bins);
  out << "samples " << set.size() << "\n";
  out << "d " << set.d << "\n";
  out << "purity_mean " << sci(st.mean) << "\n";
  out << "purity_variance " << sci(st.variance) << "\n";
  if (set.meta.acceptrate) out << "acceptrate " << sci(*set.meta.acceptrate) << "\n";
  if (!csv.empty()) write_histogram_csv(st.histogram, csv);
  return kExitOk;
}

int cmd_povm(const std::string& name, std::ostream& out) {
  if (name == "list") {
    for (const std::string& n : povm_names()) out << n << "\n";
    return kExitOk;
  }
  const Povm p = make_povm(name);
  out << "name " << p.name() << "\n";
  out << "d " << p.dim() << "\n";
  out << "K " << p.outcome_count() << "\n";
  out << "indep_dim " << p.indep_dim() << "\n";
  out << "completeness " << (p.is_ic() ? "IC" : "NIC") << "\n";
  out << "completeness_residual " << sci(p.completeness_residual()) << "\n";
  for (int k = 0; k < p.outcome_count(); ++k) {
    out << "outcome " << k + 1 << "\n";
    const CMatrix& m = p.outcome(k);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out << " ";
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        out << " " << sci(m(r, c).real()) << (m(r, c).imag() < 0 ? "-" : "+") << sci(std::abs(m(r, c).imag())) << "i";
      out << "\n";
    }
  }
  return kExitOk;
}

int cmd_reproduce(const std::string& family, const ReproduceOptions& opts, std::ostream& out) {
  if (family == "list") {
    for (const Family& f : sample_families()) out << f.name << "\n";
    return kExitOk;
  }
  if (!find_family(family)) throw UsageError("unknown sample family '" + family + "'");
  opts.hmc.validate();
  const ReproduceResult r = reproduce_family(family, opts);
  for (const std::string& f : r.files) out << "wrote " << f << "\n";
  if (r.set.meta.acceptrate) out << "acceptrate " << sci(*r.set.meta.acceptrate) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random samples of quantum states for POVM-induced target densities"};
  app.require_subcommand(1);

  SampleArgs sa;
  sa.cfg.seed = 0;
  auto* sample = app.add_subcommand("sample", "HMC sampling of a prior on a POVM's probability space");
  sample->add_option("--d", sa.d, "Hilbert-space dimension")->required();
  sample->add_option("--povm", sa.povm, "POVM name (see `povm list`)")->required();
  sample->add_option("--prior", sa.prior, "prim | jeff | conj")->required();
  sample->add_option("--beta", sa.beta, "conjugate hyperparameters, one per outcome")->delimiter(',');
  sample->add_option("--numstep", sa.cfg.numstep, "samples to emit")->capture_default_str();
  add_hmc_flags(sample, sa.cfg);
  sample->add_option("--seed", sa.cfg.seed, "RNG seed")->capture_default_str();
  sample->add_option("--out", sa.out, "output basename")->required();
  sample->add_option("--chains", sa.chains, "independent chains, merged in order")->capture_default_str();
  sample->add_option("--jacobian", sa.jacobian, "closed-form | qr")->capture_default_str();
  sample->add_option("--fiber-delta", sa.fiber_delta, "bin half-width for two-qubit NIC ranges")
      ->capture_default_str();
  sample->add_option("--fiber-pool", sa.fiber_pool, "Ginibre pool size for two-qubit NIC ranges")
      ->capture_default_str();
  sample->add_flag("--force", sa.force, "overwrite existing files");

  int dd = 0;
  std::int64_t dn = 0;
  std::uint64_t dseed = 0;
  std::string dpovm, dout;
  bool dforce = false;
  auto* direct = app.add_subcommand("direct", "Ginibre sampling of the primitive prior");
  direct->add_option("--d", dd, "Hilbert-space dimension")->required()->check(CLI::PositiveNumber);
  direct->add_option("--n", dn, "number of states")->required()->check(CLI::PositiveNumber);
  direct->add_option("--seed", dseed, "RNG seed")->capture_default_str();
  direct->add_option("--povm", dpovm, "record this POVM in the metadata");
  direct->add_option("--out", dout, "output basename")->required();
  direct->add_flag("--force", dforce, "overwrite existing files");

  std::string rin, rweights, rout;
  std::int64_t rn = 0;
  std::uint64_t rseed = 0;
  bool rforce = false;
  auto* res = app.add_subcommand("resample", "systematic resampling with 1/range weights");
  res->add_option("--in", rin, "input basename")->required();
  res->add_option("--weights", rweights, "range file (default <in>_range.txt)");
  res->add_option("--n", rn, "output size")->required()->check(CLI::PositiveNumber);
  res->add_option("--seed", rseed, "RNG seed")->capture_default_str();
  res->add_option("--out", rout, "output basename (default <in>_w)");
  res->add_flag("--force", rforce, "overwrite existing files");

  std::string ain, apovm;
  auto* audit = app.add_subcommand("audit", "check every sample against the POVM's constraint factor");
  audit->add_option("--in", ain, "input basename")->required();
  audit->add_option("--povm", apovm, "POVM name")->required();

  std::string sin, scsv;
  int sbins = 100;
  auto* stats = app.add_subcommand("stats", "purity statistics and histogram");
  stats->add_option("--in", sin, "input basename")->required();
  stats->add_option("--hist-bins", sbins, "histogram bins on [1/d, 1]")->capture_default_str()->check(
      CLI::PositiveNumber);
  stats->add_option("--csv", scsv, "write the histogram as CSV");

  std::string pname;
  auto* povm = app.add_subcommand("povm", "describe a catalog POVM, or `list`");
  povm->add_option("name", pname, "POVM name or list")->required();

  std::string family;
  ReproduceOptions ro;
  auto* rep = app.add_subcommand("reproduce", "regenerate a published sample family, or `list`");
  rep->add_option("family", family, "family name")->required();
  rep->add_option("--n", ro.n, "number of states")->capture_default_str()->check(CLI::PositiveNumber);
  rep->add_option("--seed", ro.seed, "RNG seed")->capture_default_str();
  rep->add_option("--out-dir", ro.out_dir, "output directory")->capture_default_str();
  add_hmc_flags(rep, ro.hmc);
  rep->add_option("--fiber-delta", ro.fiber_delta, "bin half-width for two-qubit NIC ranges")
      ->capture_default_str();
  rep->add_option("--fiber-pool", ro.fiber_pool, "Ginibre pool size for two-qubit NIC ranges")
      ->capture_default_str();
  rep->add_flag("--force", ro.force, "overwrite existing files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*sample) return cmd_sample(sa, out);
    if (*direct) return cmd_direct(dd, dn, dseed, dpovm, dout, dforce, out);
    if (*res) return cmd_resample(rin, rweights, rn, rseed, rout, rforce, out);
    if (*audit) return cmd_audit(ain, apovm, out);
    if (*stats) return cmd_stats(sin, sbins, scsv, out);
    if (*povm) return cmd_povm(pname, out);
    if (*rep) return cmd_reproduce(family, ro, out);
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qsample
