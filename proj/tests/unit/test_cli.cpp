#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qsample/cli.hpp"
#include "qsample/sample_io.hpp"
#include "test_util.hpp"

using namespace qsample;
using qsample::test::slurp;
using qsample::test::temp_dir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qsample");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

void same_files(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(a)) names.push_back(e.path().filename().string());
  std::size_t nb = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(b)) ++nb;
  CHECK(names.size() == nb);
  for (const auto& n : names) {
    INFO(n);
    CHECK(slurp((a / n).string()) == slurp((b / n).string()));
  }
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sample writes the three files and reports the acceptance rate") {
  const auto dir = temp_dir("cli_sample");
  const std::string base = (dir / "t").string();
  const Run r = cli({"sample", "--d", "2", "--povm", "tetrahedron", "--prior", "jeff", "--numstep", "1000", "--seed",
                     "7", "--out", base});
  REQUIRE(r.code == kExitOk);
  for (const char* s : {"_re.txt", "_im.txt", "_meta.json"}) CHECK(std::filesystem::exists(base + s));
  CHECK(r.out.find("acceptrate ") != std::string::npos);
  const SampleSet set = read_set(base);
  CHECK(set.size() == 1000);
  CHECK(*set.meta.acceptrate > 0);
  CHECK(*set.meta.acceptrate <= 1);
  CHECK(*set.meta.pvar == 1.0);
  CHECK(*set.meta.qvar == 0.1);
  CHECK(*set.meta.nint == 10);
  CHECK(*set.meta.seed == 7);
  // console numbers use 6 significant digits
  const auto pos = r.out.find("acceptrate ");
  const std::string num = r.out.substr(pos + 11, r.out.find('\n', pos) - pos - 11);
  CHECK(num.size() == std::string("9.99000e-01").size());
  CHECK(num.find('e') != std::string::npos);
}

TEST_CASE("sample with a NIC POVM also writes the range") {
  const auto dir = temp_dir("cli_nic");
  const std::string base = (dir / "c").string();
  const Run r = cli({"sample", "--d", "2", "--povm", "crosshair", "--prior", "conj", "--beta", "1,2,1,2",
                     "--numstep", "300", "--seed", "3", "--out", base});
  REQUIRE(r.code == kExitOk);
  CHECK(count_lines(slurp(base + "_range.txt")) == 300);
  const SampleSet set = read_set(base);
  CHECK(*set.meta.beta == std::vector<double>{1, 2, 1, 2});
  CHECK(*set.meta.range_method == "analytic");
}

TEST_CASE("same seed gives byte-identical files") {
  const auto a = temp_dir("cli_det_a"), b = temp_dir("cli_det_b");
  for (const auto& dir : {a, b}) {
    CHECK(cli({"sample", "--d", "2", "--povm", "trine", "--prior", "jeff", "--numstep", "500", "--seed", "11", "--out",
               (dir / "s").string(), "--chains", "2"})
              .code == 0);
    CHECK(cli({"direct", "--d", "3", "--n", "500", "--seed", "11", "--out", (dir / "g").string()}).code == 0);
    CHECK(cli({"resample", "--in", (dir / "s").string(), "--n", "400", "--seed", "5"}).code == 0);
  }
  same_files(a, b);
  CHECK(std::filesystem::exists(a / "s_w_re.txt"));
}

TEST_CASE("usage errors exit with 2") {
  const auto dir = temp_dir("cli_usage");
  const std::string base = (dir / "u").string();
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"sample", "--d", "2", "--povm", "tetrahedron", "--prior", "jeff", "--out", base, "--bogus", "1"}).code ==
        kExitUsage);
  CHECK(cli({"sample", "--d", "2", "--povm", "tetrahedron", "--prior", "flat", "--out", base}).code == kExitUsage);
  CHECK(cli({"sample", "--d", "3", "--povm", "tetrahedron", "--prior", "jeff", "--out", base}).code == kExitUsage);
  CHECK(cli({"sample", "--d", "2", "--povm", "tetrahedron", "--prior", "conj", "--beta", "1,1", "--out", base})
            .code == kExitUsage);
  CHECK(cli({"sample", "--d", "2", "--povm", "tetrahedron", "--prior", "jeff", "--nint", "0", "--out", base}).code ==
        kExitUsage);
  CHECK(cli({"sample", "--d", "2", "--povm", "nope", "--prior", "jeff", "--out", base}).code == kExitUsage);
  CHECK(cli({"stats", "--in", (dir / "missing").string()}).code == kExitUsage);
  CHECK(cli({"reproduce", "5qb_IC_prim"}).code == kExitUsage);
  CHECK(cli({"povm", "hexagon"}).code == kExitUsage);
  CHECK(cli({"direct", "--d", "2", "--n", "3", "--out", base}).code == kExitOk);
  CHECK(cli({"direct", "--d", "2", "--n", "3", "--out", base}).code == kExitUsage);
  CHECK(cli({"direct", "--d", "2", "--n", "3", "--out", base, "--force"}).code == kExitOk);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("numerical failures exit with 3") {
  const auto dir = temp_dir("cli_numeric");
  const std::string base = (dir / "z").string();
  REQUIRE(cli({"direct", "--d", "2", "--n", "3", "--out", base}).code == 0);
  {
    std::ofstream range(base + "_range.txt");
    range << "1\n0\n2\n";
  }
  const Run r = cli({"resample", "--in", base, "--n", "5"});
  CHECK(r.code == kExitNumeric);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("audit and stats") {
  const auto dir = temp_dir("cli_audit");
  const std::string base = (dir / "a").string();
  REQUIRE(cli({"direct", "--d", "2", "--n", "200", "--seed", "2", "--povm", "pauli", "--out", base}).code == 0);
  const Run ok = cli({"audit", "--in", base, "--povm", "pauli"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("violations 0") != std::string::npos);
  CHECK(cli({"audit", "--in", base, "--povm", "qutrit-sic"}).code == kExitUsage);

  const std::string csv = (dir / "h.csv").string();
  const Run st = cli({"stats", "--in", base, "--hist-bins", "20", "--csv", csv});
  CHECK(st.code == 0);
  CHECK(st.out.find("purity_mean ") != std::string::npos);
  CHECK(count_lines(slurp(csv)) == 21);

}

TEST_CASE("povm reports") {
  const Run list = cli({"povm", "list"});
  CHECK(list.code == 0);
  CHECK(count_lines(list.out) == 9);
  const Run sic = cli({"povm", "qutrit-sic"});
  CHECK(sic.out.find("K 9\n") != std::string::npos);
  CHECK(sic.out.find("completeness IC\n") != std::string::npos);
  const auto pos = sic.out.find("completeness_residual ");
  CHECK(std::stod(sic.out.substr(pos + 22)) <= 1e-12);
  const Run bb = cli({"povm", "bb84"});
  CHECK(bb.out.find("indep_dim 8\n") != std::string::npos);
  CHECK(bb.out.find("completeness NIC\n") != std::string::npos);
}

TEST_CASE("reproduce dispatches the catalog rows") {
  const Run list = cli({"reproduce", "list"});
  CHECK(count_lines(list.out) == 23);

  const auto dir = temp_dir("cli_reproduce");
  const std::string out = dir.string();
  REQUIRE(cli({"reproduce", "3qb_IC_prim", "--n", "1000", "--seed", "1", "--out-dir", out}).code == 0);
  const SampleSet g = read_set((dir / "3qb_IC_prim").string());
  CHECK(g.d == 8);
  CHECK(g.size() == 1000);
  CHECK(*g.meta.method == "ginibre");

  REQUIRE(cli({"reproduce", "1qb_conj_Pauli", "--n", "1000", "--out-dir", out}).code == 0);
  const SampleSet c = read_set((dir / "1qb_conj_Pauli").string());
  CHECK(*c.meta.method == "hmc");
  CHECK(*c.meta.povm == "pauli");
  CHECK(*c.meta.prior == "conj");
  CHECK(*c.meta.beta == std::vector<double>(6, 1.0));

  REQUIRE(cli({"reproduce", "2qb_Jeff_TAT", "--n", "1000", "--out-dir", out, "--fiber-pool", "50000"}).code == 0);
  const SampleSet t = read_set((dir / "2qb_Jeff_TAT").string());
  CHECK(t.d == 4);
  CHECK(*t.meta.method == "hmc");
  CHECK(*t.meta.prior == "jeff");
  CHECK(t.weights.size() == 1000);
  CHECK(*t.meta.range_experimental);
  const SampleSet tw = read_set((dir / "2qb_Jeff_TAT_w").string());
  CHECK(tw.size() == 1000);
  CHECK(tw.weights.empty());
}

}  // TEST_SUITE
