#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qsample/ginibre.hpp"
#include "qsample/sample_io.hpp"
#include "test_util.hpp"

using namespace qsample;
using qsample::test::slurp;
using qsample::test::temp_dir;

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_SUITE("sample-store-io") {

TEST_CASE("canonical rendering of the maximally mixed qubit") {
  const auto dir = temp_dir("io_mixed");
  SampleSet s;
  s.d = 2;
  s.add(DensityMatrix::maximally_mixed(2));
  const std::string base = (dir / "m").string();
  write_set(s, base);
  CHECK(slurp(base + "_re.txt") == "0.5 0 0 0.5\n");
  CHECK(slurp(base + "_im.txt") == "0 0 0 0\n");
  CHECK(std::filesystem::exists(base + "_meta.json"));
  CHECK_FALSE(std::filesystem::exists(base + "_range.txt"));
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("round trip is bit-exact and canonical") {
  const auto dir = temp_dir("io_roundtrip");
  for (int d : {2, 3, 4, 8}) {
    SampleSet s = ginibre_sampleset(d, 1000, static_cast<std::uint64_t>(d));
    s.weights.resize(s.size());
    Rng rng(1);
    for (double& w : s.weights) w = rng.uniform();
    const std::string base = (dir / ("d" + std::to_string(d))).string();
    write_set(s, base);
    const std::string re = slurp(base + "_re.txt");
    CHECK(std::count(re.begin(), re.end(), '\n') == 1000);
    const SampleSet r = read_set(base);
    REQUIRE(r.size() == s.size());
    CHECK(r.d == d);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(r.states[i].matrix() == s.states[i].matrix());
    CHECK(r.weights == s.weights);
    CHECK(*r.meta.method == "ginibre");
    CHECK(*r.meta.seed == static_cast<std::uint64_t>(d));

    const std::string base2 = (dir / ("again" + std::to_string(d))).string();
    write_set(r, base2);
    for (const char* suffix : {"_re.txt", "_im.txt", "_range.txt", "_meta.json"})
      CHECK(slurp(base + suffix) == slurp(base2 + suffix));
  }
}

TEST_CASE("row-major token order") {
  const auto dir = temp_dir("io_order");
  CMatrix m(2, 2);
  m << Complex(0.7, 0), Complex(0.1, 0.2), Complex(0.1, -0.2), Complex(0.3, 0);
  SampleSet s;
  s.d = 2;
  s.add(DensityMatrix(m));
  const std::string base = (dir / "o").string();
  write_set(s, base);
  CHECK(slurp(base + "_im.txt") == "0 0.20000000000000001 -0.20000000000000001 0\n");
}

TEST_CASE("refuses to overwrite unless forced") {
  const auto dir = temp_dir("io_force");
  const SampleSet s = ginibre_sampleset(2, 3, 1);
  const std::string base = (dir / "f").string();
  write_set(s, base);
  CHECK_THROWS_AS(write_set(s, base), IoError);
  CHECK_NOTHROW(write_set(s, base, true));
  CHECK_THROWS_AS(write_set(s, (dir / "missing" / "x").string()), IoError);
}

TEST_CASE("metadata survives a round trip and may be absent") {
  SampleMeta m;
  m.d = 4;
  m.numstep = 10;
  m.nt = 9;
  m.nf = 6;
  m.num = 15;
  m.pvar = 1;
  m.qvar = 0.1;
  m.nint = 10;
  m.stepsize = 0.01;
  m.acceptrate = 0.987654321;
  m.povm = "tat";
  m.prior = "conj";
  m.beta = std::vector<double>(9, 1.0);
  m.method = "hmc";
  m.seed = 18446744073709551615ULL;
  m.burn_in = 1000;
  m.thin = 1;
  m.chains = 2;
  m.chain_acceptrates = std::vector<double>{0.9, 0.95};
  m.range_method = "mc-box";
  m.range_experimental = true;
  m.range_delta = 0.05;
  m.range_pool = 200000;
  m.resample_seed = 3;
  const std::string text = meta_to_json(m);
  CHECK(meta_to_json(meta_from_json(text)) == text);
  CHECK(*meta_from_json(text).seed == 18446744073709551615ULL);
  CHECK_THROWS_AS(meta_from_json("{not json"), FormatError);
  CHECK_THROWS_AS(meta_from_json("[1,2]"), FormatError);
  CHECK_THROWS_AS(meta_from_json("{\"nint\": \"ten\"}"), FormatError);

  const auto dir = temp_dir("io_nometa");
  write_text(dir / "n_re.txt", "1 0 0 0\n");
  write_text(dir / "n_im.txt", "0 0 0 0\n");
  const SampleSet s = read_set((dir / "n").string());
  CHECK(s.size() == 1);
  CHECK(s.meta.d == 2);
  CHECK_FALSE(s.meta.method.has_value());
}

TEST_CASE("row count mismatch names both counts") {
  const auto dir = temp_dir("io_rows");
  write_text(dir / "r_re.txt", "0.5 0 0 0.5\n0.5 0 0 0.5\n");
  write_text(dir / "r_im.txt", "0 0 0 0\n");
  try {
    read_set((dir / "r").string());
    FAIL("expected RowCountMismatchError");
  } catch (const RowCountMismatchError& e) {
    CHECK(e.re_rows() == 2);
    CHECK(e.im_rows() == 1);
    CHECK(std::string(e.what()).find("has 2") != std::string::npos);
    CHECK(std::string(e.what()).find("has 1") != std::string::npos);
  }
}

TEST_CASE("non-PSD row reports its index and minimum eigenvalue") {
  const auto dir = temp_dir("io_psd");
  write_text(dir / "p_re.txt", "0.5 0 0 0.5\n1.5 0 0 -0.5\n");
  write_text(dir / "p_im.txt", "0 0 0 0\n0 0 0 0\n");
  try {
    read_set((dir / "p").string());
    FAIL("expected InvalidStateError");
  } catch (const InvalidStateError& e) {
    CHECK(e.row() == 1);
    CHECK(e.min_eigenvalue() == doctest::Approx(-0.5));
  }
}

TEST_CASE("malformed files") {
  const auto dir = temp_dir("io_bad");
  const std::string base = (dir / "b").string();
  write_text(dir / "b_re.txt", "0.5 zero 0 0.5\n");
  write_text(dir / "b_im.txt", "0 0 0 0\n");
  CHECK_THROWS_AS(read_set(base), FormatError);
  write_text(dir / "b_re.txt", "0.5 0 0\n");
  write_text(dir / "b_im.txt", "0 0 0\n");
  CHECK_THROWS_AS(read_set(base), FormatError);
  write_text(dir / "b_re.txt", "0.5 0 0 0.5\n");
  write_text(dir / "b_im.txt", "0 0 0\n");
  CHECK_THROWS_AS(read_set(base), FormatError);
  write_text(dir / "b_re.txt", "0.5 0 0 0.5\n1 0 0 0 0 0 0 0 0\n");
  write_text(dir / "b_im.txt", "0 0 0 0\n0 0 0 0 0 0 0 0 0\n");
  CHECK_THROWS_AS(read_set(base), FormatError);
  write_text(dir / "b_re.txt", "0.5 nan 0 0.5\n");
  write_text(dir / "b_im.txt", "0 0 0 0\n");
  CHECK_THROWS_AS(read_set(base), FormatError);
  write_text(dir / "b_re.txt", "0.5 0 0 0.5\n");
  write_text(dir / "b_range.txt", "1\n2\n");
  CHECK_THROWS_AS(read_set(base), FormatError);
  CHECK_THROWS_AS(read_set((dir / "nothing").string()), FormatError);
}

}  // TEST_SUITE
