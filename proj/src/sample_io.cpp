#include "qsample/sample_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qsample {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void ensure_writable(const std::string& path, bool force) {
  if (!force && fs::exists(path)) throw IoError("refusing to overwrite existing file " + path);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

double parse_number(std::string_view tok, const std::string& path, std::size_t line) {
  double v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw FormatError("malformed number '" + std::string(tok) + "' in " + path + " line " +
                      std::to_string(line + 1));
  return v;
}

std::vector<double> parse_row(const std::string& text, const std::string& path, std::size_t line) {
  std::vector<double> row;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) row.push_back(parse_number(std::string_view(text).substr(i, j - i), path, line));
    i = j;
  }
  return row;
}

int side_from_length(std::size_t n, const std::string& path, std::size_t line) {
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || static_cast<std::size_t>(d) * static_cast<std::size_t>(d) != n)
    throw FormatError(path + " line " + std::to_string(line + 1) + " has " + std::to_string(n) +
                      " entries, not a perfect square");
  return d;
}

template <typename T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
void get(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j[key].is_null()) v = j[key].get<T>();
}

}  // namespace

std::string format_number(double v) {
  if (v == 0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string meta_to_json(const SampleMeta& m) {
  json j = json::object();
  j["d"] = m.d;
  j["format_version"] = m.format_version;
  put(j, "numstep", m.numstep);
  put(j, "nt", m.nt);
  put(j, "nf", m.nf);
  put(j, "num", m.num);
  put(j, "pvar", m.pvar);
  put(j, "qvar", m.qvar);
  put(j, "nint", m.nint);
  put(j, "stepsize", m.stepsize);
  put(j, "acceptrate", m.acceptrate);
  put(j, "povm", m.povm);
  put(j, "prior", m.prior);
  put(j, "beta", m.beta);
  put(j, "method", m.method);
  put(j, "seed", m.seed);
  put(j, "burn_in", m.burn_in);
  put(j, "thin", m.thin);
  put(j, "chains", m.chains);
  put(j, "chain_acceptrates", m.chain_acceptrates);
  put(j, "range_method", m.range_method);
  put(j, "range_experimental", m.range_experimental);
  put(j, "range_delta", m.range_delta);
  put(j, "range_pool", m.range_pool);
  put(j, "resample_seed", m.resample_seed);
  return j.dump(2) + "\n";
}

SampleMeta meta_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("metadata is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("metadata must be a JSON object");
  SampleMeta m;
  try {
    if (j.contains("d")) m.d = j["d"].get<int>();
    if (j.contains("format_version")) m.format_version = j["format_version"].get<int>();
    get(j, "numstep", m.numstep);
    get(j, "nt", m.nt);
    get(j, "nf", m.nf);
    get(j, "num", m.num);
    get(j, "pvar", m.pvar);
    get(j, "qvar", m.qvar);
    get(j, "nint", m.nint);
    get(j, "stepsize", m.stepsize);
    get(j, "acceptrate", m.acceptrate);
    get(j, "povm", m.povm);
    get(j, "prior", m.prior);
    get(j, "beta", m.beta);
    get(j, "method", m.method);
    get(j, "seed", m.seed);
    get(j, "burn_in", m.burn_in);
    get(j, "thin", m.thin);
    get(j, "chains", m.chains);
    get(j, "chain_acceptrates", m.chain_acceptrates);
    get(j, "range_method", m.range_method);
    get(j, "range_experimental", m.range_experimental);
    get(j, "range_delta", m.range_delta);
    get(j, "range_pool", m.range_pool);
    get(j, "resample_seed", m.resample_seed);
  } catch (const json::exception& e) {
    throw FormatError(std::string("metadata field has the wrong type: ") + e.what());
  }
  return m;
}

void write_range(const std::string& path, const std::vector<double>& values, bool force) {
  ensure_writable(path, force);
  std::ofstream out = open_out(path);
  for (double v : values) out << format_number(v) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

std::vector<double> read_range(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<double> values;
  values.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::vector<double> row = parse_row(lines[i], path, i);
    if (row.size() != 1)
      throw FormatError(path + " line " + std::to_string(i + 1) + " must hold exactly one value");
    values.push_back(row[0]);
  }
  return values;
}

void write_set(const SampleSet& set, const std::string& basename, bool force) {
  set.check_shape();
  const std::string re_path = basename + "_re.txt";
  const std::string im_path = basename + "_im.txt";
  const std::string range_path = basename + "_range.txt";
  const std::string meta_path = basename + "_meta.json";
  ensure_writable(re_path, force);
  ensure_writable(im_path, force);
  ensure_writable(meta_path, force);
  if (!set.weights.empty()) ensure_writable(range_path, force);

  std::ofstream re = open_out(re_path);
  std::ofstream im = open_out(im_path);
  std::string re_line, im_line;
  for (const DensityMatrix& rho : set.states) {
    re_line.clear();
    im_line.clear();
    const CMatrix& m = rho.matrix();
    for (int j = 0; j < rho.dim(); ++j) {
      for (int k = 0; k < rho.dim(); ++k) {
        if (j || k) {
          re_line += ' ';
          im_line += ' ';
        }
        re_line += format_number(m(j, k).real());
        im_line += format_number(m(j, k).imag());
      }
    }
    re << re_line << '\n';
    im << im_line << '\n';
  }
  if (!re || !im) throw IoError("write failed for " + basename);

  if (!set.weights.empty()) write_range(range_path, set.weights, true);

  SampleMeta meta = set.meta;
  meta.d = set.d;
  std::ofstream mo = open_out(meta_path);
  mo << meta_to_json(meta);
  if (!mo) throw IoError("write failed for " + meta_path);
}

SampleSet read_set(const std::string& basename) {
  const std::string re_path = basename + "_re.txt";
  const std::string im_path = basename + "_im.txt";
  const std::vector<std::string> re_lines = read_lines(re_path);
  const std::vector<std::string> im_lines = read_lines(im_path);
  if (re_lines.size() != im_lines.size())
    throw RowCountMismatchError(re_lines.size(), im_lines.size(),
                                "row count mismatch: " + re_path + " has " + std::to_string(re_lines.size()) +
                                    " rows, " + im_path + " has " + std::to_string(im_lines.size()));

  SampleSet set;
  for (std::size_t s = 0; s < re_lines.size(); ++s) {
    const std::vector<double> re = parse_row(re_lines[s], re_path, s);
    const std::vector<double> im = parse_row(im_lines[s], im_path, s);
    if (re.size() != im.size())
      throw FormatError("row " + std::to_string(s + 1) + " has " + std::to_string(re.size()) + " real and " +
                        std::to_string(im.size()) + " imaginary entries");
    const int d = side_from_length(re.size(), re_path, s);
    if (s == 0) set.d = d;
    if (d != set.d)
      throw FormatError("row " + std::to_string(s + 1) + " has dimension " + std::to_string(d) +
                        ", earlier rows have " + std::to_string(set.d));
    CMatrix m(d, d);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const auto t = static_cast<std::size_t>(j * d + k);
        m(j, k) = Complex(re[t], im[t]);
      }
    const DensityCheck c = check_density(m);
    if (!c.ok())
      throw InvalidStateError(s, c.min_eigenvalue,
                              "row " + std::to_string(s + 1) + " of " + basename +
                                  " is not a density matrix (min eigenvalue " + format_number(c.min_eigenvalue) +
                                  ", hermitian error " + format_number(c.hermitian_error) + ", trace error " +
                                  format_number(c.trace_error) + ")");
    set.add(density_from_trusted(std::move(m)));
  }

  const std::string range_path = basename + "_range.txt";
  if (fs::exists(range_path)) {
    set.weights = read_range(range_path);
    if (set.weights.size() != set.size())
      throw FormatError(range_path + " has " + std::to_string(set.weights.size()) + " rows for " +
                        std::to_string(set.size()) + " states");
  }
  const std::string meta_path = basename + "_meta.json";
  if (fs::exists(meta_path)) {
    std::ifstream in(meta_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    set.meta = meta_from_json(ss.str());
  }
  set.meta.d = set.d;
  return set;
}

}  // namespace qsample
