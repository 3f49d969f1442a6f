#pragma once

#include <string>
#include <vector>

#include "qsample/sample_set.hpp"

namespace qsample {

// On-disk layout for basename B:
//   B_re.txt, B_im.txt  one state per row, d^2 entries in row-major order
//                       (token j*d + k of row s is entry (j, k) of state s),
//                       17 significant digits, exact zeros written as "0",
//                       single spaces, LF line endings, no header
//   B_range.txt         optional, one fiber volume per line
//   B_meta.json         flat object of SampleMeta fields

/// Canonical rendering: "0" for zeros (either sign), otherwise %.17g.
std::string format_number(double v);

/// Throws IoError if an output file exists and `force` is false.
void write_set(const SampleSet& set, const std::string& basename, bool force = false);

/// Loads states, the optional range file and optional metadata. Throws
/// FormatError (or RowCountMismatchError / InvalidStateError) on bad input.
SampleSet read_set(const std::string& basename);

void write_range(const std::string& path, const std::vector<double>& values, bool force = false);
std::vector<double> read_range(const std::string& path);

std::string meta_to_json(const SampleMeta& meta);
SampleMeta meta_from_json(const std::string& text);

}  // namespace qsample
