#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsample {

/// Shapes or dimensions of the inputs do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite or otherwise unusable value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a domain invariant (density matrix, weights, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample files on disk are unreadable, malformed or inconsistent.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stored state failed the density-matrix checks on load.
class InvalidStateError : public FormatError {
 public:
  InvalidStateError(std::size_t row, double min_eigenvalue, const std::string& what)
      : FormatError(what), row_(row), min_eigenvalue_(min_eigenvalue) {}

  std::size_t row() const { return row_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  std::size_t row_;
  double min_eigenvalue_;
};

/// The re/im files of a sample set disagree in their row counts.
class RowCountMismatchError : public FormatError {
 public:
  RowCountMismatchError(std::size_t re_rows, std::size_t im_rows, const std::string& what)
      : FormatError(what), re_rows_(re_rows), im_rows_(im_rows) {}

  std::size_t re_rows() const { return re_rows_; }
  std::size_t im_rows() const { return im_rows_; }

 private:
  std::size_t re_rows_;
  std::size_t im_rows_;
};

/// Filesystem failure, or a refusal to overwrite existing output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsample
