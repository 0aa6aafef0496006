#include "nonml/matrix.hpp"

#include <algorithm>

#include "nonml/error.hpp"

namespace nonml {

std::size_t BinaryMatrix::count_ones() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

bool BinaryMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

bool BinaryMatrix::has_zero_diagonal() const {
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i)
    if ((*this)(i, i) != 0) return false;
  return true;
}

bool BinaryMatrix::is_binary() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v <= 1; });
}

BinaryMatrix BinaryMatrix::transposed() const {
  BinaryMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Asymmetric: return "asymmetric";
    case ErrorKind::SelfLoop: return "self-loop";
    case ErrorKind::UnknownLabel: return "unknown-label";
    case ErrorKind::DuplicateLabel: return "duplicate-label";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Invariant: return "invariant";
    case ErrorKind::UnknownStatistic: return "unknown-statistic";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::FixedLayer: return "fixed-layer";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Degeneracy: return "degeneracy";
  }
  return "unknown";
}

}  // namespace nonml
