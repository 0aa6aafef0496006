#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nonml {

/// Dense row-major 0/1 matrix. The graphs in scope have at most a few
/// thousand nodes per level, so dense storage is simpler and faster than a
/// sparse layout.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::uint8_t operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::uint8_t& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  const std::uint8_t* row(std::size_t r) const { return data_.data() + r * cols_; }

  /// Sets (r,c) and (c,r).
  void set_symmetric(std::size_t r, std::size_t c, std::uint8_t v) {
    (*this)(r, c) = v;
    (*this)(c, r) = v;
  }

  std::size_t count_ones() const;
  bool is_square() const noexcept { return rows_ == cols_; }
  bool is_symmetric() const;
  bool has_zero_diagonal() const;
  bool is_binary() const;

  BinaryMatrix transposed() const;

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Dense row-major real matrix, used for covariates and summary outputs.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

}  // namespace nonml
